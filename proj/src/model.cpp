#include "logens/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "logens/errors.hpp"

namespace logens {

double sigmoid(double z) {
  if (!std::isfinite(z)) throw std::invalid_argument("sigmoid: non-finite input");
  double s;
  if (z >= 0.0) {
    s = 1.0 / (1.0 + std::exp(-z));
  } else {
    const double e = std::exp(z);
    s = e / (1.0 + e);
  }
  if (s < kProbabilityFloor) return kProbabilityFloor;
  if (s > 1.0 - kProbabilityFloor) return 1.0 - kProbabilityFloor;
  return s;
}

namespace {

void check_layers(int n_layers) {
  if (n_layers < 1 || n_layers > kMaxLayers)
    throw std::invalid_argument("n_layers must be in [1, " + std::to_string(kMaxLayers) +
                                "], got " + std::to_string(n_layers));
}

}  // namespace

EnsembleModel::EnsembleModel(int n_layers, std::size_t feature_dim)
    : n_layers_(n_layers), feature_dim_(feature_dim) {
  check_layers(n_layers);
  if (feature_dim == 0) throw std::invalid_argument("feature_dim must be positive");
  weights_ = Matrix(logens::node_count(n_layers), feature_dim + 1);
}

EnsembleModel::EnsembleModel(int n_layers, std::size_t feature_dim, Matrix weights)
    : n_layers_(n_layers), feature_dim_(feature_dim), weights_(std::move(weights)) {
  check_layers(n_layers);
  if (feature_dim == 0) throw std::invalid_argument("feature_dim must be positive");
  if (weights_.rows() != logens::node_count(n_layers) || weights_.cols() != feature_dim + 1) {
    std::ostringstream msg;
    msg << "weights shape " << weights_.rows() << "x" << weights_.cols() << " does not match "
        << logens::node_count(n_layers) << "x" << feature_dim + 1;
    throw std::invalid_argument(msg.str());
  }
  for (double w : weights_.flat())
    if (!std::isfinite(w)) throw std::invalid_argument("weights must be finite");
}

std::span<const double> EnsembleModel::node_weights(NodeIndex j) const {
  if (j < 1 || j > node_count()) throw std::out_of_range("node index " + std::to_string(j));
  return weights_.row(j - 1);
}

namespace {

double linear_term(std::span<const double> w, std::span<const double> x) {
  double z = w[0];
  for (std::size_t i = 0; i < x.size(); ++i) z += w[i + 1] * x[i];
  return z;
}

void check_dim(const EnsembleModel& model, std::span<const double> x) {
  if (x.size() != model.feature_dim())
    throw std::invalid_argument("feature vector has length " + std::to_string(x.size()) +
                                ", model expects " + std::to_string(model.feature_dim()));
}

}  // namespace

double node_activation(const EnsembleModel& model, NodeIndex j, std::span<const double> x) {
  check_dim(model, x);
  return sigmoid(linear_term(model.node_weights(j), x));
}

void all_activations(const EnsembleModel& model, std::span<const double> x, ActivationCache& cache) {
  check_dim(model, x);
  const std::size_t nodes = model.node_count();
  cache.z.resize(nodes);
  cache.h.resize(nodes);
  for (std::size_t r = 0; r < nodes; ++r) {
    cache.z[r] = linear_term(model.weights().row(r), x);
    cache.h[r] = sigmoid(cache.z[r]);
  }
}

ActivationCache all_activations(const EnsembleModel& model, std::span<const double> x) {
  ActivationCache cache;
  all_activations(model, x, cache);
  return cache;
}

std::string model_to_json(const EnsembleModel& model) {
  nlohmann::json doc;
  doc["n_layers"] = model.n_layers();
  doc["feature_dim"] = model.feature_dim();
  auto rows = nlohmann::json::array();
  for (std::size_t r = 0; r < model.node_count(); ++r) {
    auto row = model.weights().row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  doc["weights"] = std::move(rows);
  return doc.dump(2) + "\n";
}

EnsembleModel model_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    const int n_layers = doc.at("n_layers").get<int>();
    const auto feature_dim = doc.at("feature_dim").get<std::size_t>();
    const auto& rows = doc.at("weights");
    if (!rows.is_array()) throw std::invalid_argument("model JSON: weights must be an array");
    Matrix weights(rows.size(), feature_dim + 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto values = rows[r].get<std::vector<double>>();
      if (values.size() != feature_dim + 1)
        throw std::invalid_argument("model JSON: weight row " + std::to_string(r) + " has " +
                                    std::to_string(values.size()) + " entries");
      std::copy(values.begin(), values.end(), weights.row(r).begin());
    }
    return EnsembleModel(n_layers, feature_dim, std::move(weights));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("model JSON: ") + e.what());
  }
}

void save_model(const EnsembleModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write model file " + path.string());
  out << model_to_json(model);
}

EnsembleModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace logens
