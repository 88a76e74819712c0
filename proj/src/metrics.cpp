#include "logens/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "logens/errors.hpp"
#include "logens/format.hpp"

namespace logens {

std::vector<int> classify(std::span<const double> scores, double threshold) {
  std::vector<int> out(scores.size());
  std::transform(scores.begin(), scores.end(), out.begin(),
                 [threshold](double s) { return s >= threshold ? 1 : 0; });
  return out;
}

namespace {

void check_binary(std::span<const int> labels) {
  for (int y : labels)
    if (y != 0 && y != 1) throw std::invalid_argument("labels must be 0 or 1");
}

}  // namespace

MetricsReport confusion_and_rates(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size())
    throw std::invalid_argument("predictions and labels differ in length");
  if (labels.empty()) throw std::invalid_argument("no points to evaluate");
  check_binary(labels);
  check_binary(predictions);

  MetricsReport report;
  auto& c = report.confusion;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (predictions[k] == 1)
      (labels[k] == 1 ? c.tp : c.fp)++;
    else
      (labels[k] == 1 ? c.fn : c.tn)++;
  }
  report.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  if (c.tp + c.fp > 0)
    report.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) report.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  return report;
}

RocResult roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("scores and labels differ in length");
  check_binary(labels);
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0)
    throw std::invalid_argument("ROC/AUC needs both classes among the labels");
  for (double s : scores)
    if (std::isnan(s)) throw std::invalid_argument("scores must not be NaN");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  const auto p = static_cast<double>(positives);
  const auto n = static_cast<double>(negatives);
  RocResult result;
  result.curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});

  // Twice the area in units of (one negative) x (one positive).
  unsigned long long doubled_area = 0;
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    const std::size_t tp_before = tp, fp_before = fp;
    for (; i < order.size() && scores[order[i]] == threshold; ++i)
      (labels[order[i]] == 1 ? tp : fp)++;
    doubled_area += static_cast<unsigned long long>(fp - fp_before) * (tp + tp_before);
    result.curve.points.push_back(
        {static_cast<double>(fp) / n, static_cast<double>(tp) / p, threshold});
  }
  result.auc = static_cast<double>(doubled_area) / (2.0 * p * n);
  return result;
}

double trapezoid_area(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return area;
}

void write_roc_csv(const RocCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "fpr,tpr,threshold\n";
  for (const auto& pt : curve.points)
    out << format_real(pt.fpr) << ',' << format_real(pt.tpr) << ',' << format_real(pt.threshold)
        << '\n';
}

RocCurve read_roc_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "fpr,tpr,threshold")
    throw std::invalid_argument(path.string() + ": expected header `fpr,tpr,threshold`");
  RocCurve curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::invalid_argument(path.string() + ": bad row " + line);
    curve.points.push_back({parse_real(line.substr(0, c1)), parse_real(line.substr(c1 + 1, c2 - c1 - 1)),
                            parse_real(line.substr(c2 + 1))});
  }
  return curve;
}

}  // namespace logens
