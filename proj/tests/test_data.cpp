#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "logens/data.hpp"
#include "logens/errors.hpp"
#include "logens/random.hpp"

using namespace logens;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

const fs::path kWine = fs::path(LOGENS_DATA_DIR) / "winequality-red.csv";

std::string error_of(const auto& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

Matrix column(std::initializer_list<double> values) {
  Matrix m(values.size(), 1);
  std::size_t r = 0;
  for (double v : values) m(r++, 0) = v;
  return m;
}

}  // namespace

TEST_SUITE("data") {

TEST_CASE("load_csv parses both delimiters") {
  TempDir dir("logens_data_load");
  const auto semi = load_csv(dir.write("a.csv", "\"a\";\"b\";\"q\"\n1;2;5\n3;4.5;6\n"), "q");
  CHECK(semi.delimiter == ';');
  CHECK(semi.size() == 2);
  CHECK(semi.feature_names() == std::vector<std::string>{"a", "b"});
  CHECK(semi.target == std::vector<double>{5, 6});
  CHECK(semi.features(1, 1) == 4.5);

  const auto comma = load_csv(dir.write("b.csv", "q,a,b\n7,1,2\n"), "q");
  CHECK(comma.delimiter == ',');
  CHECK(comma.target_index == 0);
  CHECK(comma.features(0, 0) == 1.0);

  const std::vector<std::string> drop{"b"};
  const auto excluded = load_csv(dir.path / "a.csv", "q", drop);
  CHECK(excluded.feature_names() == std::vector<std::string>{"a"});
}

TEST_CASE("load_csv errors") {
  TempDir dir("logens_data_errors");
  CHECK_THROWS_AS(load_csv(dir.path / "nope.csv", "q"), ConfigError);
  CHECK_THROWS_AS(load_csv(dir.write("empty.csv", ""), "q"), ConfigError);
  CHECK_THROWS_AS(load_csv(dir.write("header.csv", "a;q\n"), "q"), ConfigError);
  CHECK_THROWS_AS(load_csv(dir.write("short.csv", "a;q\n1\n"), "q"), ConfigError);

  const auto bad = dir.write("bad.csv", "a;b;q\n1;2;3\n4;x;5\n");
  const std::string msg = error_of([&] { load_csv(bad, "q"); });
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(msg.find("'b'") != std::string::npos);

  const std::string missing = error_of([&] { load_csv(bad, "quality"); });
  CHECK(missing.find("available columns") != std::string::npos);
  CHECK(missing.find("a, b, q") != std::string::npos);
}

TEST_CASE("write_csv keeps the schema") {
  TempDir dir("logens_data_write");
  const auto path = dir.write("in.csv", "\"a\";\"q\";\"b\"\n0.1;5;2\n7.4;6;1e-3\n");
  const auto table = load_csv(path, "q");
  write_csv(table, dir.path / "out.csv");
  const auto back = load_csv(dir.path / "out.csv", "q");
  CHECK(back.columns == table.columns);
  CHECK(back.delimiter == ';');
  CHECK(back.features == table.features);
  CHECK(back.target == table.target);
}

TEST_CASE("encode_labels") {
  const std::vector<double> q{5, 6, 7};
  CHECK(encode_labels(q, 6) == std::vector<int>{0, 1, 1});
  CHECK_THROWS_AS(encode_labels(q, 3), std::invalid_argument);
  CHECK_THROWS_AS(encode_labels(q, 8), std::invalid_argument);
}

TEST_CASE("standardize") {
  const auto s = standardize(column({1, 2, 3}));
  CHECK(s.params.means[0] == 2.0);
  CHECK(std::abs(s.params.stds[0] - std::sqrt(2.0 / 3.0)) <= 1e-15);
  CHECK(std::abs(s.features(0, 0) + 1.224744871391589) <= 1e-12);
  CHECK(s.features(1, 0) == 0.0);
  CHECK(std::abs(s.features(2, 0) - 1.224744871391589) <= 1e-12);

  Rng rng(4);
  Matrix raw(500, 3);
  for (double& v : raw.flat()) v = 5.0 + 3.0 * rng.normal();
  const auto once = standardize(raw);
  const auto twice = standardize(once.features);
  for (std::size_t e = 0; e < raw.size(); ++e)
    CHECK(std::abs(twice.features.flat()[e] - once.features.flat()[e]) <= 1e-12);
  const auto refit = fit_standardization(once.features);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(std::abs(refit.means[c]) <= 1e-12);
    CHECK(std::abs(refit.stds[c] - 1.0) <= 1e-12);
  }
  CHECK(apply_standardization(raw, once.params) == once.features);
  CHECK_THROWS_AS(standardize(column({4, 4, 4})), std::invalid_argument);

  const std::vector<std::string> names{"a", "b", "c"};
  CHECK(standardization_from_json(standardization_to_json(once.params, names)) == once.params);
}

TEST_CASE("augment_gaussian") {
  Rng rng(12);
  const std::size_t K = 4000;
  Matrix raw(K, 2);
  for (std::size_t k = 0; k < K; ++k) {
    raw(k, 0) = 10.0 + 2.0 * rng.normal();
    raw(k, 1) = -3.0 + 0.5 * rng.normal();
  }
  AugmentOptions opts;
  opts.seed = 2;
  const Matrix out = augment_gaussian(raw, opts);
  REQUIRE(out.rows() == 2 * K);
  for (std::size_t k = 0; k < K; ++k) CHECK(out(k, 0) == raw(k, 0));

  const auto moments = fit_standardization(raw);
  for (std::size_t f = 0; f < 2; ++f) {
    double copy_mean = 0.0;
    for (std::size_t k = K; k < 2 * K; ++k) copy_mean += out(k, f);
    copy_mean /= K;
    const double mu = moments.means[f], sigma = moments.stds[f];
    CHECK(std::abs(copy_mean - 1.1 * mu) <= 3.0 * sigma / std::sqrt(double(K)));
  }

  opts.fraction = 0.0;
  const Matrix dup = augment_gaussian(raw, opts);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t f = 0; f < 2; ++f) CHECK(dup(K + k, f) == raw(k, f));

  opts.fraction = -0.1;
  CHECK_THROWS_AS(augment_gaussian(raw, opts), std::invalid_argument);

  Dataset labelled;
  labelled.features = column({1, 2, 3});
  labelled.labels = {0, 1, 1};
  labelled.feature_names = {"x"};
  const auto aug = augment_gaussian(labelled, AugmentOptions{});
  CHECK(aug.labels == std::vector<int>{0, 1, 1, 0, 1, 1});
  CHECK(aug.feature_names == labelled.feature_names);
}

TEST_CASE("split") {
  Dataset d;
  d.features = Matrix(3198, 1);
  d.labels.resize(3198);
  d.feature_names = {"id"};
  for (std::size_t k = 0; k < 3198; ++k) {
    d.features(k, 0) = double(k);
    d.labels[k] = int(k % 2);
  }
  const auto s = split(d, 0.8, 7);
  CHECK(s.train.size() == 2558);
  CHECK(s.test.size() == 640);
  const auto again = split(d, 0.8, 7);
  CHECK(again.train_rows == s.train_rows);
  CHECK(again.test_rows == s.test_rows);
  CHECK_FALSE(split(d, 0.8, 8).train_rows == s.train_rows);

  std::vector<std::size_t> all = s.train_rows;
  all.insert(all.end(), s.test_rows.begin(), s.test_rows.end());
  std::sort(all.begin(), all.end());
  for (std::size_t k = 0; k < all.size(); ++k) CHECK(all[k] == k);
  for (std::size_t k = 0; k < s.train.size(); ++k)
    CHECK(s.train.features(k, 0) == double(s.train_rows[k]));

  Dataset tiny = select_rows(d, std::vector<std::size_t>{0, 1});
  CHECK_THROWS_AS(split(tiny, 0.4, 1), std::invalid_argument);
  CHECK_THROWS_AS(split(tiny, 1.0, 1), std::invalid_argument);
}

TEST_CASE("class_balance_report") {
  const auto b = class_balance_report(std::vector<int>{0, 1, 1});
  CHECK(b.negatives == 1);
  CHECK(b.positives == 2);
  const auto even = class_balance_report(std::vector<int>{0, 1, 0, 1});
  CHECK(even.negative_share == 0.5);
  CHECK(even.positive_share == 0.5);
}

TEST_CASE("dataset CSV round-trip") {
  TempDir dir("logens_data_dataset");
  Rng rng(3);
  Dataset d;
  d.features = Matrix(20, 3);
  for (double& v : d.features.flat()) v = rng.normal();
  for (int k = 0; k < 20; ++k) d.labels.push_back(k % 3 == 0);
  d.feature_names = {"fixed acidity", "pH", "alcohol"};
  write_dataset_csv(d, dir.path / "d.csv");
  const auto back = read_dataset_csv(dir.path / "d.csv");
  CHECK(back.features == d.features);
  CHECK(back.labels == d.labels);
  CHECK(back.feature_names == d.feature_names);
}

TEST_CASE("red wine file through the pipeline") {
  const auto table = load_csv(kWine, "quality");
  CHECK(table.size() == 1599);
  CHECK(table.features.cols() == 11);
  const auto labels = encode_labels(table.target, 6);
  const auto direct = std::count(labels.begin(), labels.end(), 1);
  CHECK(direct == 855);

  PipelineOptions opts;
  opts.augment.seed = 1;
  opts.split_seed = 2;
  const auto prepared = prepare_dataset(table, opts);
  CHECK(prepared.augmented.size() == 3198);
  CHECK(prepared.standardized.size() == 3198);
  CHECK(prepared.split.train.size() == 2558);
  CHECK(prepared.split.test.size() == 640);
  CHECK(prepared.balance.positives == 2 * 855);
  CHECK(prepared.balance.negatives == 2 * 744);

  const auto refit = fit_standardization(prepared.standardized.features);
  for (std::size_t c = 0; c < refit.means.size(); ++c) {
    CHECK(std::abs(refit.means[c]) <= 1e-10);
    CHECK(std::abs(refit.stds[c] - 1.0) <= 1e-10);
  }
  const auto again = prepare_dataset(table, opts);
  CHECK(again.standardized.features == prepared.standardized.features);
  CHECK(again.split.train_rows == prepared.split.train_rows);
}

}  // TEST_SUITE
