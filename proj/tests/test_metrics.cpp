#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <vector>

#include "logens/metrics.hpp"
#include "logens/random.hpp"
#include "oracles.hpp"

using namespace logens;

namespace {

struct Instance {
  std::vector<double> scores;
  std::vector<int> labels;
};

/// Random instance with both classes and plenty of ties.
Instance random_instance(Rng& rng) {
  Instance in;
  const std::size_t size = 2 + rng.below(49);
  const bool coarse = rng.below(2) == 0;
  do {
    in.scores.clear();
    in.labels.clear();
    for (std::size_t k = 0; k < size; ++k) {
      in.labels.push_back(static_cast<int>(rng.below(2)));
      in.scores.push_back(coarse ? static_cast<double>(rng.below(5)) / 4.0 : rng.uniform());
    }
  } while (std::count(in.labels.begin(), in.labels.end(), 1) == 0 ||
           std::count(in.labels.begin(), in.labels.end(), 0) == 0);
  return in;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("classify is inclusive at the threshold") {
  const std::vector<double> s{0.4, 0.5, 0.6};
  CHECK(classify(s) == std::vector<int>{0, 1, 1});
  CHECK(classify(std::vector<double>{0.5, 0.5}) == std::vector<int>{1, 1});
  CHECK(classify(s, 0.0) == std::vector<int>{1, 1, 1});
}

TEST_CASE("confusion counts and rates") {
  // tp=2, fp=1, fn=1, tn=6
  const std::vector<int> pred{1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
  const std::vector<int> label{1, 1, 0, 1, 0, 0, 0, 0, 0, 0};
  const auto r = confusion_and_rates(pred, label);
  CHECK(r.confusion.tp == 2);
  CHECK(r.confusion.fp == 1);
  CHECK(r.confusion.fn == 1);
  CHECK(r.confusion.tn == 6);
  CHECK(r.confusion.total() == 10);
  CHECK(r.accuracy == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(*r.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(*r.recall == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  const auto perfect = confusion_and_rates(label, label);
  CHECK(perfect.accuracy == 1.0);
  CHECK(*perfect.precision == 1.0);
  CHECK(*perfect.recall == 1.0);

  const std::vector<int> balanced{0, 1, 0, 1};
  const auto all_pos = confusion_and_rates(std::vector<int>{1, 1, 1, 1}, balanced);
  CHECK(*all_pos.recall == 1.0);
  CHECK(*all_pos.precision == 0.5);

  const auto none = confusion_and_rates(std::vector<int>{0, 0, 0, 0}, balanced);
  CHECK_FALSE(none.precision.has_value());
  CHECK(*none.recall == 0.0);

  CHECK_THROWS_AS(confusion_and_rates(std::vector<int>{1}, balanced), std::invalid_argument);
  CHECK_THROWS_AS(confusion_and_rates(std::vector<int>{2}, std::vector<int>{1}),
                  std::invalid_argument);
}

TEST_CASE("AUC worked values") {
  const std::vector<int> labels{0, 0, 1, 1};
  CHECK(roc_auc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, labels).auc == 0.75);
  CHECK(roc_auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, labels).auc == 1.0);
  CHECK(roc_auc(std::vector<double>{0.9, 0.8, 0.2, 0.1}, labels).auc == 0.0);
  CHECK(roc_auc(std::vector<double>{0.3, 0.3, 0.3, 0.3}, labels).auc == 0.5);
  CHECK_THROWS_AS(roc_auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}),
                  std::invalid_argument);
}

TEST_CASE("ROC curve shape") {
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const auto in = random_instance(rng);
    const auto curve = roc_auc(in.scores, in.labels).curve;
    REQUIRE(curve.points.size() >= 2);
    CHECK(curve.points.front().fpr == 0.0);
    CHECK(curve.points.front().tpr == 0.0);
    CHECK(std::isinf(curve.points.front().threshold));
    CHECK(curve.points.back().fpr == 1.0);
    CHECK(curve.points.back().tpr == 1.0);
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
      CHECK(curve.points[i].fpr >= curve.points[i - 1].fpr);
      CHECK(curve.points[i].tpr >= curve.points[i - 1].tpr);
      CHECK(curve.points[i].threshold < curve.points[i - 1].threshold);
    }
  }
}

TEST_CASE("AUC equals the pairwise statistic") {
  Rng rng(2024);
  for (int t = 0; t < 200; ++t) {
    const auto in = random_instance(rng);
    const auto result = roc_auc(in.scores, in.labels);
    const double pairs = testing::pairwise_auc(in.scores, in.labels);
    CHECK(result.auc == pairs);
    CHECK(std::abs(trapezoid_area(result.curve) - pairs) <= 1e-12);
  }
}

TEST_CASE("AUC is invariant under monotone transforms") {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto in = random_instance(rng);
    std::vector<double> moved;
    for (double s : in.scores) moved.push_back(std::exp(3.0 * s) - 7.0);
    CHECK(roc_auc(moved, in.labels).auc == roc_auc(in.scores, in.labels).auc);
  }
}

TEST_CASE("ROC CSV round-trip") {
  const auto dir = std::filesystem::temp_directory_path() / "logens_metrics_test";
  std::filesystem::create_directories(dir);
  const auto curve = roc_auc(std::vector<double>{0.1, 0.4, 0.35, 0.8, 1.0 / 3.0},
                             std::vector<int>{0, 0, 1, 1, 0})
                         .curve;
  write_roc_csv(curve, dir / "roc.csv");
  const auto back = read_roc_csv(dir / "roc.csv");
  REQUIRE(back.points.size() == curve.points.size());
  for (std::size_t i = 0; i < back.points.size(); ++i) {
    CHECK(back.points[i].fpr == curve.points[i].fpr);
    CHECK(back.points[i].tpr == curve.points[i].tpr);
    CHECK(back.points[i].threshold == curve.points[i].threshold);
  }
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
