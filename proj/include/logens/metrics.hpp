#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace logens {

/// 1 iff score >= threshold.
std::vector<int> classify(std::span<const double> scores, double threshold = 0.5);

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

/// Precision and recall are empty when their denominator is zero.
struct MetricsReport {
  double accuracy = 0.0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> auc;
  Confusion confusion;
};

MetricsReport confusion_and_rates(std::span<const int> predictions, std::span<const int> labels);

struct RocPoint {
  double fpr;
  double tpr;
  double threshold;  ///< scores >= threshold are called positive; +inf at the origin
};

struct RocCurve {
  std::vector<RocPoint> points;
};

struct RocResult {
  RocCurve curve;
  double auc;
};

/// ROC swept over every distinct score, from (0,0) to (1,1). Tied scores
/// move both rates in one step, so the trapezoid area gives ties half
/// credit. The area is accumulated in integer counts and divided once.
/// Throws std::invalid_argument unless both classes are present.
RocResult roc_auc(std::span<const double> scores, std::span<const int> labels);

/// Plain trapezoidal area under a curve's points.
double trapezoid_area(const RocCurve& curve);

/// CSV with header `fpr,tpr,threshold`.
void write_roc_csv(const RocCurve& curve, const std::filesystem::path& path);
RocCurve read_roc_csv(const std::filesystem::path& path);

}  // namespace logens
