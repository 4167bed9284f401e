#pragma once

#include "tecc/dataset.hpp"
#include "tecc/model.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace tecc {

struct RocPoint {
    double threshold = 0.0;  // a recording is called positive when score >= threshold
    double fpr = 0.0;
    double tpr = 0.0;
};

/// Points ordered by decreasing threshold, from (0, 0) at +inf to (1, 1)
/// at -inf. Tied scores share one point.
struct RocCurve {
    std::vector<RocPoint> points;
    std::size_t num_pos = 0;
    std::size_t num_neg = 0;
};

// Score and label maps must cover the same ids; both classes must appear.
RocCurve roc_curve(const ScoreMap& scores, const std::map<std::string, Label>& labels);
RocCurve roc_curve(std::span<const double> scores, std::span<const Label> labels);

// Trapezoidal area; equals the Mann-Whitney statistic with ties counted 1/2.
double auc(const RocCurve& curve);

struct OperatingPoint {
    double specificity = 0.0;
    double sensitivity = 0.0;
    double threshold = 0.0;
};

inline constexpr double kDefaultTargetSensitivity = 0.8049;

// Highest-specificity point with tpr >= target_tpr (earliest point on ties).
OperatingPoint specificity_at_sensitivity(const RocCurve& curve, double target_tpr = kDefaultTargetSensitivity);

/// Vertical average over a fixed FPR grid {0, 0.01, ..., 1}.
struct AveragedRoc {
    std::vector<double> fpr;
    std::vector<double> mean_tpr;
    std::vector<double> stderr_tpr;

    double area() const;
};

// TPR of a curve at `fpr`, linear between points; at a vertical step the
// upper value is used.
double interpolate_tpr(const RocCurve& curve, double fpr);

AveragedRoc average_roc(std::span<const RocCurve> curves, std::size_t grid_points = 101);

// Sample standard deviation / sqrt(n); zero for fewer than two values.
double standard_error(std::span<const double> values);
double mean(std::span<const double> values);

}  // namespace tecc
