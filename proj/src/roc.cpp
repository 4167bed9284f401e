#include "tecc/roc.hpp"

#include "tecc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tecc {

RocCurve roc_curve(std::span<const double> scores, std::span<const Label> labels) {
    if (scores.size() != labels.size()) throw Error("one label per score is required");
    RocCurve curve;
    for (Label l : labels) (l == Label::positive ? curve.num_pos : curve.num_neg)++;
    if (curve.num_pos == 0 || curve.num_neg == 0) throw Error("ROC needs at least one positive and one negative");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (double s : scores) {
        if (std::isnan(s)) throw Error("ROC input contains a NaN score");
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    const double inf = std::numeric_limits<double>::infinity();
    const double P = static_cast<double>(curve.num_pos);
    const double N = static_cast<double>(curve.num_neg);
    curve.points.push_back({inf, 0.0, 0.0});
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double s = scores[order[i]];
        for (; i < order.size() && scores[order[i]] == s; ++i) {
            (labels[order[i]] == Label::positive ? tp : fp)++;
        }
        curve.points.push_back({s, static_cast<double>(fp) / N, static_cast<double>(tp) / P});
    }
    curve.points.push_back({-inf, 1.0, 1.0});
    return curve;
}

RocCurve roc_curve(const ScoreMap& scores, const std::map<std::string, Label>& labels) {
    std::vector<double> s;
    std::vector<Label> y;
    s.reserve(scores.size());
    y.reserve(scores.size());
    for (const auto& [id, score] : scores) {
        auto it = labels.find(id);
        if (it == labels.end()) throw Error("scored recording '" + id + "' has no label");
        s.push_back(score);
        y.push_back(it->second);
    }
    for (const auto& [id, label] : labels) {
        (void)label;
        if (!scores.contains(id)) throw Error("no score for recording '" + id + "'");
    }
    return roc_curve(s, y);
}

double auc(const RocCurve& curve) {
    double area = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const RocPoint& a = curve.points[i - 1];
        const RocPoint& b = curve.points[i];
        area += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
    }
    return area;
}

OperatingPoint specificity_at_sensitivity(const RocCurve& curve, double target_tpr) {
    if (!(target_tpr > 0.0 && target_tpr <= 1.0)) throw Error("target sensitivity must be in (0, 1]");
    if (curve.points.empty()) throw Error("empty ROC curve");
    const RocPoint* best = nullptr;
    for (const RocPoint& p : curve.points) {
        if (p.tpr < target_tpr) continue;
        if (!best || (1.0 - p.fpr) > (1.0 - best->fpr)) best = &p;
    }
    if (!best) throw Error("target sensitivity is unreachable on this curve");
    return {1.0 - best->fpr, best->tpr, best->threshold};
}

double interpolate_tpr(const RocCurve& curve, double fpr) {
    const auto& pts = curve.points;
    if (pts.empty()) throw Error("empty ROC curve");
    // Last point with fpr <= x carries the upper value of any vertical step at x.
    const auto after = std::upper_bound(pts.begin(), pts.end(), fpr,
                                        [](double x, const RocPoint& p) { return x < p.fpr; });
    if (after == pts.begin()) return pts.front().tpr;
    const RocPoint& lo = *(after - 1);
    if (lo.fpr == fpr || after == pts.end()) return lo.tpr;
    const RocPoint& hi = *after;
    const double t = (fpr - lo.fpr) / (hi.fpr - lo.fpr);
    return lo.tpr + t * (hi.tpr - lo.tpr);
}

double mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double standard_error(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

AveragedRoc average_roc(std::span<const RocCurve> curves, std::size_t grid_points) {
    if (curves.size() < 2) throw Error("averaging needs at least two ROC curves");
    if (grid_points < 2) throw Error("FPR grid needs at least two points");
    AveragedRoc out;
    out.fpr.resize(grid_points);
    out.mean_tpr.resize(grid_points);
    out.stderr_tpr.resize(grid_points);
    std::vector<double> column(curves.size());
    for (std::size_t g = 0; g < grid_points; ++g) {
        const double x = static_cast<double>(g) / static_cast<double>(grid_points - 1);
        for (std::size_t c = 0; c < curves.size(); ++c) column[c] = interpolate_tpr(curves[c], x);
        out.fpr[g] = x;
        out.mean_tpr[g] = mean(column);
        out.stderr_tpr[g] = standard_error(column);
    }
    return out;
}

double AveragedRoc::area() const {
    double a = 0.0;
    for (std::size_t i = 1; i < fpr.size(); ++i) a += (fpr[i] - fpr[i - 1]) * (mean_tpr[i] + mean_tpr[i - 1]) * 0.5;
    return a;
}

}  // namespace tecc
