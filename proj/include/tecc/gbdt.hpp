#pragma once

#include "tecc/tree.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tecc {

struct GbdtParams {
    int num_trees = 100;
    double learning_rate = 0.1;
    int max_leaves = 31;
    int min_samples_leaf = 20;
    int max_bins = 255;
    int max_depth = 16;
    double l2_lambda = 1.0;
    // Multiplier on positive-frame gradients and hessians; empty means
    // negative frames / positive frames.
    std::optional<double> pos_weight;
    std::uint64_t seed = 0;

    void validate() const;
    bool operator==(const GbdtParams&) const = default;
};

/// Additive logistic ensemble: p = sigmoid(base_score + learning_rate * sum of tree outputs).
struct GbdtModel {
    std::vector<Tree> trees;
    double learning_rate = 0.1;
    double base_score = 0.0;
    std::size_t feature_dim = 0;
    GbdtParams params;

    double raw_score(std::span<const double> frame) const;
    double predict_proba(std::span<const double> frame) const;
};

// Newton boosting on weighted logistic loss over quantile-binned features,
// growing each tree best-gain-first up to max_leaves. Leaf value -G/(H + l2_lambda).
// Ties between candidate splits go to the lowest feature index, then the
// lowest threshold. When `loss_per_round` is given it receives num_trees + 1
// weighted mean log-losses: before the first tree and after each tree.
GbdtModel train_gbdt(const FrameDataset& data, const GbdtParams& params,
                     std::vector<double>* loss_per_round = nullptr);

double sigmoid(double z);

}  // namespace tecc
