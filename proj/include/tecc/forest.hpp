#pragma once

#include "tecc/tree.hpp"

#include <cstdint>
#include <vector>

namespace tecc {

struct ForestParams {
    int num_trees = 100;
    // Candidate features per split; 0 means round(sqrt(dim)).
    int max_features = 0;
    bool bootstrap = true;
    int min_samples_leaf = 1;
    int max_depth = 64;
    int max_bins = 255;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Gini trees whose leaves vote 0 or 1; the frame probability is the
/// fraction of trees voting positive.
struct ForestModel {
    std::vector<Tree> trees;
    std::size_t feature_dim = 0;

    double predict_proba(std::span<const double> frame) const;
};

// Tree t draws its bootstrap sample and per-node feature order from a
// generator seeded with mix_seed(seed, t), so results do not depend on
// thread scheduling.
ForestModel train_random_forest(const FrameDataset& data, const ForestParams& params);

}  // namespace tecc
