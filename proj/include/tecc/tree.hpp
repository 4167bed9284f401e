#pragma once

#include "tecc/cepstral.hpp"
#include "tecc/dataset.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace tecc {

// Frames pooled across recordings, one label per frame.
struct FrameDataset {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> x;  // rows x cols, row-major
    std::vector<std::uint8_t> y;

    std::span<const double> row(std::size_t r) const { return {x.data() + r * cols, cols}; }
    std::size_t positives() const;
};

// Every frame inherits its recording's label. Throws on empty input or a
// column-count mismatch between matrices.
FrameDataset build_frame_dataset(std::span<const FeatureMatrix> recordings, std::span<const Label> labels);
FrameDataset build_frame_dataset(std::span<const FeatureMatrix* const> recordings,
                                 std::span<const Label> labels);

// Throws unless both classes have at least one frame.
void require_two_classes(const FrameDataset& data);

/// Per-feature quantile bin edges. Bin b of feature f holds values in
/// (upper[f][b-1], upper[f][b]]; when a feature has at most max_bins distinct
/// values every distinct value gets its own bin, so splits are exact.
struct QuantileBins {
    std::vector<std::vector<double>> upper;

    static QuantileBins fit(const FrameDataset& data, int max_bins);
    std::size_t num_bins(std::size_t feature) const { return upper[feature].size(); }
    std::uint16_t bin_of(std::size_t feature, double value) const;
    // rows x cols bin indices, row-major.
    std::vector<std::uint16_t> quantize(const FrameDataset& data) const;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;

    bool is_leaf() const { return feature < 0; }
};

/// Binary tree in a flat node array, root at index 0. A frame goes left
/// when x[feature] <= threshold.
struct Tree {
    std::vector<TreeNode> nodes;

    double predict(std::span<const double> x) const;
    int depth() const;
    std::size_t num_leaves() const;
};

}  // namespace tecc
