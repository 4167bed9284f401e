#include "tecc/tree.hpp"

#include "tecc/error.hpp"

#include <algorithm>
#include <limits>

namespace tecc {

std::size_t FrameDataset::positives() const {
    return static_cast<std::size_t>(std::count(y.begin(), y.end(), std::uint8_t{1}));
}

FrameDataset build_frame_dataset(std::span<const FeatureMatrix* const> recordings,
                                 std::span<const Label> labels) {
    if (recordings.size() != labels.size()) throw Error("one label per recording is required");
    FrameDataset out;
    bool have_cols = false;
    for (std::size_t i = 0; i < recordings.size(); ++i) {
        const FeatureMatrix& m = *recordings[i];
        if (m.empty()) continue;
        if (!have_cols) {
            out.cols = m.cols();
            have_cols = true;
        } else if (m.cols() != out.cols) {
            throw Error("feature dimension mismatch: recording '" + m.meta().recording_id + "' has " +
                        std::to_string(m.cols()) + " columns, expected " + std::to_string(out.cols));
        }
        out.x.insert(out.x.end(), m.data().begin(), m.data().end());
        out.y.insert(out.y.end(), m.rows(), labels[i] == Label::positive ? 1 : 0);
        out.rows += m.rows();
    }
    if (out.rows == 0) throw Error("no training frames");
    return out;
}

FrameDataset build_frame_dataset(std::span<const FeatureMatrix> recordings, std::span<const Label> labels) {
    std::vector<const FeatureMatrix*> ptrs;
    ptrs.reserve(recordings.size());
    for (const auto& m : recordings) ptrs.push_back(&m);
    return build_frame_dataset(std::span<const FeatureMatrix* const>(ptrs), labels);
}

void require_two_classes(const FrameDataset& data) {
    if (data.rows == 0) throw Error("no training frames");
    const std::size_t pos = data.positives();
    if (pos == 0 || pos == data.rows) throw Error("training frames contain a single class");
}

QuantileBins QuantileBins::fit(const FrameDataset& data, int max_bins) {
    if (max_bins < 2 || max_bins > 65535) throw Error("max_bins must be in [2, 65535]");
    if (data.rows == 0) throw Error("cannot bin an empty dataset");
    QuantileBins bins;
    bins.upper.resize(data.cols);
    std::vector<double> column(data.rows);
    const auto limit = static_cast<std::size_t>(max_bins);
    for (std::size_t f = 0; f < data.cols; ++f) {
        for (std::size_t r = 0; r < data.rows; ++r) column[r] = data.x[r * data.cols + f];
        std::sort(column.begin(), column.end());
        std::vector<double> distinct;
        std::unique_copy(column.begin(), column.end(), std::back_inserter(distinct));
        auto& edges = bins.upper[f];
        if (distinct.size() <= limit) {
            edges = std::move(distinct);
        } else {
            const std::size_t n = column.size();
            for (std::size_t b = 1; b <= limit; ++b) {
                const std::size_t idx = (b * n + limit - 1) / limit - 1;  // ceil(b n / B) - 1
                const double v = column[idx];
                if (edges.empty() || v > edges.back()) edges.push_back(v);
            }
        }
    }
    return bins;
}

std::uint16_t QuantileBins::bin_of(std::size_t feature, double value) const {
    const auto& edges = upper[feature];
    const auto it = std::lower_bound(edges.begin(), edges.end(), value);
    const auto idx = static_cast<std::size_t>(it - edges.begin());
    return static_cast<std::uint16_t>(std::min(idx, edges.size() - 1));
}

std::vector<std::uint16_t> QuantileBins::quantize(const FrameDataset& data) const {
    if (data.cols != upper.size()) throw Error("bin edges fitted for a different feature dimension");
    std::vector<std::uint16_t> out(data.rows * data.cols);
    for (std::size_t r = 0; r < data.rows; ++r) {
        for (std::size_t f = 0; f < data.cols; ++f) out[r * data.cols + f] = bin_of(f, data.x[r * data.cols + f]);
    }
    return out;
}

double Tree::predict(std::span<const double> x) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        const TreeNode& n = nodes[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return nodes[i].value;
}

int Tree::depth() const {
    if (nodes.empty()) return 0;
    int deepest = 0;
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [idx, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        const TreeNode& n = nodes[static_cast<std::size_t>(idx)];
        if (!n.is_leaf()) {
            stack.emplace_back(n.left, d + 1);
            stack.emplace_back(n.right, d + 1);
        }
    }
    return deepest;
}

std::size_t Tree::num_leaves() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

}  // namespace tecc
