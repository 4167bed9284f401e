#include "tecc/forest.hpp"

#include "tecc/error.hpp"
#include "tecc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tecc {

void ForestParams::validate() const {
    if (num_trees < 1) throw Error("random forest needs at least one tree");
    if (max_features < 0) throw Error("max_features must be non-negative");
    if (min_samples_leaf < 1) throw Error("min_samples_leaf must be at least 1");
    if (max_depth < 1) throw Error("max_depth must be at least 1");
    if (max_bins < 2 || max_bins > 65535) throw Error("max_bins must be in [2, 65535]");
}

double ForestModel::predict_proba(std::span<const double> frame) const {
    if (trees.empty()) return 0.5;
    double votes = 0.0;
    for (const Tree& t : trees) votes += t.predict(frame);
    return votes / static_cast<double>(trees.size());
}

namespace {

struct ClassCount {
    std::uint32_t pos = 0;
    std::uint32_t neg = 0;
};

class ForestTreeBuilder {
public:
    ForestTreeBuilder(const FrameDataset& data, const QuantileBins& bins, const std::vector<std::uint16_t>& binned,
                      const ForestParams& params, std::size_t mtry)
        : data_(data), bins_(bins), binned_(binned), params_(params), mtry_(mtry) {
        std::size_t widest = 0;
        for (std::size_t f = 0; f < data.cols; ++f) widest = std::max(widest, bins.num_bins(f));
        hist_.resize(widest);
        features_.resize(data.cols);
    }

    Tree build(std::uint64_t seed) {
        Rng rng(seed);
        rows_.clear();
        if (params_.bootstrap) {
            rows_.resize(data_.rows);
            for (auto& r : rows_) r = static_cast<std::uint32_t>(rng.uniform_index(data_.rows));
        } else {
            rows_.resize(data_.rows);
            std::iota(rows_.begin(), rows_.end(), 0u);
        }
        scratch_.resize(rows_.size());

        struct Pending {
            int node;
            std::size_t begin;
            std::size_t end;
            int depth;
        };
        Tree tree;
        tree.nodes.emplace_back();
        std::vector<Pending> stack{{0, 0, rows_.size(), 0}};
        while (!stack.empty()) {
            const Pending task = stack.back();
            stack.pop_back();
            ClassCount total;
            for (std::size_t i = task.begin; i < task.end; ++i) {
                if (data_.y[rows_[i]]) ++total.pos;
                else ++total.neg;
            }
            const std::size_t n = task.end - task.begin;
            const auto min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
            const bool pure = total.pos == 0 || total.neg == 0;
            int feature = -1;
            std::uint16_t bin = 0;
            if (!pure && n >= 2 * min_leaf && task.depth < params_.max_depth) {
                std::tie(feature, bin) = best_split(task.begin, task.end, total, rng);
            }
            if (feature < 0) {
                tree.nodes[static_cast<std::size_t>(task.node)].value = 2 * total.pos > n ? 1.0 : 0.0;
                continue;
            }
            const std::size_t mid = partition(task.begin, task.end, static_cast<std::size_t>(feature), bin);
            const int left = static_cast<int>(tree.nodes.size());
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            TreeNode& node = tree.nodes[static_cast<std::size_t>(task.node)];
            node.feature = feature;
            node.threshold = bins_.upper[static_cast<std::size_t>(feature)][bin];
            node.left = left;
            node.right = left + 1;
            stack.push_back({left + 1, mid, task.end, task.depth + 1});
            stack.push_back({left, task.begin, mid, task.depth + 1});
        }
        return tree;
    }

private:
    // Scans features in a random order until mtry features with at least
    // one admissible split have been examined (constant features do not
    // count). Returns (-1, 0) if no admissible split exists.
    std::pair<int, std::uint16_t> best_split(std::size_t begin, std::size_t end, ClassCount total, Rng& rng) {
        std::iota(features_.begin(), features_.end(), 0u);
        rng.shuffle(std::span<std::uint32_t>(features_));
        const std::size_t n = end - begin;
        const auto min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);

        int best_feature = -1;
        std::uint16_t best_bin = 0;
        double best_score = -1.0;
        std::size_t examined = 0;
        for (std::uint32_t f : features_) {
            if (examined >= mtry_) break;
            const std::size_t nb = bins_.num_bins(f);
            std::fill_n(hist_.begin(), nb, ClassCount{});
            for (std::size_t i = begin; i < end; ++i) {
                const std::uint32_t r = rows_[i];
                ClassCount& c = hist_[binned_[static_cast<std::size_t>(r) * data_.cols + f]];
                if (data_.y[r]) ++c.pos;
                else ++c.neg;
            }
            bool admissible = false;
            double lp = 0.0;
            double ln = 0.0;
            for (std::size_t b = 0; b + 1 < nb; ++b) {
                lp += hist_[b].pos;
                ln += hist_[b].neg;
                const double nl = lp + ln;
                if (nl < static_cast<double>(min_leaf)) continue;
                const double nr = static_cast<double>(n) - nl;
                if (nr < static_cast<double>(min_leaf)) break;
                if (hist_[b].pos + hist_[b].neg == 0) continue;  // same partition as the previous bin
                const double rp = total.pos - lp;
                const double rn = total.neg - ln;
                // Maximising this is minimising the size-weighted Gini impurity.
                const double score = (lp * lp + ln * ln) / nl + (rp * rp + rn * rn) / nr;
                admissible = true;
                if (score > best_score) {
                    best_score = score;
                    best_feature = static_cast<int>(f);
                    best_bin = static_cast<std::uint16_t>(b);
                }
            }
            if (admissible) ++examined;
        }
        return {best_feature, best_bin};
    }

    std::size_t partition(std::size_t begin, std::size_t end, std::size_t f, std::uint16_t b) {
        std::size_t left = begin;
        std::size_t right = 0;
        for (std::size_t i = begin; i < end; ++i) {
            const std::uint32_t r = rows_[i];
            if (binned_[static_cast<std::size_t>(r) * data_.cols + f] <= b) rows_[left++] = r;
            else scratch_[right++] = r;
        }
        std::copy_n(scratch_.begin(), right, rows_.begin() + static_cast<std::ptrdiff_t>(left));
        return left;
    }

    const FrameDataset& data_;
    const QuantileBins& bins_;
    const std::vector<std::uint16_t>& binned_;
    const ForestParams& params_;
    std::size_t mtry_;
    std::vector<ClassCount> hist_;
    std::vector<std::uint32_t> features_;
    std::vector<std::uint32_t> rows_;
    std::vector<std::uint32_t> scratch_;
};

}  // namespace

ForestModel train_random_forest(const FrameDataset& data, const ForestParams& params) {
    params.validate();
    require_two_classes(data);
    if (data.cols == 0) throw Error("training frames have no features");

    std::size_t mtry = params.max_features > 0
                           ? static_cast<std::size_t>(params.max_features)
                           : static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(data.cols))));
    mtry = std::clamp<std::size_t>(mtry, 1, data.cols);

    const QuantileBins bins = QuantileBins::fit(data, params.max_bins);
    const std::vector<std::uint16_t> binned = bins.quantize(data);
    ForestTreeBuilder builder(data, bins, binned, params, mtry);

    ForestModel model;
    model.feature_dim = data.cols;
    model.trees.reserve(static_cast<std::size_t>(params.num_trees));
    for (int t = 0; t < params.num_trees; ++t) {
        model.trees.push_back(builder.build(mix_seed(params.seed, static_cast<std::uint64_t>(t))));
    }
    return model;
}

}  // namespace tecc
