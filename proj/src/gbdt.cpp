#include "tecc/gbdt.hpp"

#include "tecc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tecc {

void GbdtParams::validate() const {
    if (num_trees < 0) throw Error("num_trees must be non-negative");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw Error("learning_rate must be in (0, 1]");
    if (max_leaves < 2) throw Error("max_leaves must be at least 2");
    if (min_samples_leaf < 1) throw Error("min_samples_leaf must be at least 1");
    if (max_bins < 2 || max_bins > 65535) throw Error("max_bins must be in [2, 65535]");
    if (max_depth < 1) throw Error("max_depth must be at least 1");
    if (!(l2_lambda >= 0.0)) throw Error("l2_lambda must be non-negative");
    if (pos_weight && !(*pos_weight > 0.0)) throw Error("pos_weight must be positive");
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double GbdtModel::raw_score(std::span<const double> frame) const {
    double acc = 0.0;
    for (const Tree& t : trees) acc += t.predict(frame);
    return base_score + learning_rate * acc;
}

double GbdtModel::predict_proba(std::span<const double> frame) const {
    constexpr double kLo = std::numeric_limits<double>::min();
    const double hi = std::nextafter(1.0, 0.0);
    return std::clamp(sigmoid(raw_score(frame)), kLo, hi);
}

namespace {

struct BinStat {
    double g = 0.0;
    double h = 0.0;
    std::uint32_t n = 0;
};

struct Split {
    double gain = 0.0;
    int feature = -1;
    std::uint16_t bin = 0;
    bool valid() const { return feature >= 0; }
};

struct Leaf {
    int node = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
    int depth = 0;
    double g = 0.0;
    double h = 0.0;
    std::vector<BinStat> hist;
    Split best;
};

class TreeGrower {
public:
    TreeGrower(const FrameDataset& data, const QuantileBins& bins, const std::vector<std::uint16_t>& binned,
               const GbdtParams& params)
        : data_(data), bins_(bins), binned_(binned), params_(params) {
        offsets_.resize(data.cols + 1, 0);
        for (std::size_t f = 0; f < data.cols; ++f) offsets_[f + 1] = offsets_[f] + bins.num_bins(f);
        rows_.resize(data.rows);
        scratch_.resize(data.rows);
    }

    // Fits one tree to (grad, hess) and adds learning_rate * leaf value to `raw`.
    Tree grow(const std::vector<double>& grad, const std::vector<double>& hess, std::vector<double>& raw) {
        grad_ = &grad;
        hess_ = &hess;
        for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i] = static_cast<std::uint32_t>(i);

        Tree tree;
        tree.nodes.emplace_back();
        std::vector<Leaf> leaves;
        leaves.push_back(make_leaf(0, 0, rows_.size(), 0));
        leaves.back().hist = build_hist(0, rows_.size());
        find_split(leaves.back());

        while (static_cast<int>(leaves.size()) < params_.max_leaves) {
            // Highest gain wins; ties go to the earliest leaf.
            std::size_t pick = leaves.size();
            for (std::size_t i = 0; i < leaves.size(); ++i) {
                if (!leaves[i].best.valid()) continue;
                if (pick == leaves.size() || leaves[i].best.gain > leaves[pick].best.gain) pick = i;
            }
            if (pick == leaves.size()) break;

            Leaf parent = std::move(leaves[pick]);
            const auto f = static_cast<std::size_t>(parent.best.feature);
            const std::uint16_t b = parent.best.bin;
            const std::size_t mid = partition(parent.begin, parent.end, f, b);

            const int left_id = static_cast<int>(tree.nodes.size());
            const int right_id = left_id + 1;
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            TreeNode& node = tree.nodes[static_cast<std::size_t>(parent.node)];
            node.feature = static_cast<int>(f);
            node.threshold = bins_.upper[f][b];
            node.left = left_id;
            node.right = right_id;

            Leaf left = make_leaf(left_id, parent.begin, mid, parent.depth + 1);
            Leaf right = make_leaf(right_id, mid, parent.end, parent.depth + 1);
            // Build the smaller child directly, derive the other by subtraction.
            Leaf& small = (mid - parent.begin) <= (parent.end - mid) ? left : right;
            Leaf& large = &small == &left ? right : left;
            small.hist = build_hist(small.begin, small.end);
            large.hist = std::move(parent.hist);
            for (std::size_t i = 0; i < large.hist.size(); ++i) {
                large.hist[i].g -= small.hist[i].g;
                large.hist[i].h -= small.hist[i].h;
                large.hist[i].n -= small.hist[i].n;
            }
            find_split(left);
            find_split(right);
            leaves[pick] = std::move(left);
            leaves.insert(leaves.begin() + static_cast<std::ptrdiff_t>(pick) + 1, std::move(right));
        }

        for (const Leaf& leaf : leaves) {
            const double value = -leaf.g / (leaf.h + params_.l2_lambda);
            tree.nodes[static_cast<std::size_t>(leaf.node)].value = value;
            const double step = params_.learning_rate * value;
            for (std::size_t i = leaf.begin; i < leaf.end; ++i) raw[rows_[i]] += step;
        }
        return tree;
    }

private:
    Leaf make_leaf(int node, std::size_t begin, std::size_t end, int depth) const {
        Leaf leaf;
        leaf.node = node;
        leaf.begin = begin;
        leaf.end = end;
        leaf.depth = depth;
        for (std::size_t i = begin; i < end; ++i) {
            leaf.g += (*grad_)[rows_[i]];
            leaf.h += (*hess_)[rows_[i]];
        }
        return leaf;
    }

    std::vector<BinStat> build_hist(std::size_t begin, std::size_t end) const {
        std::vector<BinStat> hist(offsets_.back());
        const std::size_t cols = data_.cols;
        for (std::size_t i = begin; i < end; ++i) {
            const std::uint32_t r = rows_[i];
            const double g = (*grad_)[r];
            const double h = (*hess_)[r];
            const std::uint16_t* row_bins = binned_.data() + static_cast<std::size_t>(r) * cols;
            for (std::size_t f = 0; f < cols; ++f) {
                BinStat& s = hist[offsets_[f] + row_bins[f]];
                s.g += g;
                s.h += h;
                ++s.n;
            }
        }
        return hist;
    }

    void find_split(Leaf& leaf) const {
        leaf.best = Split{};
        const std::size_t count = leaf.end - leaf.begin;
        const auto min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
        if (leaf.depth >= params_.max_depth || count < 2 * min_leaf) return;
        const double lambda = params_.l2_lambda;
        const double parent_score = leaf.g * leaf.g / (leaf.h + lambda);
        // Ignore gains at the level of accumulated rounding.
        const double min_gain = 1e-10 * (leaf.h + lambda);
        for (std::size_t f = 0; f < data_.cols; ++f) {
            const std::size_t nb = bins_.num_bins(f);
            double gl = 0.0;
            double hl = 0.0;
            std::size_t nl = 0;
            for (std::size_t b = 0; b + 1 < nb; ++b) {
                const BinStat& s = leaf.hist[offsets_[f] + b];
                gl += s.g;
                hl += s.h;
                nl += s.n;
                if (nl < min_leaf) continue;
                const std::size_t nr = count - nl;
                if (nr < min_leaf) break;
                const double gr = leaf.g - gl;
                const double hr = leaf.h - hl;
                const double gain = gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - parent_score;
                if (gain > min_gain && gain > leaf.best.gain) {
                    leaf.best = Split{gain, static_cast<int>(f), static_cast<std::uint16_t>(b)};
                }
            }
        }
    }

    // Stable partition of rows_[begin, end) by bin <= b; returns the split point.
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
    const GbdtParams& params_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> rows_;
    std::vector<std::uint32_t> scratch_;
    const std::vector<double>* grad_ = nullptr;
    const std::vector<double>* hess_ = nullptr;
};

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double weighted_logloss(const std::vector<double>& raw, const std::vector<std::uint8_t>& y,
                        const std::vector<double>& w) {
    double loss = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        // -log p = softplus(-z), -log(1 - p) = softplus(z)
        loss += w[i] * (y[i] ? softplus(-raw[i]) : softplus(raw[i]));
        total += w[i];
    }
    return loss / total;
}

}  // namespace

GbdtModel train_gbdt(const FrameDataset& data, const GbdtParams& params, std::vector<double>* loss_per_round) {
    params.validate();
    require_two_classes(data);
    if (data.cols == 0) throw Error("training frames have no features");
    if (data.rows > std::numeric_limits<std::uint32_t>::max()) throw Error("too many training frames");

    const std::size_t pos = data.positives();
    const std::size_t neg = data.rows - pos;
    const double pos_weight = params.pos_weight.value_or(static_cast<double>(neg) / static_cast<double>(pos));

    std::vector<double> weight(data.rows);
    double wpos = 0.0;
    double wall = 0.0;
    for (std::size_t i = 0; i < data.rows; ++i) {
        weight[i] = data.y[i] ? pos_weight : 1.0;
        wall += weight[i];
        if (data.y[i]) wpos += weight[i];
    }
    const double rate = wpos / wall;

    GbdtModel model;
    model.learning_rate = params.learning_rate;
    model.base_score = std::log(rate / (1.0 - rate));
    model.feature_dim = data.cols;
    model.params = params;
    model.trees.reserve(static_cast<std::size_t>(params.num_trees));

    const QuantileBins bins = QuantileBins::fit(data, params.max_bins);
    const std::vector<std::uint16_t> binned = bins.quantize(data);
    TreeGrower grower(data, bins, binned, params);

    std::vector<double> raw(data.rows, model.base_score);
    std::vector<double> grad(data.rows);
    std::vector<double> hess(data.rows);
    if (loss_per_round) {
        loss_per_round->clear();
        loss_per_round->push_back(weighted_logloss(raw, data.y, weight));
    }
    for (int round = 0; round < params.num_trees; ++round) {
        for (std::size_t i = 0; i < data.rows; ++i) {
            const double p = sigmoid(raw[i]);
            grad[i] = weight[i] * (p - static_cast<double>(data.y[i]));
            hess[i] = weight[i] * std::max(p * (1.0 - p), 1e-16);
        }
        model.trees.push_back(grower.grow(grad, hess, raw));
        if (loss_per_round) loss_per_round->push_back(weighted_logloss(raw, data.y, weight));
    }
    return model;
}

}  // namespace tecc
