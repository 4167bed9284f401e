#include "tecc/crossval.hpp"

#include "tecc/error.hpp"
#include "tecc/parallel.hpp"
#include "tecc/rng.hpp"

#include <algorithm>

namespace tecc {

LabelledFeatures LabelledFeatures::from_manifest(const DatasetManifest& manifest, std::vector<FeatureMatrix> features) {
    if (features.size() != manifest.entries.size()) throw Error("one feature matrix per manifest entry is required");
    LabelledFeatures out;
    for (const auto& e : manifest.entries) {
        out.ids.push_back(e.recording_id);
        out.labels.push_back(e.label);
    }
    out.features = std::move(features);
    return out;
}

EvalReport evaluate_scores(const ScoreMap& scores, const std::map<std::string, Label>& labels,
                           double target_sensitivity) {
    const RocCurve curve = roc_curve(scores, labels);
    EvalReport report;
    report.auc = auc(curve);
    report.sensitivity_target = target_sensitivity;
    report.operating_point = specificity_at_sensitivity(curve, target_sensitivity);
    report.num_pos = curve.num_pos;
    report.num_neg = curve.num_neg;
    return report;
}

ScoreMap score_recordings(const FrameModel& model, const LabelledFeatures& data, std::span<const std::size_t> which) {
    ScoreMap out;
    for (std::size_t i : which) {
        const auto probs = predict_frames(model, data.features[i]);
        out.emplace(data.ids[i], score_recording(probs, data.ids[i]).score);
    }
    return out;
}

namespace {

struct FoldSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validate;
};

std::vector<FoldSplit> split_folds(const LabelledFeatures& data, const FoldAssignment& folds) {
    if (folds.k < 2) throw Error("cross-validation needs at least 2 folds");
    std::vector<FoldSplit> splits(static_cast<std::size_t>(folds.k));
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto it = folds.fold_of.find(data.ids[i]);
        if (it == folds.fold_of.end()) throw Error("recording '" + data.ids[i] + "' has no fold assignment");
        if (it->second < 0 || it->second >= folds.k) throw Error("recording '" + data.ids[i] + "' has an invalid fold");
        for (int f = 0; f < folds.k; ++f) {
            auto& split = splits[static_cast<std::size_t>(f)];
            (f == it->second ? split.validate : split.train).push_back(i);
        }
    }
    for (std::size_t f = 0; f < splits.size(); ++f) {
        bool pos = false;
        bool neg = false;
        for (std::size_t i : splits[f].validate) (data.labels[i] == Label::positive ? pos : neg) = true;
        if (!pos || !neg) {
            throw Error("degenerate fold " + std::to_string(f) + ": validation recordings are all one class");
        }
    }
    return splits;
}

FrameModel train_on(const LabelledFeatures& data, std::span<const std::size_t> rows, const ClassifierParams& params) {
    std::vector<const FeatureMatrix*> mats;
    std::vector<Label> labels;
    mats.reserve(rows.size());
    labels.reserve(rows.size());
    for (std::size_t i : rows) {
        mats.push_back(&data.features[i]);
        labels.push_back(data.labels[i]);
    }
    const FrameDataset frames = build_frame_dataset(std::span<const FeatureMatrix* const>(mats), labels);
    return train_classifier(frames, params);
}

std::map<std::string, Label> labels_for(const LabelledFeatures& data, std::span<const std::size_t> which) {
    std::map<std::string, Label> out;
    for (std::size_t i : which) out.emplace(data.ids[i], data.labels[i]);
    return out;
}

}  // namespace

CrossValidationResult cross_validate(const LabelledFeatures& data, const FoldAssignment& folds,
                                     const ClassifierParams& params, int jobs, double target_sensitivity) {
    const auto splits = split_folds(data, folds);
    const auto fold_scores = parallel_map(splits.size(), jobs, [&](std::size_t f) {
        const FrameModel model = train_on(data, splits[f].train, params);
        return score_recordings(model, data, splits[f].validate);
    });

    CrossValidationResult result;
    result.models_trained = splits.size();
    FoldSummary summary;
    for (std::size_t f = 0; f < splits.size(); ++f) {
        RocCurve curve = roc_curve(fold_scores[f], labels_for(data, splits[f].validate));
        summary.aucs.push_back(auc(curve));
        result.fold_curves.push_back(std::move(curve));
        for (const auto& [id, score] : fold_scores[f]) {
            if (!result.pooled_scores.emplace(id, score).second) throw Error("recording '" + id + "' scored twice");
        }
    }
    result.fold_scores = fold_scores;
    summary.mean = mean(summary.aucs);
    summary.standard_error = standard_error(summary.aucs);

    std::map<std::string, Label> all_labels;
    for (std::size_t i = 0; i < data.size(); ++i) all_labels.emplace(data.ids[i], data.labels[i]);
    result.report = evaluate_scores(result.pooled_scores, all_labels, target_sensitivity);
    result.report.per_fold = std::move(summary);
    return result;
}

CrossValidationResult cross_validate(const DatasetManifest& manifest, const FoldAssignment& folds,
                                     const FrontendConfig& frontend, const ClassifierParams& params, int jobs,
                                     double target_sensitivity) {
    validate_folds(folds, manifest);
    auto features = extract_manifest(manifest, frontend, jobs);
    return cross_validate(LabelledFeatures::from_manifest(manifest, std::move(features)), folds, params, jobs,
                          target_sensitivity);
}

SearchSpace SearchSpace::single_point(const GbdtParams& p) {
    SearchSpace s;
    s.num_trees = {p.num_trees};
    s.learning_rate = {p.learning_rate};
    s.max_leaves = {p.max_leaves};
    s.min_samples_leaf = {p.min_samples_leaf};
    s.max_bins = {p.max_bins};
    s.l2_lambda = {p.l2_lambda};
    return s;
}

SearchSpace SearchSpace::default_grid() {
    SearchSpace s;
    s.num_trees = {100};
    s.learning_rate = {0.03, 0.05, 0.1, 0.2};
    s.max_leaves = {7, 15, 31, 63};
    s.min_samples_leaf = {10, 20, 50, 100};
    s.max_bins = {63, 255};
    s.l2_lambda = {0.0, 1.0, 5.0};
    return s;
}

namespace {

template <typename T>
T draw(const std::vector<T>& values, Rng& rng) {
    return values[static_cast<std::size_t>(rng.uniform_index(values.size()))];
}

}  // namespace

SearchResult hyperparameter_search(const SearchSpace& space, const LabelledFeatures& data,
                                   const FoldAssignment& folds, int budget, std::uint64_t seed,
                                   const GbdtParams& base, int jobs) {
    if (budget < 1) throw Error("search budget must be at least 1");
    if (space.num_trees.empty() || space.learning_rate.empty() || space.max_leaves.empty() ||
        space.min_samples_leaf.empty() || space.max_bins.empty() || space.l2_lambda.empty()) {
        throw Error("empty search space: every parameter needs at least one candidate value");
    }
    split_folds(data, folds);  // fail fast on degenerate folds

    Rng rng(seed);
    SearchResult result;
    for (int t = 0; t < budget; ++t) {
        SearchTrial trial;
        trial.params = base;
        trial.params.num_trees = draw(space.num_trees, rng);
        trial.params.learning_rate = draw(space.learning_rate, rng);
        trial.params.max_leaves = draw(space.max_leaves, rng);
        trial.params.min_samples_leaf = draw(space.min_samples_leaf, rng);
        trial.params.max_bins = draw(space.max_bins, rng);
        trial.params.l2_lambda = draw(space.l2_lambda, rng);
        trial.params.validate();

        ClassifierParams cp;
        cp.kind = ClassifierKind::gbdt;
        cp.gbdt = trial.params;
        const auto cv = cross_validate(data, folds, cp, jobs);
        trial.fold_aucs = cv.report.per_fold->aucs;
        trial.mean_auc = cv.report.per_fold->mean;
        if (t == 0 || trial.mean_auc > result.best_mean_auc) {
            result.best = trial.params;
            result.best_mean_auc = trial.mean_auc;
            result.best_trial = static_cast<std::size_t>(t);
        }
        result.trials.push_back(std::move(trial));
    }
    return result;
}

}  // namespace tecc
