#pragma once

#include "tecc/dataset.hpp"
#include "tecc/frontends.hpp"
#include "tecc/model.hpp"
#include "tecc/roc.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tecc {

// Recording-level features aligned with a manifest.
struct LabelledFeatures {
    std::vector<std::string> ids;
    std::vector<Label> labels;
    std::vector<FeatureMatrix> features;

    static LabelledFeatures from_manifest(const DatasetManifest& manifest, std::vector<FeatureMatrix> features);
    std::size_t size() const { return ids.size(); }
};

struct FoldSummary {
    std::vector<double> aucs;
    double mean = 0.0;
    double standard_error = 0.0;
};

struct EvalReport {
    double auc = 0.0;
    double sensitivity_target = kDefaultTargetSensitivity;
    OperatingPoint operating_point;
    std::size_t num_pos = 0;
    std::size_t num_neg = 0;
    std::optional<FoldSummary> per_fold;
};

EvalReport evaluate_scores(const ScoreMap& scores, const std::map<std::string, Label>& labels,
                           double target_sensitivity = kDefaultTargetSensitivity);

// Recording score = mean frame probability, for the recordings at `which`.
ScoreMap score_recordings(const FrameModel& model, const LabelledFeatures& data, std::span<const std::size_t> which);

struct CrossValidationResult {
    // `auc` and the operating point are computed on pooled held-out scores;
    // per_fold holds the fold AUCs with their mean and standard error.
    EvalReport report;
    std::vector<RocCurve> fold_curves;
    std::vector<ScoreMap> fold_scores;
    ScoreMap pooled_scores;
    std::size_t models_trained = 0;
};

// For each fold: train on the other k-1 folds, score the held-out
// recordings, compute the fold AUC. Throws if a validation fold is single-class.
CrossValidationResult cross_validate(const LabelledFeatures& data, const FoldAssignment& folds,
                                     const ClassifierParams& params, int jobs = 1,
                                     double target_sensitivity = kDefaultTargetSensitivity);

CrossValidationResult cross_validate(const DatasetManifest& manifest, const FoldAssignment& folds,
                                     const FrontendConfig& frontend, const ClassifierParams& params,
                                     int jobs = 1, double target_sensitivity = kDefaultTargetSensitivity);

/// Candidate values per GBDT parameter; each trial draws one value per list.
struct SearchSpace {
    std::vector<int> num_trees{100};
    std::vector<double> learning_rate{0.1};
    std::vector<int> max_leaves{31};
    std::vector<int> min_samples_leaf{20};
    std::vector<int> max_bins{255};
    std::vector<double> l2_lambda{1.0};

    static SearchSpace single_point(const GbdtParams& params);
    static SearchSpace default_grid();
};

struct SearchTrial {
    GbdtParams params;
    std::vector<double> fold_aucs;
    double mean_auc = 0.0;
};

struct SearchResult {
    GbdtParams best;
    double best_mean_auc = 0.0;
    std::size_t best_trial = 0;
    std::vector<SearchTrial> trials;
};

// Seeded random search scored by mean validation AUC over the folds.
// Ties keep the earliest trial.
SearchResult hyperparameter_search(const SearchSpace& space, const LabelledFeatures& data,
                                   const FoldAssignment& folds, int budget, std::uint64_t seed,
                                   const GbdtParams& base = {}, int jobs = 1);

}  // namespace tecc
