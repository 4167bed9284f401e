#pragma once

#include "tecc/forest.hpp"
#include "tecc/gbdt.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tecc {

enum class ClassifierKind { gbdt, random_forest };

std::string_view classifier_name(ClassifierKind kind);
ClassifierKind parse_classifier_kind(std::string_view name);

using FrameModel = std::variant<GbdtModel, ForestModel>;

struct ClassifierParams {
    ClassifierKind kind = ClassifierKind::gbdt;
    GbdtParams gbdt;
    ForestParams forest;
};

FrameModel train_classifier(const FrameDataset& data, const ClassifierParams& params);

std::size_t feature_dim(const FrameModel& model);

// Per-frame probabilities. Throws if the matrix width differs from the
// model's feature dimension.
std::vector<double> predict_frames(const GbdtModel& model, const FeatureMatrix& m);
std::vector<double> predict_frames(const ForestModel& model, const FeatureMatrix& m);
std::vector<double> predict_frames(const FrameModel& model, const FeatureMatrix& m);

// Text model format, one node per line in pre-order:
//   GBDT v1 dim=<d> trees=<n> lr=<r> base=<b>
//   RF v1 dim=<d> trees=<n>
//   S <feature> <threshold> | L <value>
// Reals use 17 significant digits so parsing reproduces them exactly.
std::string format_model(const FrameModel& model);
FrameModel parse_model(std::string_view text);
void save_model(const std::filesystem::path& path, const FrameModel& model);
FrameModel load_model(const std::filesystem::path& path);

/// Recording-level score: the mean of its frame probabilities.
struct RecordingScore {
    std::string recording_id;
    double score = 0.0;
    std::size_t num_frames = 0;
};

// Throws on an empty frame set.
RecordingScore score_recording(std::span<const double> frame_probs, std::string recording_id = {});

using ScoreMap = std::map<std::string, double>;

// Weighted arithmetic mean per recording (equal weights when `weights` is
// empty). All systems must score the same recording ids.
ScoreMap fuse_scores(std::span<const ScoreMap> systems, std::span<const double> weights = {});

// `id,score` CSV.
std::string format_scores_csv(const ScoreMap& scores);
ScoreMap parse_scores_csv(std::string_view text);
ScoreMap load_scores(const std::filesystem::path& path);

}  // namespace tecc
