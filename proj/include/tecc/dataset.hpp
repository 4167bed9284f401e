#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace tecc {

enum class Label { negative = 0, positive = 1 };
enum class Gender { male, female, unknown };

struct ManifestEntry {
    std::string recording_id;
    std::string audio_path;  // as written in the manifest
    Label label = Label::negative;
    Gender gender = Gender::unknown;
    std::string nationality;

    bool operator==(const ManifestEntry&) const = default;
};

/// Recording list for one dataset split. Ids are unique.
struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    // Directory relative audio paths are resolved against.
    std::filesystem::path base_dir;

    std::size_t count(Label label) const;
    std::filesystem::path resolve_audio(const ManifestEntry& entry) const;
    const ManifestEntry& find(const std::string& recording_id) const;
    std::map<std::string, Label> labels() const;
};

// CSV with header naming id,path,label,gender,nationality (any column order).
// Labels must be "p" or "n".
DatasetManifest load_manifest(const std::filesystem::path& path);
DatasetManifest parse_manifest(std::string_view csv_text, std::filesystem::path base_dir = {});
std::string format_manifest(const DatasetManifest& manifest);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

struct FoldAssignment {
    int k = 0;
    std::map<std::string, int> fold_of;

    // Ids in manifest order that fall in `fold`.
    std::vector<std::string> members(const DatasetManifest& manifest, int fold) const;
};

// Seeded shuffle per class, then a single round-robin over positives followed
// by negatives. Fold sizes and per-class counts differ by at most one.
FoldAssignment make_stratified_folds(const DatasetManifest& manifest, int k, std::uint64_t seed);

// Checks every manifest id is assigned to a fold in [0, k) and vice versa.
void validate_folds(const FoldAssignment& folds, const DatasetManifest& manifest);

// `id,fold` CSV.
std::string format_fold_file(const FoldAssignment& folds, const DatasetManifest& manifest);
FoldAssignment parse_fold_file(std::string_view csv_text);
FoldAssignment load_fold_file(const std::filesystem::path& path);

}  // namespace tecc
