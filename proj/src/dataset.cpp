#include "tecc/dataset.hpp"

#include "tecc/error.hpp"
#include "tecc/fileio.hpp"
#include "tecc/rng.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <set>

namespace tecc {

std::size_t DatasetManifest::count(Label label) const {
    return static_cast<std::size_t>(std::count_if(
        entries.begin(), entries.end(), [&](const ManifestEntry& e) { return e.label == label; }));
}

std::filesystem::path DatasetManifest::resolve_audio(const ManifestEntry& entry) const {
    std::filesystem::path p(entry.audio_path);
    if (p.is_absolute() || base_dir.empty()) return p;
    return base_dir / p;
}

const ManifestEntry& DatasetManifest::find(const std::string& recording_id) const {
    for (const auto& e : entries) {
        if (e.recording_id == recording_id) return e;
    }
    throw Error("recording '" + recording_id + "' is not in the manifest");
}

std::map<std::string, Label> DatasetManifest::labels() const {
    std::map<std::string, Label> out;
    for (const auto& e : entries) out.emplace(e.recording_id, e.label);
    return out;
}

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

Gender parse_gender(const std::string& s) {
    if (s == "m" || s == "M") return Gender::male;
    if (s == "f" || s == "F") return Gender::female;
    return Gender::unknown;
}

const char* gender_code(Gender g) {
    switch (g) {
        case Gender::male: return "m";
        case Gender::female: return "f";
        case Gender::unknown: break;
    }
    return "unknown";
}

std::string quote_if_needed(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    return out + "\"";
}

}  // namespace

DatasetManifest parse_manifest(std::string_view csv_text, std::filesystem::path base_dir) {
    const auto rows = parse_csv(csv_text);
    if (rows.empty()) throw Error("empty manifest (no header row)");

    constexpr std::array<const char*, 5> kColumns{"id", "path", "label", "gender", "nationality"};
    std::array<std::size_t, 5> col{};
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        const auto& header = rows.front();
        auto it = std::find_if(header.begin(), header.end(),
                               [&](const std::string& h) { return trim(h) == kColumns[c]; });
        if (it == header.end()) {
            throw Error(std::string("manifest is missing required column '") + kColumns[c] + "'");
        }
        col[c] = static_cast<std::size_t>(it - header.begin());
    }
    if (rows.size() == 1) throw Error("empty manifest");

    DatasetManifest manifest;
    manifest.base_dir = std::move(base_dir);
    std::set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::string where = "manifest row " + std::to_string(r + 1);
        if (row.size() < rows.front().size()) throw Error(where + ": too few fields");
        ManifestEntry e;
        e.recording_id = trim(row[col[0]]);
        e.audio_path = trim(row[col[1]]);
        const std::string label = trim(row[col[2]]);
        if (label == "p") e.label = Label::positive;
        else if (label == "n") e.label = Label::negative;
        else throw Error(where + " ('" + e.recording_id + "'): label '" + label + "' is not p or n");
        e.gender = parse_gender(trim(row[col[3]]));
        e.nationality = trim(row[col[4]]);
        if (e.recording_id.empty()) throw Error(where + ": empty id");
        if (!seen.insert(e.recording_id).second) {
            throw Error(where + ": duplicate id '" + e.recording_id + "'");
        }
        manifest.entries.push_back(std::move(e));
    }
    return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    return parse_manifest(read_file_text(path), path.parent_path());
}

std::string format_manifest(const DatasetManifest& manifest) {
    std::string out = "id,path,label,gender,nationality\n";
    for (const auto& e : manifest.entries) {
        out += quote_if_needed(e.recording_id) + ',' + quote_if_needed(e.audio_path) + ',' +
               (e.label == Label::positive ? "p" : "n") + ',' + gender_code(e.gender) + ',' +
               quote_if_needed(e.nationality) + '\n';
    }
    return out;
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
    write_file_atomic(path, format_manifest(manifest));
}

std::vector<std::string> FoldAssignment::members(const DatasetManifest& manifest, int fold) const {
    std::vector<std::string> ids;
    for (const auto& e : manifest.entries) {
        auto it = fold_of.find(e.recording_id);
        if (it != fold_of.end() && it->second == fold) ids.push_back(e.recording_id);
    }
    return ids;
}

FoldAssignment make_stratified_folds(const DatasetManifest& manifest, int k, std::uint64_t seed) {
    if (k < 2) throw Error("fold count must be at least 2");
    std::vector<std::string> positives;
    std::vector<std::string> negatives;
    for (const auto& e : manifest.entries) {
        (e.label == Label::positive ? positives : negatives).push_back(e.recording_id);
    }
    const auto k_size = static_cast<std::size_t>(k);
    if (manifest.entries.size() < k_size) {
        throw Error("cannot make " + std::to_string(k) + " folds from " +
                    std::to_string(manifest.entries.size()) + " recordings");
    }

    Rng rng(seed);
    rng.shuffle(std::span<std::string>(positives));
    rng.shuffle(std::span<std::string>(negatives));

    FoldAssignment folds;
    folds.k = k;
    std::size_t slot = 0;
    for (const auto* group : {&positives, &negatives}) {
        for (const auto& id : *group) folds.fold_of.emplace(id, static_cast<int>(slot++ % k_size));
    }
    return folds;
}

void validate_folds(const FoldAssignment& folds, const DatasetManifest& manifest) {
    if (folds.k < 2) throw Error("fold assignment needs at least 2 folds");
    for (const auto& e : manifest.entries) {
        auto it = folds.fold_of.find(e.recording_id);
        if (it == folds.fold_of.end()) {
            throw Error("recording '" + e.recording_id + "' has no fold assignment");
        }
        if (it->second < 0 || it->second >= folds.k) {
            throw Error("recording '" + e.recording_id + "' has out-of-range fold " +
                        std::to_string(it->second));
        }
    }
    if (folds.fold_of.size() != manifest.entries.size()) {
        for (const auto& [id, fold] : folds.fold_of) {
            (void)fold;
            manifest.find(id);  // throws naming the stray id
        }
    }
}

std::string format_fold_file(const FoldAssignment& folds, const DatasetManifest& manifest) {
    std::string out = "id,fold\n";
    for (const auto& e : manifest.entries) {
        auto it = folds.fold_of.find(e.recording_id);
        if (it == folds.fold_of.end()) continue;
        out += quote_if_needed(e.recording_id) + ',' + std::to_string(it->second) + '\n';
    }
    return out;
}

FoldAssignment parse_fold_file(std::string_view csv_text) {
    const auto rows = parse_csv(csv_text);
    if (rows.empty()) throw Error("empty fold file");
    const auto& header = rows.front();
    if (header.size() < 2 || trim(header[0]) != "id" || trim(header[1]) != "fold") {
        throw Error("fold file header must be 'id,fold'");
    }
    FoldAssignment folds;
    int max_fold = -1;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::string where = "fold file row " + std::to_string(r + 1);
        if (row.size() < 2) throw Error(where + ": expected 2 fields");
        const std::string id = trim(row[0]);
        const std::string fold_text = trim(row[1]);
        int fold = -1;
        auto [ptr, ec] = std::from_chars(fold_text.data(), fold_text.data() + fold_text.size(), fold);
        if (ec != std::errc() || ptr != fold_text.data() + fold_text.size() || fold < 0) {
            throw Error(where + ": invalid fold '" + fold_text + "'");
        }
        if (!folds.fold_of.emplace(id, fold).second) throw Error(where + ": duplicate id '" + id + "'");
        max_fold = std::max(max_fold, fold);
    }
    if (folds.fold_of.empty()) throw Error("fold file lists no recordings");
    folds.k = max_fold + 1;
    return folds;
}

FoldAssignment load_fold_file(const std::filesystem::path& path) {
    return parse_fold_file(read_file_text(path));
}

}  // namespace tecc
