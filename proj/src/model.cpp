#include "tecc/model.hpp"

#include "tecc/error.hpp"
#include "tecc/fileio.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace tecc {

std::string_view classifier_name(ClassifierKind kind) {
    return kind == ClassifierKind::gbdt ? "gbdt" : "rf";
}

ClassifierKind parse_classifier_kind(std::string_view name) {
    if (name == "gbdt") return ClassifierKind::gbdt;
    if (name == "rf") return ClassifierKind::random_forest;
    throw Error("unknown classifier '" + std::string(name) + "' (expected gbdt or rf)");
}

FrameModel train_classifier(const FrameDataset& data, const ClassifierParams& params) {
    if (params.kind == ClassifierKind::gbdt) return train_gbdt(data, params.gbdt);
    return train_random_forest(data, params.forest);
}

std::size_t feature_dim(const FrameModel& model) {
    return std::visit([](const auto& m) { return m.feature_dim; }, model);
}

namespace {

template <typename Model>
std::vector<double> predict_rows(const Model& model, const FeatureMatrix& m) {
    if (m.cols() != model.feature_dim) {
        throw Error("feature dimension mismatch: model expects " + std::to_string(model.feature_dim) +
                    ", features have " + std::to_string(m.cols()));
    }
    std::vector<double> out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) out[r] = model.predict_proba(m.row(r));
    return out;
}

}  // namespace

std::vector<double> predict_frames(const GbdtModel& model, const FeatureMatrix& m) { return predict_rows(model, m); }
std::vector<double> predict_frames(const ForestModel& model, const FeatureMatrix& m) { return predict_rows(model, m); }

std::vector<double> predict_frames(const FrameModel& model, const FeatureMatrix& m) {
    return std::visit([&](const auto& inner) { return predict_rows(inner, m); }, model);
}

namespace {

void append_tree(std::string& out, const Tree& tree, int index) {
    const TreeNode& n = tree.nodes[static_cast<std::size_t>(index)];
    if (n.is_leaf()) {
        out += "L " + format_double(n.value) + '\n';
        return;
    }
    out += "S " + std::to_string(n.feature) + ' ' + format_double(n.threshold) + '\n';
    append_tree(out, tree, n.left);
    append_tree(out, tree, n.right);
}

double parse_real(std::string_view text, const std::string& where) {
    // strtod handles every form %.17g emits, including inf/nan spellings.
    const std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw Error(where + ": invalid number '" + s + "'");
    return v;
}

long long parse_integer(std::string_view text, const std::string& where) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(where + ": invalid integer '" + std::string(text) + "'");
    }
    return v;
}

std::string_view header_field(const std::vector<std::string>& tokens, std::string_view key) {
    for (const auto& t : tokens) {
        if (t.size() > key.size() && t.compare(0, key.size(), key) == 0 && t[key.size()] == '=') {
            return std::string_view(t).substr(key.size() + 1);
        }
    }
    throw Error("model header is missing '" + std::string(key) + "='");
}

class NodeReader {
public:
    explicit NodeReader(std::vector<std::string> lines, std::size_t feature_dim)
        : lines_(std::move(lines)), dim_(feature_dim) {}

    Tree read_tree() {
        Tree tree;
        read_node(tree, 0);
        return tree;
    }

    bool exhausted() const { return pos_ >= lines_.size(); }

private:
    int read_node(Tree& tree, int depth) {
        if (depth > 4096) throw Error("model tree is implausibly deep");
        if (pos_ >= lines_.size()) throw Error("model file ends in the middle of a tree");
        const std::string& line = lines_[pos_];
        const std::string where = "model line " + std::to_string(pos_ + 2);
        ++pos_;
        std::istringstream ss(line);
        std::string kind;
        ss >> kind;
        const int index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        if (kind == "L") {
            std::string value;
            ss >> value;
            tree.nodes[static_cast<std::size_t>(index)].value = parse_real(value, where);
            return index;
        }
        if (kind != "S") throw Error(where + ": expected 'S' or 'L'");
        std::string feature;
        std::string threshold;
        ss >> feature >> threshold;
        const long long f = parse_integer(feature, where);
        if (f < 0 || static_cast<std::size_t>(f) >= dim_) throw Error(where + ": feature index out of range");
        const double thr = parse_real(threshold, where);
        const int left = read_node(tree, depth + 1);
        const int right = read_node(tree, depth + 1);
        TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
        node.feature = static_cast<int>(f);
        node.threshold = thr;
        node.left = left;
        node.right = right;
        return index;
    }

    std::vector<std::string> lines_;
    std::size_t dim_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string format_model(const FrameModel& model) {
    std::string out;
    if (const auto* gbdt = std::get_if<GbdtModel>(&model)) {
        out = "GBDT v1 dim=" + std::to_string(gbdt->feature_dim) + " trees=" + std::to_string(gbdt->trees.size()) +
              " lr=" + format_double(gbdt->learning_rate) + " base=" + format_double(gbdt->base_score) + '\n';
        for (const Tree& t : gbdt->trees) append_tree(out, t, 0);
    } else {
        const auto& rf = std::get<ForestModel>(model);
        out = "RF v1 dim=" + std::to_string(rf.feature_dim) + " trees=" + std::to_string(rf.trees.size()) + '\n';
        for (const Tree& t : rf.trees) append_tree(out, t, 0);
    }
    return out;
}

FrameModel parse_model(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(pos, end - pos));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(std::move(line));
        pos = end + 1;
    }
    if (lines.empty()) throw Error("empty model file");

    std::vector<std::string> header;
    {
        std::istringstream ss(lines.front());
        for (std::string tok; ss >> tok;) header.push_back(tok);
    }
    if (header.size() < 2 || header[1] != "v1") throw Error("unsupported model header '" + lines.front() + "'");
    const bool is_gbdt = header[0] == "GBDT";
    if (!is_gbdt && header[0] != "RF") throw Error("unknown model type '" + header[0] + "'");

    const long long dim = parse_integer(header_field(header, "dim"), "model header");
    const long long count = parse_integer(header_field(header, "trees"), "model header");
    if (dim < 1 || count < 0) throw Error("model header has invalid dim or tree count");

    lines.erase(lines.begin());
    NodeReader reader(std::move(lines), static_cast<std::size_t>(dim));
    std::vector<Tree> trees;
    trees.reserve(static_cast<std::size_t>(count));
    for (long long t = 0; t < count; ++t) trees.push_back(reader.read_tree());
    if (!reader.exhausted()) throw Error("model file has trailing content after the last tree");

    if (is_gbdt) {
        GbdtModel m;
        m.trees = std::move(trees);
        m.feature_dim = static_cast<std::size_t>(dim);
        m.learning_rate = parse_real(header_field(header, "lr"), "model header");
        m.base_score = parse_real(header_field(header, "base"), "model header");
        m.params.num_trees = static_cast<int>(count);
        m.params.learning_rate = m.learning_rate;
        return m;
    }
    ForestModel m;
    m.trees = std::move(trees);
    m.feature_dim = static_cast<std::size_t>(dim);
    return m;
}

void save_model(const std::filesystem::path& path, const FrameModel& model) {
    write_file_atomic(path, format_model(model));
}

FrameModel load_model(const std::filesystem::path& path) { return parse_model(read_file_text(path)); }

RecordingScore score_recording(std::span<const double> frame_probs, std::string recording_id) {
    if (frame_probs.empty()) {
        throw Error("recording '" + recording_id + "' produced no frames to score");
    }
    double acc = 0.0;
    for (double p : frame_probs) acc += p;
    return {std::move(recording_id), acc / static_cast<double>(frame_probs.size()), frame_probs.size()};
}

ScoreMap fuse_scores(std::span<const ScoreMap> systems, std::span<const double> weights) {
    if (systems.empty()) throw Error("fusion needs at least one system");
    std::vector<double> w(weights.begin(), weights.end());
    if (w.empty()) w.assign(systems.size(), 1.0);
    if (w.size() != systems.size()) throw Error("one fusion weight per system is required");
    double total = 0.0;
    for (double v : w) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw Error("fusion weights must be finite and non-negative");
        total += v;
    }
    if (!(total > 0.0)) throw Error("fusion weights must not all be zero");

    const ScoreMap& first = systems.front();
    for (std::size_t s = 1; s < systems.size(); ++s) {
        if (systems[s].size() != first.size()) throw Error("fused systems score different recording sets");
        for (const auto& [id, score] : systems[s]) {
            (void)score;
            if (!first.contains(id)) throw Error("recording '" + id + "' is missing from system 1");
        }
    }

    ScoreMap out;
    for (const auto& [id, score] : first) {
        double acc = 0.0;
        for (std::size_t s = 0; s < systems.size(); ++s) {
            if (w[s] == 0.0) continue;
            acc += w[s] * systems[s].at(id);
        }
        out.emplace(id, acc / total);
    }
    return out;
}

std::string format_scores_csv(const ScoreMap& scores) {
    std::string out = "id,score\n";
    for (const auto& [id, score] : scores) out += id + ',' + format_double(score) + '\n';
    return out;
}

ScoreMap parse_scores_csv(std::string_view text) {
    const auto rows = parse_csv(text);
    if (rows.empty() || rows.front().size() < 2 || rows.front()[0] != "id" || rows.front()[1] != "score") {
        throw Error("scores file header must be 'id,score'");
    }
    ScoreMap out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::string where = "scores row " + std::to_string(r + 1);
        if (rows[r].size() < 2) throw Error(where + ": expected 2 fields");
        const double v = parse_real(rows[r][1], where);
        if (!std::isfinite(v)) throw Error(where + ": non-finite score");
        if (!out.emplace(rows[r][0], v).second) throw Error(where + ": duplicate id '" + rows[r][0] + "'");
    }
    return out;
}

ScoreMap load_scores(const std::filesystem::path& path) { return parse_scores_csv(read_file_text(path)); }

}  // namespace tecc
