#include "tecc/cli.hpp"

#include "tecc/crossval.hpp"
#include "tecc/error.hpp"
#include "tecc/feature_io.hpp"
#include "tecc/fileio.hpp"
#include "tecc/parallel.hpp"
#include "tecc/report.hpp"
#include "tecc/simd/kernels.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace tecc {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string manifest;
    int folds = 5;
    std::string fold_file;
    std::string frontend = "tecc";
    std::string features;
    std::string model;
    std::vector<std::string> scores;
    std::string out;
    std::uint64_t seed = 0;
    int jobs = 0;
    int trees = 100;
    double learning_rate = 0.1;
    double target = kDefaultTargetSensitivity;
    std::string weights;
    int budget = 20;
    std::string classifier = "gbdt";
    bool feature_csv = false;
    std::string density_dir;
    std::string filterbank_csv;
};

void require_input(const std::string& path, const char* what) {
    if (!fs::exists(path)) throw Error(std::string(what) + " '" + path + "' does not exist");
}

FrontendConfig frontend_config(const Options& o) {
    FrontendKind kind;
    try {
        kind = parse_frontend_kind(o.frontend);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return FrontendConfig::defaults(kind);
}

ClassifierParams classifier_params(const Options& o) {
    ClassifierParams p;
    try {
        p.kind = parse_classifier_kind(o.classifier);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (o.trees < 1) throw UsageError("--trees must be at least 1");
    if (!(o.learning_rate > 0.0)) throw UsageError("--learning-rate must be positive");
    p.gbdt.num_trees = o.trees;
    p.gbdt.learning_rate = o.learning_rate;
    p.gbdt.seed = o.seed;
    p.forest.num_trees = o.trees;
    p.forest.seed = o.seed;
    return p;
}

DatasetManifest manifest_from(const Options& o) {
    if (o.manifest.empty()) throw UsageError("--manifest is required");
    require_input(o.manifest, "manifest");
    DatasetManifest m = load_manifest(o.manifest);
    for (const auto& e : m.entries) {
        if (o.features.empty() && !fs::exists(m.resolve_audio(e))) {
            throw Error("audio for recording '" + e.recording_id + "' not found: " + m.resolve_audio(e).string());
        }
    }
    return m;
}

fs::path feature_path(const fs::path& dir, const std::string& id) { return dir / (id + ".fea"); }

std::vector<FeatureMatrix> features_for(const DatasetManifest& m, const Options& o, int jobs) {
    if (o.features.empty()) return extract_manifest(m, frontend_config(o), jobs);
    require_input(o.features, "features directory");
    for (const auto& e : m.entries) {
        const fs::path p = feature_path(o.features, e.recording_id);
        if (!fs::exists(p)) throw Error("feature file for recording '" + e.recording_id + "' not found: " + p.string());
    }
    std::vector<FeatureMatrix> out;
    out.reserve(m.entries.size());
    for (const auto& e : m.entries) out.push_back(read_fea1(feature_path(o.features, e.recording_id), e.recording_id));
    return out;
}

FoldAssignment folds_for(const DatasetManifest& m, const Options& o) {
    if (!o.fold_file.empty()) {
        require_input(o.fold_file, "fold file");
        FoldAssignment f = load_fold_file(o.fold_file);
        validate_folds(f, m);
        return f;
    }
    if (o.folds < 2) throw UsageError("--folds must be at least 2");
    return make_stratified_folds(m, o.folds, o.seed);
}

fs::path out_dir(const Options& o, const char* fallback) {
    const fs::path dir = o.out.empty() ? fs::path(fallback) : fs::path(o.out);
    fs::create_directories(dir);
    return dir;
}

int cmd_extract(const Options& o, std::ostream& out) {
    if (o.out.empty()) throw UsageError("--out is required");
    const DatasetManifest m = manifest_from(o);
    const FrontendConfig cfg = frontend_config(o);
    const int jobs = resolve_jobs(o.jobs);
    const auto feats = extract_manifest(m, cfg, jobs);

    std::vector<SpectralDensity> densities;
    if (!o.density_dir.empty()) {
        if (cfg.kind != FrontendKind::tecc) throw UsageError("--density requires --frontend tecc");
        densities = parallel_map(m.entries.size(), jobs, [&](std::size_t i) {
            return teager_spectral_density(load_audio(m.resolve_audio(m.entries[i])), cfg);
        });
    }

    const fs::path dir = out_dir(o, "");
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
        const std::string& id = m.entries[i].recording_id;
        write_fea1(feature_path(dir, id), feats[i]);
        if (o.feature_csv) write_file_atomic(dir / (id + ".csv"), format_feature_csv(feats[i]));
    }
    if (!densities.empty()) {
        fs::create_directories(o.density_dir);
        for (std::size_t i = 0; i < m.entries.size(); ++i) {
            write_file_atomic(fs::path(o.density_dir) / (m.entries[i].recording_id + ".csv"),
                              format_spectral_density_csv(densities[i]));
        }
    }
    if (!o.filterbank_csv.empty()) {
        const int fs_hz = load_audio(m.resolve_audio(m.entries.front())).sample_rate_hz();
        const FilterbankSpec spec{cfg.num_filters, cfg.fmin_hz, cfg.fmax_hz, cfg.bandwidth_scale};
        write_file_atomic(o.filterbank_csv, format_filterbank_csv(design_filterbank(spec, fs_hz)));
    }
    out << "extracted " << feats.size() << " recordings (" << frontend_name(cfg.kind) << ", "
        << (feats.empty() ? 0 : feats.front().cols()) << " dims) to " << dir.string() << '\n';
    return 0;
}

int cmd_train(const Options& o, std::ostream& out) {
    if (o.model.empty()) throw UsageError("--model is required");
    const ClassifierParams params = classifier_params(o);
    const DatasetManifest m = manifest_from(o);
    const auto feats = features_for(m, o, resolve_jobs(o.jobs));
    std::vector<Label> labels;
    for (const auto& e : m.entries) labels.push_back(e.label);
    const FrameDataset data = build_frame_dataset(std::span<const FeatureMatrix>(feats), labels);
    const FrameModel model = train_classifier(data, params);
    save_model(o.model, model);
    out << "trained " << classifier_name(params.kind) << " on " << data.rows << " frames from " << m.entries.size()
        << " recordings; model written to " << o.model << '\n';
    return 0;
}

int cmd_predict(const Options& o, std::ostream& out) {
    if (o.model.empty()) throw UsageError("--model is required");
    if (o.out.empty()) throw UsageError("--out is required");
    require_input(o.model, "model");
    const FrameModel model = load_model(o.model);
    const DatasetManifest m = manifest_from(o);
    const int jobs = resolve_jobs(o.jobs);
    const auto feats = features_for(m, o, jobs);
    const auto scored = parallel_map(feats.size(), jobs, [&](std::size_t i) {
        return score_recording(predict_frames(model, feats[i]), m.entries[i].recording_id);
    });
    ScoreMap scores;
    for (const auto& s : scored) scores.emplace(s.recording_id, s.score);
    write_file_atomic(o.out, format_scores_csv(scores));
    out << "scored " << scores.size() << " recordings to " << o.out << '\n';
    return 0;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
    if (o.scores.size() != 1) throw UsageError("evaluate takes exactly one --scores file");
    if (o.manifest.empty()) throw UsageError("--manifest is required");
    require_input(o.scores.front(), "scores file");
    require_input(o.manifest, "manifest");
    const ScoreMap scores = load_scores(o.scores.front());
    const DatasetManifest m = load_manifest(o.manifest);
    const EvalReport report = evaluate_scores(scores, m.labels(), o.target);
    const std::string text = format_text_report(report);
    if (!o.out.empty()) {
        const fs::path dir = out_dir(o, "");
        const auto curve = roc_curve(scores, m.labels());
        write_file_atomic(dir / "roc.csv", format_roc_csv(curve));
        write_file_atomic(dir / "report.txt", text);
    }
    out << text;
    return 0;
}

std::vector<double> parse_weights(const std::string& text) {
    std::vector<double> w;
    if (text.empty()) return w;
    for (const auto& field : split_csv_line(text)) {
        try {
            std::size_t used = 0;
            w.push_back(std::stod(field, &used));
            if (used != field.size()) throw std::invalid_argument(field);
        } catch (const std::exception&) {
            throw UsageError("--weights: invalid number '" + field + "'");
        }
    }
    return w;
}

int cmd_fuse(const Options& o, std::ostream& out) {
    if (o.scores.size() < 2) throw UsageError("fuse needs at least two --scores files");
    if (o.out.empty()) throw UsageError("--out is required");
    const auto weights = parse_weights(o.weights);
    if (!weights.empty() && weights.size() != o.scores.size()) {
        throw UsageError("--weights needs one value per --scores file");
    }
    std::vector<ScoreMap> systems;
    for (const auto& p : o.scores) require_input(p, "scores file");
    for (const auto& p : o.scores) systems.push_back(load_scores(p));
    const ScoreMap fused = fuse_scores(systems, weights);
    write_file_atomic(o.out, format_scores_csv(fused));
    out << "fused " << systems.size() << " systems over " << fused.size() << " recordings to " << o.out << '\n';
    return 0;
}

int cmd_crossval(const Options& o, std::ostream& out) {
    const ClassifierParams params = classifier_params(o);
    if (!(o.target > 0.0 && o.target <= 1.0)) throw UsageError("--target-sensitivity must be in (0, 1]");
    const DatasetManifest m = manifest_from(o);
    const FoldAssignment folds = folds_for(m, o);
    const int jobs = resolve_jobs(o.jobs);
    LabelledFeatures data = LabelledFeatures::from_manifest(m, features_for(m, o, jobs));
    const CrossValidationResult cv = cross_validate(data, folds, params, jobs, o.target);
    const AveragedRoc avg = average_roc(cv.fold_curves);

    const fs::path dir = out_dir(o, "crossval");
    write_file_atomic(dir / "folds.csv", format_fold_file(folds, m));
    write_file_atomic(dir / "scores.csv", format_scores_csv(cv.pooled_scores));
    for (std::size_t f = 0; f < cv.fold_curves.size(); ++f) {
        write_file_atomic(dir / ("roc_fold" + std::to_string(f) + ".csv"), format_roc_csv(cv.fold_curves[f]));
    }
    write_file_atomic(dir / "roc_mean.csv", format_average_roc_csv(avg));
    write_file_atomic(dir / "roc.svg", render_roc_svg(avg, "Mean validation ROC"));
    write_file_atomic(dir / "fold_auc.csv", format_fold_auc_csv(*cv.report.per_fold));
    const std::string text = format_text_report(cv.report);
    write_file_atomic(dir / "report.txt", text);
    out << text;
    return 0;
}

int cmd_search(const Options& o, std::ostream& out) {
    if (o.budget < 1) throw UsageError("--budget must be at least 1");
    const DatasetManifest m = manifest_from(o);
    const FoldAssignment folds = folds_for(m, o);
    const int jobs = resolve_jobs(o.jobs);
    const LabelledFeatures data = LabelledFeatures::from_manifest(m, features_for(m, o, jobs));
    GbdtParams base;
    base.seed = o.seed;
    const SearchResult result =
        hyperparameter_search(SearchSpace::default_grid(), data, folds, o.budget, o.seed, base, jobs);

    std::string csv = "trial,num_trees,learning_rate,max_leaves,min_samples_leaf,max_bins,l2_lambda,mean_auc\n";
    for (std::size_t t = 0; t < result.trials.size(); ++t) {
        const auto& tr = result.trials[t];
        csv += std::to_string(t) + ',' + std::to_string(tr.params.num_trees) + ',' +
               format_double(tr.params.learning_rate) + ',' + std::to_string(tr.params.max_leaves) + ',' +
               std::to_string(tr.params.min_samples_leaf) + ',' + std::to_string(tr.params.max_bins) + ',' +
               format_double(tr.params.l2_lambda) + ',' + format_double(tr.mean_auc) + '\n';
    }
    const GbdtParams& b = result.best;
    std::ostringstream best;
    best << "trial " << result.best_trial << " mean AUC " << format_double(result.best_mean_auc) << '\n'
         << "num_trees=" << b.num_trees << '\n'
         << "learning_rate=" << format_double(b.learning_rate) << '\n'
         << "max_leaves=" << b.max_leaves << '\n'
         << "min_samples_leaf=" << b.min_samples_leaf << '\n'
         << "max_bins=" << b.max_bins << '\n'
         << "l2_lambda=" << format_double(b.l2_lambda) << '\n';

    const fs::path dir = out_dir(o, "search");
    write_file_atomic(dir / "folds.csv", format_fold_file(folds, m));
    write_file_atomic(dir / "trials.csv", csv);
    write_file_atomic(dir / "best.txt", best.str());
    out << best.str();
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cough-recording screening: TECC/MFCC features, tree ensembles, ROC evaluation", "tecc_screen"};
    app.require_subcommand(1);
    Options o;
    std::optional<std::string> isa;
    app.add_option("--simd", isa, "Kernel set: scalar, avx2 or neon (default: best available)");

    auto* extract = app.add_subcommand("extract", "Compute one FEA1 feature file per manifest row");
    auto* train = app.add_subcommand("train", "Train a frame classifier");
    auto* predict = app.add_subcommand("predict", "Score recordings with a trained model");
    auto* evaluate = app.add_subcommand("evaluate", "ROC, AUC and operating point for a scores file");
    auto* fuse = app.add_subcommand("fuse", "Weighted mean of several score files");
    auto* crossval = app.add_subcommand("crossval", "k-fold cross-validation");
    auto* search = app.add_subcommand("search", "Random hyper-parameter search by mean fold AUC");

    auto manifest = [&](CLI::App* c) { c->add_option("--manifest", o.manifest, "Manifest CSV")->required(); };
    auto frontend = [&](CLI::App* c) {
        c->add_option("--frontend", o.frontend, "tecc or mfcc")->capture_default_str();
        c->add_option("--jobs", o.jobs, "Worker threads (default: TECC_SCREEN_JOBS or 1)");
    };
    auto features = [&](CLI::App* c) { c->add_option("--features", o.features, "Directory of <id>.fea files"); };
    auto model_params = [&](CLI::App* c) {
        c->add_option("--classifier", o.classifier, "gbdt or rf")->capture_default_str();
        c->add_option("--trees", o.trees, "Number of trees")->capture_default_str();
        c->add_option("--learning-rate", o.learning_rate, "GBDT shrinkage")->capture_default_str();
        c->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    };
    auto fold_opts = [&](CLI::App* c) {
        auto* k = c->add_option("--folds", o.folds, "Number of stratified folds")->capture_default_str();
        c->add_option("--fold-file", o.fold_file, "id,fold CSV")->excludes(k);
    };

    manifest(extract);
    frontend(extract);
    extract->add_option("--out", o.out, "Output directory")->required();
    extract->add_flag("--csv", o.feature_csv, "Also write <id>.csv feature tables");
    extract->add_option("--density", o.density_dir, "Directory for Teager spectral density CSVs");
    extract->add_option("--filterbank", o.filterbank_csv, "Write the Gabor filterbank design CSV");

    manifest(train);
    frontend(train);
    features(train);
    model_params(train);
    train->add_option("--model", o.model, "Output model file")->required();

    manifest(predict);
    frontend(predict);
    features(predict);
    predict->add_option("--model", o.model, "Model file")->required();
    predict->add_option("--out", o.out, "Output scores CSV")->required();

    evaluate->add_option("--scores", o.scores, "Scores CSV")->required();
    evaluate->add_option("--manifest", o.manifest, "Manifest CSV")->required();
    evaluate->add_option("--target-sensitivity", o.target, "Operating-point sensitivity")->capture_default_str();
    evaluate->add_option("--out", o.out, "Directory for report.txt and roc.csv");

    fuse->add_option("--scores", o.scores, "Scores CSV (repeat per system)")->required();
    fuse->add_option("--weights", o.weights, "Comma-separated weights (default: equal)");
    fuse->add_option("--out", o.out, "Output scores CSV")->required();

    manifest(crossval);
    frontend(crossval);
    features(crossval);
    model_params(crossval);
    fold_opts(crossval);
    crossval->add_option("--target-sensitivity", o.target, "Operating-point sensitivity")->capture_default_str();
    crossval->add_option("--out", o.out, "Output directory (default: crossval)");

    manifest(search);
    frontend(search);
    features(search);
    fold_opts(search);
    search->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    search->add_option("--budget", o.budget, "Number of trials")->capture_default_str();
    search->add_option("--out", o.out, "Output directory (default: search)");

    std::vector<const char*> argv;
    argv.push_back("tecc_screen");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (isa) {
            if (*isa == "scalar") simd::set_active_isa(simd::Isa::scalar);
            else if (*isa == "avx2") simd::set_active_isa(simd::Isa::avx2);
            else if (*isa == "neon") simd::set_active_isa(simd::Isa::neon);
            else throw UsageError("--simd must be scalar, avx2 or neon");
        }
        if (extract->parsed()) return cmd_extract(o, out);
        if (train->parsed()) return cmd_train(o, out);
        if (predict->parsed()) return cmd_predict(o, out);
        if (evaluate->parsed()) return cmd_evaluate(o, out);
        if (fuse->parsed()) return cmd_fuse(o, out);
        if (crossval->parsed()) return cmd_crossval(o, out);
        return cmd_search(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace tecc
