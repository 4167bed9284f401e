// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path-to-tecc_screen>

#include "oracles.hpp"
#include "synth.hpp"
#include "tecc/cepstral.hpp"
#include "tecc/filterbank.hpp"
#include "tecc/fileio.hpp"
#include "tecc/frontends.hpp"
#include "tecc/gbdt.hpp"
#include "tecc/model.hpp"
#include "tecc/roc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <sys/wait.h>

using namespace tecc;
namespace fs = std::filesystem;

namespace {

// Tolerances and limits, as stated by each criterion.
constexpr double kTeoRelTol = 1e-9;
constexpr double kTeoTimeLimitS = 1.0;
constexpr double kDctRelTol = 1e-9;
constexpr double kCmnMeanTol = 1e-9;
constexpr double kCmnIdempotenceTol = 1e-12;
constexpr double kMelGapTol = 1e-6;
constexpr double kAucTol = 1e-12;
constexpr double kAucTimeLimitS = 10.0;
constexpr double kEndToEndMinAuc = 0.95;
constexpr double kEndToEndTimeLimitS = 300.0;
constexpr double kNullLow = 0.40;
constexpr double kNullHigh = 0.60;
constexpr int kGbdtTrees = 100;

enum class Outcome { pass, fail, skip };

struct Verdict {
    Outcome outcome;
    std::string detail;
};

Verdict verdict(bool ok, std::string detail) { return {ok ? Outcome::pass : Outcome::fail, std::move(detail)}; }

std::string num(double v, int digits = 6) {
    std::ostringstream ss;
    ss.precision(digits);
    ss << v;
    return ss.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict teo_identity() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double A = 0.01 + 0.99 * rng.uniform01();
        const double omega = 0.05 + 2.95 * rng.uniform01();
        const double phi = 2.0 * 3.141592653589793 * rng.uniform01();
        std::vector<double> x(256);
        for (std::size_t n = 0; n < x.size(); ++n) x[n] = A * std::cos(omega * static_cast<double>(n) + phi);
        const double expected = A * A * std::sin(omega) * std::sin(omega);
        const auto e = teo(x).values;
        for (std::size_t n = 1; n + 1 < e.size(); ++n) worst = std::max(worst, std::abs(e[n] - expected) / expected);
    }
    const double elapsed = seconds_since(t0);
    return verdict(worst <= kTeoRelTol && elapsed < kTeoTimeLimitS,
                   "max rel err " + num(worst) + " (tol " + num(kTeoRelTol) + "), " + num(elapsed, 3) + " s");
}

Verdict teo_scaling() {
    Rng rng(102);
    int exact_random = 0;
    int exact_pow2 = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(128);
        for (auto& v : x) v = 2.0 * rng.uniform01() - 1.0;
        const auto run = [&](double alpha) {
            std::vector<double> scaled(x);
            for (auto& v : scaled) v *= alpha;
            const auto lhs = teo(scaled).values;
            const auto rhs = teo(x).values;
            bool exact = true;
            for (std::size_t n = 0; n < lhs.size(); ++n) {
                const double r = alpha * alpha * rhs[n];
                if (lhs[n] != r) {
                    exact = false;
                    if (r != 0.0) worst = std::max(worst, std::abs(lhs[n] - r) / std::abs(r));
                }
            }
            return exact;
        };
        exact_random += run(0.1 + 9.9 * rng.uniform01());
        exact_pow2 += run(std::ldexp(1.0, static_cast<int>(rng.uniform_index(21)) - 10));
    }
    return verdict(exact_random == 100, "random alpha: " + std::to_string(exact_random) +
                                            "/100 trials bit-exact, max rel deviation " + num(worst, 3) +
                                            "; power-of-two alpha: " + std::to_string(exact_pow2) + "/100 bit-exact");
}

Verdict dct_orthonormality() {
    Rng rng(103);
    const DctII dct(40, 40);
    double worst_roundtrip = 0.0;
    double worst_parseval = 0.0;
    std::vector<double> x(40);
    std::vector<double> X(40);
    std::vector<double> back(40);
    for (int trial = 0; trial < 1000; ++trial) {
        for (auto& v : x) v = rng.normal() * 10.0;
        dct.apply(x, X);
        dct.invert(X, back);
        double norm_x = 0.0;
        double norm_X = 0.0;
        double scale = 0.0;
        double err = 0.0;
        for (std::size_t i = 0; i < 40; ++i) {
            norm_x += x[i] * x[i];
            norm_X += X[i] * X[i];
            scale = std::max(scale, std::abs(x[i]));
            err = std::max(err, std::abs(back[i] - x[i]));
        }
        worst_roundtrip = std::max(worst_roundtrip, err / scale);
        worst_parseval = std::max(worst_parseval, std::abs(norm_X - norm_x) / norm_x);
    }
    return verdict(worst_roundtrip <= kDctRelTol && worst_parseval <= kDctRelTol,
                   "round trip max rel err " + num(worst_roundtrip) + ", Parseval rel err " + num(worst_parseval));
}

Verdict delta_formula() {
    std::vector<double> ramp(50);
    for (std::size_t t = 0; t < ramp.size(); ++t) ramp[t] = static_cast<double>(t);
    const auto d = deltas(FeatureMatrix(50, 1, ramp));
    bool ramp_ok = true;
    for (std::size_t t = 2; t + 2 < 50; ++t) ramp_ok = ramp_ok && d(t, 0) == 1.0;
    const auto flat = deltas(FeatureMatrix(30, 4, std::vector<double>(120, -7.25)));
    bool flat_ok = true;
    for (double v : flat.data()) flat_ok = flat_ok && v == 0.0;
    return verdict(ramp_ok && flat_ok, std::string("ramp interior = 1.0: ") + (ramp_ok ? "yes" : "no") +
                                           ", constant -> 0: " + (flat_ok ? "yes" : "no"));
}

Verdict cmn_properties() {
    Rng rng(104);
    double worst_mean = 0.0;
    double worst_idem = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t rows = 10 + rng.uniform_index(300);
        const std::size_t cols = 1 + rng.uniform_index(120);
        std::vector<double> data(rows * cols);
        const double offset = rng.normal() * 20.0;
        for (auto& v : data) v = rng.normal() * 5.0 + offset;
        const auto c = cmn(FeatureMatrix(rows, cols, data));
        for (std::size_t j = 0; j < cols; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < rows; ++i) s += c(i, j);
            worst_mean = std::max(worst_mean, std::abs(s / static_cast<double>(rows)));
        }
        const auto cc = cmn(c);
        for (std::size_t i = 0; i < c.data().size(); ++i) {
            worst_idem = std::max(worst_idem, std::abs(cc.data()[i] - c.data()[i]));
        }
    }
    return verdict(worst_mean <= kCmnMeanTol && worst_idem <= kCmnIdempotenceTol,
                   "max |column mean| " + num(worst_mean) + ", idempotence max diff " + num(worst_idem));
}

Verdict feature_shapes() {
    constexpr int fs = 44100;
    Rng rng(105);
    const AudioBuffer noise(testing::white_noise(fs, rng, 0.3), fs, "noise");
    // Truncated 25 ms window and 10 ms hop.
    const std::size_t window = 25 * fs / 1000;
    const std::size_t hop = 10 * fs / 1000;
    const std::size_t frames = (fs - window) / hop + 1;
    const auto tecc = extract_features(noise, FrontendConfig::tecc_defaults());
    const auto mfcc = extract_features(noise, FrontendConfig::mfcc_defaults());
    const bool ok = tecc.cols() == 120 && mfcc.cols() == 39 && tecc.rows() == frames && mfcc.rows() == frames;
    return verdict(ok, "TECC " + std::to_string(tecc.rows()) + "x" + std::to_string(tecc.cols()) + ", MFCC " +
                           std::to_string(mfcc.rows()) + "x" + std::to_string(mfcc.cols()) + ", expected " +
                           std::to_string(frames) + " frames");
}

Verdict filterbank_monotone() {
    constexpr int fs = 44100;
    const auto fb = design_filterbank({}, fs);
    const auto& fc = fb.center_freqs_hz();
    double prev = 0.0;
    std::size_t violations = 0;
    for (std::size_t i = 0; i < fb.size(); ++i) {
        const double w = oracle::minus3db_width(fb.kernel(i), fc[i], fs);
        violations += w < prev;
        prev = w;
    }
    const auto mel = [](double f) { return 2595.0 * std::log10(1.0 + f / 700.0); };
    const double gap = (mel(8000.0) - mel(10.0)) / 39.0;
    double worst_gap = 0.0;
    for (std::size_t i = 1; i < fc.size(); ++i) worst_gap = std::max(worst_gap, std::abs(mel(fc[i]) - mel(fc[i - 1]) - gap));
    return verdict(fb.size() == 40 && violations == 0 && worst_gap <= kMelGapTol,
                   std::to_string(fb.size()) + " filters at " + std::to_string(fs) + " Hz, " +
                       std::to_string(violations) + " width decreases, max Mel gap deviation " + num(worst_gap));
}

Verdict auc_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(106);
    double worst = 0.0;
    for (int set = 0; set < 500; ++set) {
        const std::size_t n = 2 + rng.uniform_index(199);
        std::vector<double> scores(n);
        std::vector<Label> labels(n);
        const bool coarse = set % 3 == 0;
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = coarse ? std::floor(rng.uniform01() * 8.0) : rng.uniform01();
            labels[i] = rng.uniform01() < 0.5 ? Label::positive : Label::negative;
        }
        labels[0] = Label::positive;
        labels[1] = Label::negative;
        const double a = auc(roc_curve(scores, labels));
        worst = std::max(worst, std::abs(a - oracle::mann_whitney_auc(scores, labels)));
    }
    const double elapsed = seconds_since(t0);
    return verdict(worst <= kAucTol && elapsed < kAucTimeLimitS,
                   "max |trapezoid - Mann-Whitney| " + num(worst) + ", " + num(elapsed, 3) + " s");
}

Verdict gbdt_training() {
    Rng rng(107);
    FrameDataset d;
    d.rows = 3000;
    d.cols = 8;
    for (std::size_t r = 0; r < d.rows; ++r) {
        const bool pos = rng.uniform01() < 0.25;
        for (std::size_t c = 0; c < d.cols; ++c) d.x.push_back(rng.normal() + (pos && c < 3 ? 0.7 : 0.0));
        d.y.push_back(pos ? 1 : 0);
    }
    GbdtParams params;
    params.num_trees = kGbdtTrees;
    std::vector<double> loss;
    const GbdtModel model = train_gbdt(d, params, &loss);
    std::size_t increases = 0;
    for (std::size_t t = 1; t < loss.size(); ++t) increases += loss[t] > loss[t - 1];

    const FrameModel restored = parse_model(format_model(FrameModel(model)));
    const auto& back = std::get<GbdtModel>(restored);
    std::size_t mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> frame(d.cols);
        for (auto& v : frame) v = rng.normal() * 2.0;
        mismatches += model.predict_proba(frame) != back.predict_proba(frame);
    }
    const bool ok = increases == 0 && loss.size() == kGbdtTrees + 1 && model.trees.size() == kGbdtTrees &&
                    mismatches == 0;
    return verdict(ok, std::to_string(model.trees.size()) + " trees, " + std::to_string(increases) +
                           " loss increases over " + std::to_string(loss.size() - 1) + " rounds, " +
                           std::to_string(mismatches) + "/1000 round-trip prediction mismatches");
}

// Runs the CLI with output captured to <dir>/cli.log; returns its exit status.
int run_cli_binary(const std::string& exe, const std::vector<std::string>& args, const fs::path& log) {
    std::string cmd = "'" + exe + "'";
    for (const auto& a : args) cmd += " '" + a + "'";
    cmd += " > '" + log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    return status == 0 ? 0 : (WIFEXITED(status) ? WEXITSTATUS(status) : -1);
}

double mean_fold_auc(const fs::path& dir) {
    for (const auto& row : parse_csv(read_file_text(dir / "fold_auc.csv"))) {
        if (row.size() >= 2 && row[0] == "mean") return std::stod(row[1]);
    }
    throw std::runtime_error("fold_auc.csv has no mean row");
}

struct CrossvalRun {
    int status = -1;
    double mean_auc = 0.0;
    double seconds = 0.0;
    fs::path dir;
};

CrossvalRun crossval_on_synthetic(const std::string& exe, const std::string& name, bool permute) {
    const auto t0 = std::chrono::steady_clock::now();
    CrossvalRun run;
    run.dir = testing::scratch_dir("acceptance_" + name);
    testing::SyntheticSpec spec;
    spec.recordings = 200;
    spec.sample_rate_hz = 16000;
    spec.seconds = 1.0;
    spec.permute_labels = permute;
    testing::write_synthetic_dataset(run.dir / "data", spec);
    run.status = run_cli_binary(exe,
                                {"crossval", "--manifest", (run.dir / "data" / "manifest.csv").string(), "--folds", "5",
                                 "--frontend", "tecc", "--out", (run.dir / "out").string()},
                                run.dir / "cli.log");
    if (run.status == 0) run.mean_auc = mean_fold_auc(run.dir / "out");
    run.seconds = seconds_since(t0);
    return run;
}

Verdict end_to_end(const CrossvalRun& run) {
    if (run.status != 0) return verdict(false, "crossval exited " + std::to_string(run.status) + ", see " + (run.dir / "cli.log").string());
    return verdict(run.mean_auc >= kEndToEndMinAuc && run.seconds < kEndToEndTimeLimitS,
                   "mean fold AUC " + num(run.mean_auc, 4) + " (min " + num(kEndToEndMinAuc) + "), " +
                       num(run.seconds, 3) + " s");
}

Verdict null_sanity(const CrossvalRun& run) {
    if (run.status != 0) return verdict(false, "crossval exited " + std::to_string(run.status) + ", see " + (run.dir / "cli.log").string());
    return verdict(run.mean_auc >= kNullLow && run.mean_auc <= kNullHigh,
                   "mean fold AUC " + num(run.mean_auc, 4) + " with permuted labels");
}

Verdict determinism(const std::string& exe, const CrossvalRun& first) {
    if (first.status != 0) return verdict(false, "first crossval run failed");
    const fs::path again = first.dir / "again";
    const int status = run_cli_binary(exe,
                                      {"crossval", "--manifest", (first.dir / "data" / "manifest.csv").string(),
                                       "--folds", "5", "--frontend", "tecc", "--out", again.string()},
                                      first.dir / "cli_again.log");
    if (status != 0) return verdict(false, "second crossval exited " + std::to_string(status));
    const std::string a = read_file_text(first.dir / "out" / "scores.csv");
    const std::string b = read_file_text(again / "scores.csv");
    return verdict(a == b, "scores.csv " + std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different"));
}

Verdict dicova(const std::string& exe) {
    const char* manifest = std::getenv("TECC_DICOVA_MANIFEST");
    const char* folds = std::getenv("TECC_DICOVA_FOLDS");
    if (!manifest || !folds) {
        return {Outcome::skip, "set TECC_DICOVA_MANIFEST and TECC_DICOVA_FOLDS to run (reference value 0.6728)"};
    }
    const fs::path dir = testing::scratch_dir("acceptance_dicova");
    const int status = run_cli_binary(exe,
                                      {"crossval", "--manifest", manifest, "--fold-file", folds, "--frontend", "tecc",
                                       "--classifier", "rf", "--out", (dir / "out").string()},
                                      dir / "cli.log");
    if (status != 0) return verdict(false, "crossval exited " + std::to_string(status));
    return verdict(true, "TECC+RF mean fold AUC " + num(mean_fold_auc(dir / "out"), 4) + " (reference 0.6728, no tolerance)");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: acceptance <path-to-tecc_screen>\n";
        return 2;
    }
    const std::string exe = argv[1];

    int failures = 0;
    const auto report = [&](const std::string& name, const std::function<Verdict()>& check) {
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {Outcome::fail, std::string("exception: ") + e.what()};
        }
        const char* tag = v.outcome == Outcome::pass ? "PASS" : v.outcome == Outcome::fail ? "FAIL" : "SKIP";
        failures += v.outcome == Outcome::fail;
        std::cout << tag << "  " << name << ": " << v.detail << std::endl;
    };

    report("teo-analytic-identity", teo_identity);
    report("teo-quadratic-scaling", teo_scaling);
    report("dct-orthonormality", dct_orthonormality);
    report("delta-formula", delta_formula);
    report("cmn", cmn_properties);
    report("feature-shapes", feature_shapes);
    report("filterbank-monotone-bandwidth", filterbank_monotone);
    report("auc-mann-whitney", auc_oracle);
    report("gbdt-training", gbdt_training);

    CrossvalRun separable;
    CrossvalRun permuted;
    report("end-to-end-synthetic", [&] {
        separable = crossval_on_synthetic(exe, "separable", false);
        return end_to_end(separable);
    });
    report("null-sanity", [&] {
        permuted = crossval_on_synthetic(exe, "permuted", true);
        return null_sanity(permuted);
    });
    report("determinism", [&] { return determinism(exe, separable); });
    report("dicova-track1", [&] { return dicova(exe); });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed") << '\n';
    return failures == 0 ? 0 : 1;
}
