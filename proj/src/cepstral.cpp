#include "tecc/cepstral.hpp"

#include "tecc/error.hpp"
#include "tecc/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tecc {

std::size_t frame_count(std::size_t num_samples, std::size_t window, std::size_t hop) {
    if (window == 0 || hop == 0) throw Error("frame window and hop must be positive");
    if (num_samples < window) return 0;
    return (num_samples - window) / hop + 1;
}

namespace {

std::size_t ms_to_samples(double ms, int sample_rate_hz) {
    if (!(ms > 0.0) || sample_rate_hz <= 0) throw Error("frame durations must be positive");
    // Small epsilon so 25 ms at 16 kHz is 400 rather than 399.999...
    const auto n = static_cast<std::size_t>(std::floor(ms * sample_rate_hz / 1000.0 + 1e-9));
    if (n == 0) throw Error("frame duration shorter than one sample");
    return n;
}

}  // namespace

std::size_t FrameGrid::window_samples(int sample_rate_hz) const {
    return ms_to_samples(window_ms, sample_rate_hz);
}

std::size_t FrameGrid::hop_samples(int sample_rate_hz) const {
    return ms_to_samples(hop_ms, sample_rate_hz);
}

std::size_t FrameGrid::num_frames(std::size_t num_samples, int sample_rate_hz) const {
    return frame_count(num_samples, window_samples(sample_rate_hz), hop_samples(sample_rate_hz));
}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data,
                             FeatureMeta meta)
    : rows_(rows), cols_(cols), data_(std::move(data)), meta_(std::move(meta)) {
    if (data_.size() != rows_ * cols_) throw Error("feature matrix data size does not match shape");
    if (meta_.layout.total() != cols_) throw Error("feature layout does not sum to column count");
    for (double v : data_) {
        if (!std::isfinite(v)) throw Error("feature matrix contains a non-finite value");
    }
}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : FeatureMatrix(rows, cols, std::move(data), FeatureMeta{{}, {}, FeatureLayout{cols, 0, 0}}) {}

TeagerEnergyProfile teo(std::span<const double> x, int band_index) {
    if (x.size() < 3) throw Error("teo needs at least 3 samples");
    TeagerEnergyProfile out;
    out.band_index = band_index;
    out.values.resize(x.size());
    simd::teager(x, out.values);
    out.values.front() = out.values[1];
    out.values.back() = out.values[x.size() - 2];
    return out;
}

std::vector<double> frame_average(std::span<const double> values, std::size_t window,
                                  std::size_t hop) {
    const std::size_t frames = frame_count(values.size(), window, hop);
    if (frames == 0) {
        throw Error("signal too short: " + std::to_string(values.size()) +
                    " samples is less than one " + std::to_string(window) + "-sample window");
    }
    std::vector<double> out(frames);
    const double inv = 1.0 / static_cast<double>(window);
    for (std::size_t t = 0; t < frames; ++t) out[t] = simd::sum(values.subspan(t * hop, window)) * inv;
    return out;
}

std::vector<double> frame_average(const TeagerEnergyProfile& profile, const FrameGrid& grid,
                                  int sample_rate_hz) {
    return frame_average(profile.values, grid.window_samples(sample_rate_hz),
                         grid.hop_samples(sample_rate_hz));
}

std::vector<double> log_compress(std::span<const double> energies) {
    std::vector<double> out(energies.size());
    std::transform(energies.begin(), energies.end(), out.begin(),
                   [](double e) { return std::log(std::max(e, kEnergyFloor)); });
    return out;
}

DctII::DctII(std::size_t size, std::size_t keep) : size_(size), keep_(keep) {
    if (size_ == 0) throw Error("DCT size must be at least 1");
    if (keep_ == 0 || keep_ > size_) {
        throw Error("DCT keeps " + std::to_string(keep_) + " of " + std::to_string(size_) +
                    " coefficients; must be in [1, size]");
    }
    basis_.resize(keep_ * size_);
    const double n_total = static_cast<double>(size_);
    for (std::size_t k = 0; k < keep_; ++k) {
        const double scale = k == 0 ? std::sqrt(1.0 / n_total) : std::sqrt(2.0 / n_total);
        for (std::size_t n = 0; n < size_; ++n) {
            basis_[k * size_ + n] =
                scale * std::cos(std::numbers::pi * static_cast<double>(k) *
                                 (2.0 * static_cast<double>(n) + 1.0) / (2.0 * n_total));
        }
    }
}

void DctII::apply(std::span<const double> in, std::span<double> out) const {
    if (in.size() != size_ || out.size() < keep_) throw Error("DCT input/output size mismatch");
    for (std::size_t k = 0; k < keep_; ++k) {
        out[k] = simd::dot(std::span<const double>(basis_).subspan(k * size_, size_), in);
    }
}

void DctII::invert(std::span<const double> coeffs, std::span<double> out) const {
    if (keep_ != size_) throw Error("DCT inverse needs the full coefficient set");
    if (coeffs.size() != size_ || out.size() != size_) throw Error("DCT inverse size mismatch");
    for (std::size_t n = 0; n < size_; ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; k < size_; ++k) acc += basis_[k * size_ + n] * coeffs[k];
        out[n] = acc;
    }
}

std::vector<double> dct_ii(std::span<const double> v, std::size_t keep) {
    DctII dct(v.size(), keep);
    std::vector<double> out(keep);
    dct.apply(v, out);
    return out;
}

std::vector<double> dct_ii_inverse(std::span<const double> coeffs) {
    DctII dct(coeffs.size(), coeffs.size());
    std::vector<double> out(coeffs.size());
    dct.invert(coeffs, out);
    return out;
}

FeatureMatrix cmn(const FeatureMatrix& m) {
    if (m.empty() || m.cols() == 0) throw Error("cmn: empty feature matrix");
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    std::vector<double> mean(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) mean[c] += m(r, c);
    }
    for (auto& v : mean) v /= static_cast<double>(rows);
    // Compensated mean: second pass over the residuals.
    std::vector<double> residual(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) residual[c] += m(r, c) - mean[c];
    }
    for (std::size_t c = 0; c < cols; ++c) mean[c] += residual[c] / static_cast<double>(rows);
    std::vector<double> data(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) data[r * cols + c] = m(r, c) - mean[c];
    }
    return FeatureMatrix(rows, cols, std::move(data), m.meta());
}

FeatureMatrix deltas(const FeatureMatrix& m, int K) {
    if (K < 1) throw Error("delta window K must be at least 1");
    if (m.empty()) throw Error("deltas: empty feature matrix");
    const auto rows = static_cast<std::ptrdiff_t>(m.rows());
    const std::size_t cols = m.cols();
    double denom = 0.0;
    for (int k = 1; k <= K; ++k) denom += static_cast<double>(k) * k;
    denom *= 2.0;

    std::vector<double> data(m.rows() * cols, 0.0);
    for (std::ptrdiff_t t = 0; t < rows; ++t) {
        for (std::size_t c = 0; c < cols; ++c) {
            double acc = 0.0;
            for (int k = 1; k <= K; ++k) {
                const auto ahead = static_cast<std::size_t>(std::min<std::ptrdiff_t>(t + k, rows - 1));
                const auto behind = static_cast<std::size_t>(std::max<std::ptrdiff_t>(t - k, 0));
                acc += k * (m(ahead, c) - m(behind, c));
            }
            data[static_cast<std::size_t>(t) * cols + c] = acc / denom;
        }
    }
    return FeatureMatrix(m.rows(), cols, std::move(data), m.meta());
}

FeatureMatrix append_deltas(const FeatureMatrix& statics, int K) {
    const FeatureMatrix d1 = deltas(statics, K);
    const FeatureMatrix d2 = deltas(d1, K);
    const std::size_t rows = statics.rows();
    const std::size_t n = statics.cols();
    std::vector<double> data(rows * 3 * n);
    for (std::size_t r = 0; r < rows; ++r) {
        double* out = data.data() + r * 3 * n;
        std::copy_n(statics.row(r).begin(), n, out);
        std::copy_n(d1.row(r).begin(), n, out + n);
        std::copy_n(d2.row(r).begin(), n, out + 2 * n);
    }
    FeatureMeta meta = statics.meta();
    meta.layout = FeatureLayout{n, n, n};
    return FeatureMatrix(rows, 3 * n, std::move(data), std::move(meta));
}

}  // namespace tecc
