#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tecc {

inline constexpr double kEnergyFloor = 1e-10;

// Teager energy of one subband. Interior values are x[n]^2 - x[n-1]x[n+1]
// and may be negative on broadband frames; the energy floor is applied by
// log_compress, after frame averaging.
struct TeagerEnergyProfile {
    std::vector<double> values;
    int band_index = 0;
};

struct FrameGrid {
    double window_ms = 25.0;
    double hop_ms = 10.0;

    // Durations are converted to whole samples by truncation.
    std::size_t window_samples(int sample_rate_hz) const;
    std::size_t hop_samples(int sample_rate_hz) const;
    // floor((n - window) / hop) + 1 when n >= window, else 0.
    std::size_t num_frames(std::size_t num_samples, int sample_rate_hz) const;
};

std::size_t frame_count(std::size_t num_samples, std::size_t window, std::size_t hop);

struct FeatureLayout {
    std::size_t static_dims = 0;
    std::size_t delta_dims = 0;
    std::size_t delta_delta_dims = 0;

    std::size_t total() const { return static_dims + delta_dims + delta_delta_dims; }
    bool operator==(const FeatureLayout&) const = default;
};

struct FeatureMeta {
    std::string recording_id;
    std::string frontend;
    FeatureLayout layout;
};

/// Row-major frames x coefficients matrix. All entries are finite and the
/// layout blocks sum to the column count.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data, FeatureMeta meta);
    // Layout defaults to a single static block.
    FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> data() const { return data_; }
    const FeatureMeta& meta() const { return meta_; }
    FeatureMeta& meta() { return meta_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
    FeatureMeta meta_;
};

// Length-preserving; the first and last samples replicate their neighbours.
// Throws if x has fewer than 3 samples.
TeagerEnergyProfile teo(std::span<const double> x, int band_index = 0);

// Mean of each [t*hop, t*hop + window) frame. Throws tecc::Error when the
// profile is shorter than one window.
std::vector<double> frame_average(const TeagerEnergyProfile& profile, const FrameGrid& grid,
                                  int sample_rate_hz);
std::vector<double> frame_average(std::span<const double> values, std::size_t window,
                                  std::size_t hop);

// ln(max(v, 1e-10)) elementwise.
std::vector<double> log_compress(std::span<const double> energies);

/// Orthonormal DCT-II with a precomputed basis; keeps the first `keep`
/// coefficients.
class DctII {
public:
    DctII(std::size_t size, std::size_t keep);
    std::size_t size() const { return size_; }
    std::size_t keep() const { return keep_; }
    void apply(std::span<const double> in, std::span<double> out) const;
    // Orthonormal DCT-III; only valid when keep == size.
    void invert(std::span<const double> coeffs, std::span<double> out) const;

private:
    std::size_t size_;
    std::size_t keep_;
    std::vector<double> basis_;  // keep x size, row k = s_k cos(pi k (2n+1) / 2N)
};

std::vector<double> dct_ii(std::span<const double> v, std::size_t keep);
std::vector<double> dct_ii_inverse(std::span<const double> coeffs);

// Subtracts each column's temporal mean. Throws on an empty matrix.
FeatureMatrix cmn(const FeatureMatrix& m);

// Regression deltas over +-K frames with edge replication; same shape.
FeatureMatrix deltas(const FeatureMatrix& m, int K = 2);

// [statics | delta | delta-delta] with the layout recorded in meta.
FeatureMatrix append_deltas(const FeatureMatrix& statics, int K = 2);

}  // namespace tecc
