#pragma once

#include "tecc/cepstral.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tecc {

// FEA1 layout, little-endian:
//   "FEA1" | u32 rows | u32 cols | u8 name_len | name (UTF-8) | rows*cols f32
// Values are stored as float32, so a round trip through FEA1 rounds each
// entry to single precision.
std::vector<std::uint8_t> encode_fea1(const FeatureMatrix& m);
FeatureMatrix decode_fea1(std::span<const std::uint8_t> bytes, std::string recording_id = {});

void write_fea1(const std::filesystem::path& path, const FeatureMatrix& m);
FeatureMatrix read_fea1(const std::filesystem::path& path, std::string recording_id = {});

// Header row of coefficient names (c0.., d0.., dd0..), one row per frame.
std::string format_feature_csv(const FeatureMatrix& m);

}  // namespace tecc
