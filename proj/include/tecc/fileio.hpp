#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tecc {

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`, so a reader
// never observes a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
void write_file_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

// Minimal RFC 4180 field splitting (double-quoted fields, "" escapes).
std::vector<std::string> split_csv_line(std::string_view line);
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// 17 significant digits, enough for an exact text round trip of a double.
std::string format_double(double value);

}  // namespace tecc
