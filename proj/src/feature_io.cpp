#include "tecc/feature_io.hpp"

#include "tecc/error.hpp"
#include "tecc/fileio.hpp"

#include <bit>
#include <cstring>

namespace tecc {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// FEA1 does not store the block layout; front-end names ending in
// "-static" carry no deltas, otherwise a column count divisible by three is
// read as [static | delta | delta-delta].
FeatureLayout infer_layout(const std::string& name, std::size_t cols) {
    if (!ends_with(name, "-static") && cols % 3 == 0 && cols > 0) {
        return {cols / 3, cols / 3, cols / 3};
    }
    return {cols, 0, 0};
}

}  // namespace

std::vector<std::uint8_t> encode_fea1(const FeatureMatrix& m) {
    const std::string& name = m.meta().frontend;
    if (name.size() > 255) throw Error("front-end name longer than 255 bytes");
    std::vector<std::uint8_t> out;
    out.reserve(13 + name.size() + m.rows() * m.cols() * 4);
    for (char c : std::string_view("FEA1")) out.push_back(static_cast<std::uint8_t>(c));
    put_u32(out, static_cast<std::uint32_t>(m.rows()));
    put_u32(out, static_cast<std::uint32_t>(m.cols()));
    out.push_back(static_cast<std::uint8_t>(name.size()));
    for (char c : name) out.push_back(static_cast<std::uint8_t>(c));
    for (double v : m.data()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    return out;
}

FeatureMatrix decode_fea1(std::span<const std::uint8_t> bytes, std::string recording_id) {
    if (bytes.size() < 13 || std::memcmp(bytes.data(), "FEA1", 4) != 0) {
        throw Error("not a FEA1 feature file" + (recording_id.empty() ? "" : " ('" + recording_id + "')"));
    }
    const std::size_t rows = get_u32(bytes.data() + 4);
    const std::size_t cols = get_u32(bytes.data() + 8);
    const std::size_t name_len = bytes[12];
    const std::size_t header = 13 + name_len;
    if (bytes.size() != header + rows * cols * 4) throw Error("FEA1 payload size does not match its header");
    std::string name(reinterpret_cast<const char*>(bytes.data() + 13), name_len);
    std::vector<double> data(rows * cols);
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = std::bit_cast<float>(get_u32(bytes.data() + header + 4 * i));
    }
    const FeatureLayout layout = infer_layout(name, cols);
    return FeatureMatrix(rows, cols, std::move(data), FeatureMeta{std::move(recording_id), std::move(name), layout});
}

void write_fea1(const std::filesystem::path& path, const FeatureMatrix& m) {
    write_file_atomic(path, encode_fea1(m));
}

FeatureMatrix read_fea1(const std::filesystem::path& path, std::string recording_id) {
    return decode_fea1(read_file_bytes(path), std::move(recording_id));
}

std::string format_feature_csv(const FeatureMatrix& m) {
    const FeatureLayout& layout = m.meta().layout;
    std::string out;
    std::size_t col = 0;
    const auto add_block = [&](std::string_view prefix, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i, ++col) {
            if (col > 0) out += ',';
            out += prefix;
            out += std::to_string(i);
        }
    };
    add_block("c", layout.static_dims);
    add_block("d", layout.delta_dims);
    add_block("dd", layout.delta_delta_dims);
    out += '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c > 0) out += ',';
            out += format_double(m(r, c));
        }
        out += '\n';
    }
    return out;
}

}  // namespace tecc
