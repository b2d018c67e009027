#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "poroflow/errors.hpp"
#include "poroflow/grid.hpp"

namespace poroflow {

enum class GridFormat { text, binary };

// Binary grid layout: magic "PGRD", one version byte (1), rows and cols as
// little-endian uint32, then rows*cols little-endian IEEE-754 doubles in
// row-major order. Text layout: "# rows=R cols=C dtype=f64" followed by R
// lines of C comma-separated values printed with 17 significant digits.

namespace detail {

constexpr char kGridMagic[4] = {'P', 'G', 'R', 'D'};
constexpr std::uint8_t kGridVersion = 1;

inline void put_u32_le(std::string& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

inline void put_f64_le(std::string& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
}

inline std::uint32_t get_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline double get_f64_le(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | p[b];
    return std::bit_cast<double>(bits);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open file for writing: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write to " + path);
}

inline ScalarGrid parse_binary_grid(const std::string& bytes) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kGridMagic, 4) != 0)
        throw FormatError("bad magic, expected PGRD", 0);
    if (bytes.size() < 5) throw FormatError("missing version byte", 4);
    if (p[4] != kGridVersion)
        throw FormatError("unsupported grid version " + std::to_string(p[4]), 4);
    if (bytes.size() < 13) throw FormatError("truncated dimension header", bytes.size());
    const std::uint32_t rows = get_u32_le(p + 5);
    const std::uint32_t cols = get_u32_le(p + 9);
    if (rows == 0 || cols == 0) throw FormatError("zero grid dimension", 5);
    const std::size_t count = static_cast<std::size_t>(rows) * cols;
    const std::size_t need = 13 + 8 * count;
    if (bytes.size() < need)
        throw FormatError("truncated payload, expected " + std::to_string(need) + " bytes",
                          bytes.size());
    std::vector<double> data(count);
    for (std::size_t n = 0; n < count; ++n) {
        data[n] = get_f64_le(p + 13 + 8 * n);
        if (!std::isfinite(data[n]))
            throw FormatError("non-finite value in payload", 13 + 8 * n);
    }
    return ScalarGrid(rows, cols, std::move(data));
}

inline ScalarGrid parse_text_grid(const std::string& bytes) {
    std::size_t pos = 0;
    const auto line_at = [&](std::size_t& offset) {
        offset = pos;
        const std::size_t nl = bytes.find('\n', pos);
        std::string line = bytes.substr(pos, nl == std::string::npos ? nl : nl - pos);
        pos = nl == std::string::npos ? bytes.size() : nl + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };

    std::size_t header_off = 0;
    const std::string header = line_at(header_off);
    std::size_t rows = 0, cols = 0;
    {
        std::istringstream hs(header);
        std::string hash, rows_kv, cols_kv;
        hs >> hash >> rows_kv >> cols_kv;
        if (hash != "#" || rows_kv.rfind("rows=", 0) != 0 || cols_kv.rfind("cols=", 0) != 0)
            throw FormatError("bad text header, expected '# rows=R cols=C dtype=f64'",
                              header_off);
        try {
            rows = std::stoull(rows_kv.substr(5));
            cols = std::stoull(cols_kv.substr(5));
        } catch (const std::exception&) {
            throw FormatError("unparsable dimensions in text header", header_off);
        }
        if (rows == 0 || cols == 0)
            throw FormatError("zero grid dimension", header_off);
    }

    std::vector<double> data;
    data.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        std::size_t line_off = 0;
        if (pos >= bytes.size())
            throw FormatError("missing data row " + std::to_string(r), bytes.size());
        const std::string line = line_at(line_off);
        std::size_t cell_start = 0;
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t comma = line.find(',', cell_start);
            const std::string cell =
                line.substr(cell_start, comma == std::string::npos ? comma : comma - cell_start);
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                if (used == 0) throw std::invalid_argument("empty");
                data.push_back(v);
            } catch (const std::exception&) {
                throw FormatError("unparsable value in row " + std::to_string(r),
                                  line_off + cell_start);
            }
            if (!std::isfinite(data.back()))
                throw FormatError("non-finite value in row " + std::to_string(r),
                                  line_off + cell_start);
            if (c + 1 < cols) {
                if (comma == std::string::npos)
                    throw FormatError("row " + std::to_string(r) + " has fewer than " +
                                          std::to_string(cols) + " columns",
                                      line_off + line.size());
                cell_start = comma + 1;
            } else if (comma != std::string::npos) {
                throw FormatError("row " + std::to_string(r) + " has more than " +
                                      std::to_string(cols) + " columns",
                                  line_off + comma);
            }
        }
    }
    return ScalarGrid(rows, cols, std::move(data));
}

}  // namespace detail

inline void write_grid(const ScalarGrid& g, const std::string& path,
                       GridFormat format = GridFormat::binary) {
    if (g.empty()) throw DimensionError("cannot write an empty grid");
    std::string bytes;
    if (format == GridFormat::binary) {
        bytes.reserve(13 + 8 * g.size());
        bytes.append(detail::kGridMagic, 4);
        bytes.push_back(static_cast<char>(detail::kGridVersion));
        detail::put_u32_le(bytes, static_cast<std::uint32_t>(g.rows()));
        detail::put_u32_le(bytes, static_cast<std::uint32_t>(g.cols()));
        for (double v : g) detail::put_f64_le(bytes, v);
    } else {
        std::ostringstream ss;
        ss << "# rows=" << g.rows() << " cols=" << g.cols() << " dtype=f64\n";
        ss.precision(17);
        for (std::size_t i = 0; i < g.rows(); ++i) {
            for (std::size_t j = 0; j < g.cols(); ++j) {
                if (j) ss << ',';
                ss << g(i, j);
            }
            ss << '\n';
        }
        bytes = ss.str();
    }
    detail::write_file(path, bytes);
}

/// Reads either format; binary is detected by its magic bytes.
inline ScalarGrid read_grid(const std::string& path) {
    const std::string bytes = detail::read_file(path);
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), detail::kGridMagic, 4) == 0)
        return detail::parse_binary_grid(bytes);
    return detail::parse_text_grid(bytes);
}

}  // namespace poroflow
