#pragma once

// Binary PGM (P5, maxval 255) reader and writer.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

#include "palmroi/error.hpp"
#include "palmroi/image.hpp"

namespace palmroi {

enum class PgmErrc {
    missing_file,
    malformed_header,
    unsupported_maxval,
    truncated_data,
    unwritable_path,
};

inline const char* to_string(PgmErrc e) {
    switch (e) {
        case PgmErrc::missing_file: return "missing file";
        case PgmErrc::malformed_header: return "malformed header";
        case PgmErrc::unsupported_maxval: return "unsupported maxval";
        case PgmErrc::truncated_data: return "truncated pixel data";
        case PgmErrc::unwritable_path: return "unwritable path";
    }
    return "unknown";
}

class PgmError : public IoError {
public:
    PgmError(PgmErrc code, const std::string& path, const std::string& detail = {})
        : IoError(std::string(to_string(code)) + ": " + path + (detail.empty() ? "" : " (" + detail + ")")),
          code_(code) {}

    PgmErrc code() const { return code_; }

private:
    PgmErrc code_;
};

namespace detail {

class PgmHeaderReader {
public:
    PgmHeaderReader(const std::vector<std::uint8_t>& data, const std::string& path)
        : data_(data), path_(path) {}

    // Skips whitespace and '#' comments, then reads an unsigned decimal.
    long long next_uint() {
        skip_separators();
        if (pos_ >= data_.size() || !std::isdigit(data_[pos_])) {
            throw PgmError(PgmErrc::malformed_header, path_, "expected a number at byte " + std::to_string(pos_));
        }
        long long v = 0;
        while (pos_ < data_.size() && std::isdigit(data_[pos_])) {
            v = v * 10 + (data_[pos_] - '0');
            if (v > std::numeric_limits<int>::max()) {
                throw PgmError(PgmErrc::malformed_header, path_, "number too large");
            }
            ++pos_;
        }
        return v;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    void single_whitespace() {
        if (pos_ >= data_.size() || !std::isspace(data_[pos_])) {
            throw PgmError(PgmErrc::malformed_header, path_, "missing whitespace after maxval");
        }
        ++pos_;
    }

    std::size_t pos() const { return pos_; }

private:
    void skip_separators() {
        while (pos_ < data_.size()) {
            if (std::isspace(data_[pos_])) {
                ++pos_;
            } else if (data_[pos_] == '#') {
                while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const std::vector<std::uint8_t>& data_;
    const std::string& path_;
    std::size_t pos_ = 2;
};

}  // namespace detail

/// Decodes a binary PGM held in memory. `name` only labels error messages.
inline GrayImage decode_pgm(const std::vector<std::uint8_t>& data, const std::string& name = "<memory>") {
    if (data.size() < 2 || data[0] != 'P' || data[1] != '5') {
        throw PgmError(PgmErrc::malformed_header, name, "magic is not P5");
    }
    detail::PgmHeaderReader reader(data, name);
    const long long width = reader.next_uint();
    const long long height = reader.next_uint();
    const long long maxval = reader.next_uint();
    if (width <= 0 || height <= 0) {
        throw PgmError(PgmErrc::malformed_header, name, "non-positive dimensions");
    }
    if (maxval != 255) {
        throw PgmError(PgmErrc::unsupported_maxval, name, "maxval " + std::to_string(maxval));
    }
    reader.single_whitespace();

    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    const std::size_t available = data.size() - reader.pos();
    if (available < count) {
        throw PgmError(PgmErrc::truncated_data, name,
                       "expected " + std::to_string(count) + " bytes, found " + std::to_string(available));
    }
    const auto first = data.begin() + static_cast<std::ptrdiff_t>(reader.pos());
    return GrayImage(static_cast<int>(width), static_cast<int>(height),
                     std::vector<std::uint8_t>(first, first + static_cast<std::ptrdiff_t>(count)));
}

/// Serialized form: "P5\n<w> <h>\n255\n" followed by the raw row-major bytes.
inline std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
    const std::string header =
        "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.pixels().begin(), img.pixels().end());
    return out;
}

inline GrayImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PgmError(PgmErrc::missing_file, path.string());
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_pgm(data, path.string());
}

inline void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    if (img.empty()) throw InvalidArgument("save_pgm: empty image");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw PgmError(PgmErrc::unwritable_path, path.string());
    const auto bytes = encode_pgm(img);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw PgmError(PgmErrc::unwritable_path, path.string(), "write failed");
}

}  // namespace palmroi
