#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iiengine/image.hpp"

namespace iiengine {

// Malformed PGM input; offset is the byte position of the problem.
class PgmError : public std::runtime_error {
 public:
  PgmError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

enum class PgmFormat { ascii, binary };

namespace detail {

class PgmReader {
 public:
  explicit PgmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  std::uint8_t byte_at(std::size_t i) const noexcept { return bytes_[i]; }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') {
          ++pos_;
        }
      } else if (std::isspace(ch)) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  // Reads a decimal token; `what` names it in error messages.
  std::uint64_t number(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    last_start_ = start;
    if (pos_ >= bytes_.size()) {
      throw PgmError(std::string("truncated data: missing ") + what, pos_);
    }
    std::uint64_t v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > 0xFFFFFFFFull) {
        throw PgmError(std::string(what) + " is too large", start);
      }
      ++pos_;
    }
    if (pos_ == start) {
      throw PgmError(std::string("expected ") + what, start);
    }
    if (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#') {
      throw PgmError(std::string("malformed ") + what, start);
    }
    return v;
  }

  void advance(std::size_t n) noexcept { pos_ += n; }

  // Offset of the most recent token read by number().
  std::size_t last_start() const noexcept { return last_start_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  std::size_t last_start_ = 0;
};

}  // namespace detail

/// Parses a P2 (ASCII) or P5 (binary) PGM stream. Binary samples are one byte
/// for maxval < 256 and two bytes big-endian otherwise.
inline Image parse_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw PgmError("bad magic: expected P2 or P5", 0);
  }
  const bool binary = bytes[1] == '5';
  detail::PgmReader in(bytes);
  in.advance(2);
  if (in.remaining() > 0 && !std::isspace(in.byte_at(in.pos())) && in.byte_at(in.pos()) != '#') {
    throw PgmError("bad magic: expected P2 or P5", 0);
  }

  const auto width = in.number("width");
  if (width == 0) {
    throw PgmError("zero width", in.last_start());
  }
  const auto height = in.number("height");
  if (height == 0) {
    throw PgmError("zero height", in.last_start());
  }
  const auto maxval = in.number("maxval");
  if (maxval == 0 || maxval > 65535) {
    throw PgmError("maxval " + std::to_string(maxval) + " outside [1, 65535]", in.last_start());
  }

  const std::size_t count = width * height;
  std::vector<Pixel> pixels;
  pixels.reserve(std::min<std::size_t>(count, bytes.size()));

  if (binary) {
    // Exactly one whitespace byte separates maxval from the raster.
    if (in.remaining() == 0) {
      throw PgmError("truncated data: missing raster", in.pos());
    }
    in.advance(1);
    const std::size_t sample_bytes = maxval < 256 ? 1 : 2;
    const std::size_t start = in.pos();
    if (in.remaining() < count * sample_bytes) {
      throw PgmError("truncated data: raster needs " + std::to_string(count * sample_bytes) +
                         " bytes, " + std::to_string(in.remaining()) + " present",
                     start);
    }
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t off = start + i * sample_bytes;
      Pixel v = in.byte_at(off);
      if (sample_bytes == 2) {
        v = (v << 8) | in.byte_at(off + 1);
      }
      if (v > maxval) {
        throw PgmError("sample " + std::to_string(i) + " value " + std::to_string(v) +
                           " exceeds maxval " + std::to_string(maxval),
                       off);
      }
      pixels.push_back(v);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const auto v = in.number("sample");
      if (v > maxval) {
        throw PgmError("sample " + std::to_string(i) + " value " + std::to_string(v) +
                           " exceeds maxval " + std::to_string(maxval),
                       in.last_start());
      }
      pixels.push_back(static_cast<Pixel>(v));
    }
  }
  return Image(height, width, static_cast<Pixel>(maxval), std::move(pixels));
}

inline Image parse_pgm(std::string_view text) {
  return parse_pgm(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

/// Serializes an image as PGM with maxval = img.pmax().
inline std::vector<std::uint8_t> write_pgm(const Image& img, PgmFormat format) {
  if (img.pmax() > 65535) {
    throw std::invalid_argument("PGM maxval is limited to 65535");
  }
  const std::string header = std::string(format == PgmFormat::binary ? "P5" : "P2") + "\n" +
                             std::to_string(img.cols()) + " " + std::to_string(img.rows()) + "\n" +
                             std::to_string(img.pmax()) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  if (format == PgmFormat::binary) {
    const bool wide = img.pmax() >= 256;
    for (Pixel p : img.pixels()) {
      if (wide) {
        out.push_back(static_cast<std::uint8_t>(p >> 8));
      }
      out.push_back(static_cast<std::uint8_t>(p & 0xFF));
    }
  } else {
    for (std::size_t r = 0; r < img.rows(); ++r) {
      std::string line;
      for (std::size_t c = 0; c < img.cols(); ++c) {
        if (c > 0) {
          line += ' ';
        }
        line += std::to_string(img(r, c));
      }
      line += '\n';
      out.insert(out.end(), line.begin(), line.end());
    }
  }
  return out;
}

}  // namespace iiengine
