#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "iiengine/image.hpp"

namespace iiengine {

inline constexpr char kIimMagic[4] = {'I', 'I', 'M', '1'};
inline constexpr std::size_t kIimHeaderBytes = 12;

/// One line per row, comma-separated, newline-terminated.
inline std::string integral_to_csv(const IntegralImage& ii) {
  std::string out;
  for (std::size_t r = 0; r < ii.rows(); ++r) {
    for (std::size_t c = 0; c < ii.cols(); ++c) {
      if (c > 0) {
        out += ',';
      }
      out += std::to_string(ii(r, c));
    }
    out += '\n';
  }
  return out;
}

namespace detail {

inline void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

inline std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    v |= std::uint64_t{in[at + i]} << (8 * i);
  }
  return v;
}

}  // namespace detail

// IIM1 layout: "IIM1", rows (u32 LE), cols (u32 LE), rows*cols u64 LE values.
inline std::vector<std::uint8_t> integral_to_iim1(const IntegralImage& ii) {
  if (ii.rows() > 0xFFFFFFFFu || ii.cols() > 0xFFFFFFFFu) {
    throw std::invalid_argument("IIM1 dimensions are limited to 32 bits");
  }
  std::vector<std::uint8_t> out(std::begin(kIimMagic), std::end(kIimMagic));
  out.reserve(kIimHeaderBytes + 8 * ii.size());
  detail::put_le(out, ii.rows(), 4);
  detail::put_le(out, ii.cols(), 4);
  for (Sum v : ii.values()) {
    detail::put_le(out, v, 8);
  }
  return out;
}

inline IntegralImage integral_from_iim1(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kIimHeaderBytes || !std::equal(std::begin(kIimMagic), std::end(kIimMagic),
                                                    bytes.begin())) {
    throw std::runtime_error("not an IIM1 file");
  }
  const std::uint64_t rows = detail::get_le(bytes, 4, 4);
  const std::uint64_t cols = detail::get_le(bytes, 8, 4);
  if (rows == 0 || cols == 0) {
    throw std::runtime_error("IIM1 file has zero dimensions");
  }
  if (bytes.size() != kIimHeaderBytes + 8 * rows * cols) {
    throw std::runtime_error("IIM1 length " + std::to_string(bytes.size()) + " does not match " +
                             std::to_string(rows) + "x" + std::to_string(cols));
  }
  std::vector<Sum> values(rows * cols);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = detail::get_le(bytes, kIimHeaderBytes + 8 * i, 8);
  }
  return IntegralImage(rows, cols, std::move(values));
}

}  // namespace iiengine
