#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace iiengine {

using Wide = unsigned __int128;

// Image geometry for buffer sizing. rows is the first number of an "RxC" size.
struct Geometry {
  std::uint32_t rows = 1;
  std::uint32_t cols = 1;
  std::uint32_t pmax = 1;

  void validate() const {
    if (rows == 0 || cols == 0 || pmax == 0) {
      throw std::invalid_argument("geometry rows, cols and pmax must be positive");
    }
  }

  friend bool operator==(const Geometry&, const Geometry&) = default;
};

inline std::string to_string(const Geometry& g) {
  return std::to_string(g.rows) + "x" + std::to_string(g.cols);
}

/// Number of significant bits in x (0 for x == 0).
constexpr unsigned bit_width(Wide x) noexcept {
  unsigned n = 0;
  while (x != 0) {
    x >>= 1;
    ++n;
  }
  return n;
}

/// Exact ceil(log2(x)) for x >= 1.
constexpr unsigned ceil_log2(Wide x) {
  if (x == 0) {
    throw std::domain_error("ceil_log2 of zero");
  }
  return x == 1 ? 0 : bit_width(x - 1);
}

// Sizing formulas yield at least one bit: a memory word cannot be narrower.
constexpr unsigned floored_width(unsigned bits) noexcept { return bits == 0 ? 1 : bits; }

constexpr Wide standard_product(const Geometry& g) noexcept {
  return Wide{g.rows} * Wide{g.cols} * Wide{g.pmax};
}

constexpr Wide proposed_product(const Geometry& g) noexcept { return Wide{g.rows} * Wide{g.pmax}; }

/// Row buffer width holding full integral values: ceil(log2(rows*cols*pmax)).
inline unsigned width_standard(const Geometry& g) {
  g.validate();
  return floored_width(ceil_log2(standard_product(g)));
}

/// Row buffer width holding adjacent-column differences: ceil(log2(rows*pmax)).
inline unsigned width_proposed(const Geometry& g) {
  g.validate();
  return floored_width(ceil_log2(proposed_product(g)));
}

/// Both designs store one word per column.
inline std::uint64_t buffer_depth(const Geometry& g) {
  g.validate();
  return g.cols;
}

/// Largest possible column prefix sum, reached in the last row.
inline std::uint64_t worst_case_adjacent_difference(const Geometry& g) {
  g.validate();
  return std::uint64_t{g.rows} * g.pmax;
}

/// Bits needed to represent every value in [0, max_value].
///
/// Differs from ceil(log2(max_value)) by one when max_value is a power of two;
/// the simulator sizes its registers with this, reports use the formulas above.
constexpr unsigned safe_width(Wide max_value) noexcept { return floored_width(bit_width(max_value)); }

// Percentage held in tenths, truncated toward zero.
struct PercentTenths {
  std::uint32_t tenths = 0;

  std::string str() const { return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10); }

  friend bool operator==(const PercentTenths&, const PercentTenths&) = default;
};

struct MemoryProfile {
  Geometry geometry;
  unsigned std_width_bits = 0;
  unsigned prop_width_bits = 0;
  std::uint64_t depth_words = 0;
  std::uint64_t std_total_bits = 0;
  std::uint64_t prop_total_bits = 0;
  PercentTenths reduction_pct;
};

inline MemoryProfile memory_profile(const Geometry& g) {
  MemoryProfile p;
  p.geometry = g;
  p.std_width_bits = width_standard(g);
  p.prop_width_bits = width_proposed(g);
  p.depth_words = buffer_depth(g);
  p.std_total_bits = p.std_width_bits * p.depth_words;
  p.prop_total_bits = p.prop_width_bits * p.depth_words;
  const std::uint64_t saved = p.std_total_bits - p.prop_total_bits;
  p.reduction_pct.tenths = static_cast<std::uint32_t>(saved * 1000 / p.std_total_bits);
  return p;
}

struct Figure1Point {
  Geometry geometry;
  std::uint64_t std_total_bits = 0;
};

/// Standard-design buffer size per geometry, in input order.
inline std::vector<Figure1Point> figure1_series(const std::vector<Geometry>& geometries) {
  if (geometries.empty()) {
    throw std::invalid_argument("figure series needs at least one geometry");
  }
  std::vector<Figure1Point> out;
  out.reserve(geometries.size());
  for (const auto& g : geometries) {
    out.push_back({g, width_standard(g) * buffer_depth(g)});
  }
  return out;
}

}  // namespace iiengine
