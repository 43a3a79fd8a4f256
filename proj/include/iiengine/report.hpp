#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iiengine/memory_model.hpp"

namespace iiengine {

inline constexpr const char* kMemReportHeader =
    "rows,cols,pmax,std_width_bits,prop_width_bits,depth_words,std_total_bits,prop_total_bits,"
    "reduction_pct";

namespace detail {

inline std::uint32_t parse_positive(std::string_view text, std::string_view whole) {
  std::uint32_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end || v == 0) {
    throw std::invalid_argument("malformed size \"" + std::string(whole) +
                                "\": expected ROWSxCOLS with positive integers");
  }
  return v;
}

}  // namespace detail

/// Parses "RxC" (rows first), e.g. "1920x1080" -> 1920 rows, 1080 columns.
inline Geometry parse_size(std::string_view size, std::uint32_t pmax) {
  const auto x = size.find_first_of("xX");
  if (x == std::string_view::npos) {
    throw std::invalid_argument("malformed size \"" + std::string(size) +
                                "\": expected ROWSxCOLS");
  }
  Geometry g{detail::parse_positive(size.substr(0, x), size),
             detail::parse_positive(size.substr(x + 1), size), pmax};
  g.validate();
  return g;
}

inline std::string memreport_csv_row(const MemoryProfile& p) {
  std::ostringstream os;
  os << p.geometry.rows << ',' << p.geometry.cols << ',' << p.geometry.pmax << ','
     << p.std_width_bits << ',' << p.prop_width_bits << ',' << p.depth_words << ','
     << p.std_total_bits << ',' << p.prop_total_bits << ',' << p.reduction_pct.str();
  return os.str();
}

inline std::string memreport_csv(const std::vector<MemoryProfile>& rows) {
  std::string out = std::string(kMemReportHeader) + "\n";
  for (const auto& p : rows) {
    out += memreport_csv_row(p) + "\n";
  }
  return out;
}

// Fixed-width text table for terminals.
inline std::string memreport_table(const std::vector<MemoryProfile>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(14) << "size" << std::right << std::setw(7) << "pmax"
     << std::setw(10) << "std_bits" << std::setw(11) << "prop_bits" << std::setw(8) << "depth"
     << std::setw(12) << "std_total" << std::setw(12) << "prop_total" << std::setw(11)
     << "reduction" << '\n';
  for (const auto& p : rows) {
    os << std::left << std::setw(14) << to_string(p.geometry) << std::right << std::setw(7)
       << p.geometry.pmax << std::setw(10) << p.std_width_bits << std::setw(11)
       << p.prop_width_bits << std::setw(8) << p.depth_words << std::setw(12) << p.std_total_bits
       << std::setw(12) << p.prop_total_bits << std::setw(10) << p.reduction_pct.str() << "%\n";
  }
  return os.str();
}

inline std::string figure1_csv(const std::vector<Figure1Point>& series) {
  std::string out = "label,std_total_bits\n";
  for (const auto& pt : series) {
    out += to_string(pt.geometry) + "," + std::to_string(pt.std_total_bits) + "\n";
  }
  return out;
}

}  // namespace iiengine
