#pragma once

#include <cstddef>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "iiengine/engine.hpp"

namespace iiengine {

inline constexpr const char* kTraceHeader = "cycle,row,col,buf_read,buf_write,first_col_reg,out0,out1";

/// One CSV line (no newline) for a cycle record. row/col give the first
/// column fed that cycle and the buffer addresses are col and col+1, so
/// buf_read/buf_write hold the old and new word of each lane joined by ';'.
/// Inapplicable fields are left empty.
inline std::string trace_csv_line(const CycleRecord& rec) {
  std::string line = std::to_string(rec.cycle) + ",";
  if (rec.input) {
    line += std::to_string(rec.input->row) + "," + std::to_string(rec.input->col);
  } else {
    line += ",";
  }
  std::string reads;
  std::string writes;
  for (const BufferAccess& a : rec.buffer) {
    if (!reads.empty()) {
      reads += ';';
      writes += ';';
    }
    reads += std::to_string(a.read);
    writes += std::to_string(a.write);
  }
  line += "," + reads + "," + writes + ",";
  if (rec.first_col_reg) {
    line += std::to_string(*rec.first_col_reg);
  }
  for (std::size_t i = 0; i < 2; ++i) {
    line += ',';
    if (i < rec.outputs.size()) {
      line += std::to_string(rec.outputs[i].value);
    }
  }
  return line;
}

/// Rebuilds an integral image from trace CSV (with header). Outputs leave the
/// engine in raster order, so the out0/out1 fields are placed sequentially.
inline IntegralImage replay_trace_csv(std::istream& in, std::size_t rows, std::size_t cols) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw std::runtime_error("trace is missing its header line");
  }
  IntegralImage ii(rows, cols);
  std::size_t next = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
      fields.emplace_back();
    }
    if (fields.size() != 8) {
      throw std::runtime_error("trace line " + std::to_string(line_no) + " has " +
                               std::to_string(fields.size()) + " fields, expected 8");
    }
    for (std::size_t i = 6; i < 8; ++i) {
      if (fields[i].empty()) {
        continue;
      }
      if (next >= ii.size()) {
        throw std::runtime_error("trace emits more values than the image holds");
      }
      ii.values()[next++] = std::stoull(fields[i]);
    }
  }
  if (next != ii.size()) {
    throw std::runtime_error("trace emits " + std::to_string(next) + " values, expected " +
                             std::to_string(ii.size()));
  }
  return ii;
}

}  // namespace iiengine
