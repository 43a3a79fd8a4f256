#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "iiengine/image.hpp"

namespace iiengine {

namespace detail {

// Acc must hold rows * cols * pmax without wrapping. Handles rows
// first, first + stride, ...
template <typename Acc>
void naive_rows(const Image& img, IntegralImage& ii, std::size_t first, std::size_t stride) {
  for (std::size_t r = first; r < img.rows(); r += stride) {
    for (std::size_t c = 0; c < img.cols(); ++c) {
      Acc total = 0;
      for (std::size_t y = 0; y <= r; ++y) {
        for (Pixel p : img.row(y).first(c + 1)) {
          total += p;
        }
      }
      ii(r, c) = total;
    }
  }
}

template <typename Acc>
void naive_sums(const Image& img, IntegralImage& ii) {
  // Row cost grows with r, so rows are interleaved rather than blocked.
  const std::size_t threads =
      img.pixels().size() < 65536 ? 1 : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < threads; ++t) {
    pool.emplace_back([&img, &ii, t, threads] { naive_rows<Acc>(img, ii, t, threads); });
  }
  naive_rows<Acc>(img, ii, 0, threads);
}

}  // namespace detail

/// Integral image by direct double summation over [0..r] x [0..c].
/// Quartic in the image side; this is the golden model the other methods are
/// checked against. Large frames take minutes.
inline IntegralImage integral_naive(const Image& img) {
  IntegralImage ii(img.rows(), img.cols());
  // 32-bit accumulation doubles the vector width when no sum can exceed it.
  if (Sum{img.rows()} * img.cols() * img.pmax() <= 0xFFFFFFFFull) {
    detail::naive_sums<std::uint32_t>(img, ii);
  } else {
    detail::naive_sums<Sum>(img, ii);
  }
  return ii;
}

/// Serial recursion: s(r,c) = s(r,c-1) + i(r,c), ii(r,c) = ii(r-1,c) + s(r,c).
inline IntegralImage integral_serial_vj(const Image& img) {
  IntegralImage ii(img.rows(), img.cols());
  for (std::size_t r = 0; r < img.rows(); ++r) {
    Sum s = 0;
    for (std::size_t c = 0; c < img.cols(); ++c) {
      s += img(r, c);
      ii(r, c) = (r == 0 ? 0 : ii(r - 1, c)) + s;
    }
  }
  return ii;
}

namespace detail {

inline void row_prefix(const Image& img, RowSumPlane& plane, std::size_t r) {
  Sum s = 0;
  for (std::size_t c = 0; c < img.cols(); ++c) {
    s += img(r, c);
    plane(r, c) = s;
  }
}

// Splits [0, n) into at most `parts` contiguous blocks and runs fn(begin, end)
// on each. The calling thread takes the first block.
template <typename Fn>
void for_blocks(std::size_t n, std::size_t parts, Fn&& fn) {
  parts = std::clamp<std::size_t>(parts, 1, n);
  const std::size_t base = n / parts;
  const std::size_t extra = n % parts;
  std::vector<std::jthread> pool;
  pool.reserve(parts - 1);
  std::size_t begin = 0;
  std::size_t first_end = 0;
  for (std::size_t p = 0; p < parts; ++p) {
    const std::size_t end = begin + base + (p < extra ? 1 : 0);
    if (p == 0) {
      first_end = end;
    } else {
      pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    begin = end;
  }
  fn(std::size_t{0}, first_end);
}

}  // namespace detail

/// Per-row inclusive prefix sums S(r, c). Rows are independent.
inline RowSumPlane row_sum_plane(const Image& img) {
  RowSumPlane plane(img.rows(), img.cols());
  for (std::size_t r = 0; r < img.rows(); ++r) {
    detail::row_prefix(img, plane, r);
  }
  return plane;
}

/// Two-phase row-parallel integral image.
///
/// Phase 1 computes the row-sum plane with rows split across `workers`
/// threads; phase 2 accumulates it vertically with columns split across
/// threads. Each output word is written by exactly one thread in each phase,
/// so the result does not depend on the worker count.
inline IntegralImage integral_row_parallel(const Image& img, std::size_t workers) {
  if (workers == 0) {
    throw std::invalid_argument("worker count must be at least 1");
  }
  IntegralImage ii(img.rows(), img.cols());
  detail::for_blocks(img.rows(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      detail::row_prefix(img, ii, r);
    }
  });
  detail::for_blocks(img.cols(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = 1; r < ii.rows(); ++r) {
      for (std::size_t c = begin; c < end; ++c) {
        ii(r, c) += ii(r - 1, c);
      }
    }
  });
  return ii;
}

/// Differences between horizontally adjacent integral values in row r, with
/// d(r, 0) = ii(r, 0). Each entry is the column prefix sum down to row r.
inline std::vector<Sum> adjacent_column_diffs(const IntegralImage& ii, std::size_t r) {
  if (r >= ii.rows()) {
    throw std::out_of_range("row " + std::to_string(r) + " outside integral image with " +
                            std::to_string(ii.rows()) + " rows");
  }
  std::vector<Sum> d(ii.cols());
  auto row = ii.row(r);
  d[0] = row[0];
  for (std::size_t c = 1; c < row.size(); ++c) {
    d[c] = row[c] - row[c - 1];
  }
  return d;
}

// Inclusive rectangle [top..bottom] x [left..right].
struct Box {
  std::size_t top = 0;
  std::size_t left = 0;
  std::size_t bottom = 0;
  std::size_t right = 0;
};

/// Sum over an inclusive rectangle from four corner lookups; corners above
/// or left of the image contribute zero.
inline Sum box_sum(const IntegralImage& ii, const Box& box) {
  if (box.top > box.bottom || box.left > box.right) {
    throw std::invalid_argument("malformed box: top/left must not exceed bottom/right");
  }
  if (box.bottom >= ii.rows() || box.right >= ii.cols()) {
    throw std::out_of_range("box extends past the " + std::to_string(ii.rows()) + "x" +
                            std::to_string(ii.cols()) + " image");
  }
  const bool has_above = box.top > 0;
  const bool has_left = box.left > 0;
  const Sum whole = ii(box.bottom, box.right);
  const Sum above = has_above ? ii(box.top - 1, box.right) : 0;
  const Sum left = has_left ? ii(box.bottom, box.left - 1) : 0;
  const Sum corner = (has_above && has_left) ? ii(box.top - 1, box.left - 1) : 0;
  // Unsigned wrap cancels: whole + corner >= above + left for valid ii.
  return whole - above - left + corner;
}

}  // namespace iiengine
