#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace iiengine {

using Pixel = std::uint32_t;
using Sum = std::uint64_t;

// Row-major 2-D grid with zero-based (row, col) indexing.
template <typename T>
class Grid {
 public:
  Grid() = default;

  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) {
      throw std::invalid_argument("grid dimensions must be positive");
    }
  }

  Grid(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) {
      throw std::invalid_argument("grid dimensions must be positive");
    }
    if (data_.size() != rows * cols) {
      throw std::invalid_argument("grid data length " + std::to_string(data_.size()) +
                                  " does not match " + std::to_string(rows) + "x" +
                                  std::to_string(cols));
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  T& at(std::size_t r, std::size_t c) {
    check(r, c);
    return (*this)(r, c);
  }
  const T& at(std::size_t r, std::size_t c) const {
    check(r, c);
    return (*this)(r, c);
  }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const T> values() const noexcept { return data_; }
  std::span<T> values() noexcept { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  void check(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) {
      throw std::out_of_range("index (" + std::to_string(r) + ", " + std::to_string(c) +
                              ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// Rectangular image of non-negative samples bounded by a declared maximum.
class Image {
 public:
  Image(std::size_t rows, std::size_t cols, Pixel pmax, std::vector<Pixel> pixels)
      : pmax_(pmax), pixels_(rows, cols, std::move(pixels)) {
    if (pmax == 0) {
      throw std::invalid_argument("maximum pixel value must be positive");
    }
    auto vals = pixels_.values();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (vals[i] > pmax) {
        throw std::invalid_argument("pixel " + std::to_string(i) + " value " +
                                    std::to_string(vals[i]) + " exceeds maximum " +
                                    std::to_string(pmax));
      }
    }
  }

  static Image filled(std::size_t rows, std::size_t cols, Pixel pmax, Pixel value) {
    return Image(rows, cols, pmax, std::vector<Pixel>(rows * cols, value));
  }

  std::size_t rows() const noexcept { return pixels_.rows(); }
  std::size_t cols() const noexcept { return pixels_.cols(); }
  Pixel pmax() const noexcept { return pmax_; }

  Pixel operator()(std::size_t r, std::size_t c) const noexcept { return pixels_(r, c); }
  Pixel at(std::size_t r, std::size_t c) const { return pixels_.at(r, c); }
  std::span<const Pixel> row(std::size_t r) const { return pixels_.row(r); }
  std::span<const Pixel> pixels() const noexcept { return pixels_.values(); }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  Pixel pmax_;
  Grid<Pixel> pixels_;
};

// ii(r, c): sum of all pixels at or above row r and at or left of column c.
using IntegralImage = Grid<Sum>;

// S(r, c): inclusive prefix sum of row r up to column c.
using RowSumPlane = Grid<Sum>;

}  // namespace iiengine
