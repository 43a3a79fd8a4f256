#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "iiengine/image.hpp"

namespace iiengine::testing {

inline Image random_image(std::mt19937_64& rng, std::size_t rows, std::size_t cols, Pixel pmax) {
  std::uniform_int_distribution<Pixel> dist(0, pmax);
  std::vector<Pixel> px(rows * cols);
  for (auto& p : px) {
    p = dist(rng);
  }
  return Image(rows, cols, pmax, std::move(px));
}

// Brute-force region sum straight from the pixels, independent of any
// integral-image code.
inline Sum region_sum(const Image& img, std::size_t top, std::size_t left, std::size_t bottom,
                      std::size_t right) {
  Sum s = 0;
  for (std::size_t r = top; r <= bottom; ++r) {
    for (std::size_t c = left; c <= right; ++c) {
      s += img(r, c);
    }
  }
  return s;
}

}  // namespace iiengine::testing
