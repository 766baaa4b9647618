// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gomp/common.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gomp {

using Rng = std::mt19937_64;

/// Mixes a base seed with stream indices into an independent sub-seed
/// (splitmix64 finalizer applied per component).
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts)
{
  std::uint64_t h = 0x9E3779B97F4A7C15ULL;
  for (std::uint64_t p : parts) {
    std::uint64_t z = h ^ (p + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    h = z ^ (z >> 31);
  }
  return h;
}

/// Unit-variance circular complex Gaussian matrix.
inline CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng)
{
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix out(rows, cols);
  // column-major fill so the draw order is fixed
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(r, c) = cplx(re, im);
    }
  return out;
}

} // namespace gomp
