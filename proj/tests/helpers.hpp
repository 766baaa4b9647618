// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gomp/common.hpp"
#include "gomp/random.hpp"

#include <filesystem>
#include <string>

namespace testing {

inline double max_abs(const gomp::CMatrix& m)
{
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline gomp::CMatrix random_complex(Eigen::Index r, Eigen::Index c, std::uint64_t seed)
{
  gomp::Rng rng(seed);
  return gomp::complex_gaussian(r, c, rng);
}

inline std::filesystem::path tmp_path(const std::string& name)
{
  return std::filesystem::path(GOMP_TEST_TMPDIR) / name;
}

} // namespace testing
