#pragma once

#include <random>

#include "harp/grid.hpp"

namespace harp::test {

inline GridFunction random_function(const GridPtr& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  GridFunction f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = cplx{gauss(rng), gauss(rng)};
  return f;
}

inline GridFunction random_real_function(const GridPtr& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  GridFunction f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = cplx{gauss(rng), 0.0};
  return f;
}

inline double max_abs_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace harp::test
