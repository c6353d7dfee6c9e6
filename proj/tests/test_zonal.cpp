#include <doctest.h>

#include <cmath>
#include <numbers>

#include "harp/zonal.hpp"

using namespace harp;

namespace {

// Closed-form harmonic extension of the square wave sign(cos phi) on the
// disk: u(rho, phi) = (2/pi) atan(2 rho cos(phi) / (1 - rho^2)).  Oracle for
// the d = 2 zonal construction before truncation.
double poisson_square_wave(double rho, double t /* = cos phi */) {
  return 2.0 / std::numbers::pi * std::atan2(2.0 * rho * t, 1.0 - rho * rho);
}

}  // namespace

TEST_CASE("zonal d=2: matches the Poisson-smoothed sign up to the tail bound") {
  auto grid = make_grid({2}, {32});
  ConeSpec cone{0, {1.0, 0.0}, 1.0, 0.0};
  auto design = zonal_cone_symbol(grid, cone, 0.5);
  for (int i = 0; i <= 256; ++i) {
    const double phi = std::numbers::pi * i / 256.0;
    const double t = std::cos(phi);
    const double poly = zonal_eval(design.coeffs, 2, t);
    const double oracle = poisson_square_wave(design.poisson_radius, t);
    CHECK(std::abs(poly - oracle) <= design.tail_bound + 1e-9);
  }
}

TEST_CASE("zonal d=2 eta=0.5: shifted symbol within eta on both cones") {
  auto grid = make_grid({2}, {32});
  ConeSpec cone{0, {1.0, 0.0}, 1.0, 0.0};
  auto design = zonal_cone_symbol(grid, cone, 0.5);
  ConeFrame frame(cone, *grid);
  std::vector<int> idx(grid->axes());
  std::vector<double> xi(2), nxi(2);
  double worst = 0.0;
  for (std::size_t p = 0; p < design.multiplier.symbol().size(); ++p) {
    grid->unflatten(p, idx);
    factor_frequencies(*grid, 0, idx, xi);
    if (xi[0] == 0.0 && xi[1] == 0.0) continue;
    const double v = design.multiplier.symbol()[p].real();
    nxi = {-xi[0], -xi[1]};
    if (frame.contains(xi)) worst = std::max(worst, std::abs(v - 1.0));
    if (frame.contains(nxi)) worst = std::max(worst, std::abs(v));
  }
  CHECK(worst < 0.5);
}

TEST_CASE("zonal: shifted symbol is odd about the direction") {
  auto grid = make_grid({2}, {16});
  ConeSpec cone{0, {std::sqrt(0.5), std::sqrt(0.5)}, 1.0, 0.0};
  auto design = zonal_cone_symbol(grid, cone, 0.25);
  const ProductGrid& g = *grid;
  std::vector<int> idx(g.axes()), ridx(g.axes());
  for (std::size_t p = 0; p < design.multiplier.symbol().size(); ++p) {
    g.unflatten(p, idx);
    bool nyquist = false;
    for (int a = 0; a < g.axes(); ++a) {
      if (idx[a] == g.axis_size(a) / 2) nyquist = true;
      ridx[a] = idx[a] == 0 ? 0 : g.axis_size(a) - idx[a];
    }
    if (nyquist || p == 0) continue;  // -xi aliases at the Nyquist row
    const double sum = design.multiplier.symbol()[p].real() +
                       design.multiplier.symbol()[g.flat_index(ridx)].real();
    CHECK(std::abs(sum - 1.0) < 1e-10);
  }
}

TEST_CASE("zonal: degree grows as eta shrinks, within the log/eta shape") {
  auto grid = make_grid({2}, {16});
  ConeSpec cone{0, {1.0, 0.0}, 1.0, 0.0};
  int prev = 0;
  for (double eta : {0.5, 0.25, 0.1, 0.05}) {
    auto design = zonal_cone_symbol(grid, cone, eta);
    CHECK(design.degree >= prev);  // nonincreasing in eta
    prev = design.degree;
    // fitted form C_d * (log 1/eta) / eta, C_d about 5 for d=2
    const double shape = std::log(1.0 / eta) / eta;
    CHECK(design.degree <= 8.0 * shape + 16.0);
  }
}

TEST_CASE("zonal: one-dimensional factor is rejected with guidance") {
  auto grid = make_grid({1}, {16});
  ConeSpec cone{0, {1.0}, 1.0, 0.0};
  CHECK_THROWS_WITH_AS((void)zonal_cone_symbol(grid, cone, 0.5),
                       doctest::Contains("halfspace/hilbert"), std::invalid_argument);
}

TEST_CASE("gegenbauer: normalized families hit known values") {
  // d=3 gives Legendre: P_2(t) = (3t^2-1)/2
  auto G = gegenbauer_normalized(3, 4, 0.3);
  CHECK(G[2] == doctest::Approx(0.5 * (3 * 0.09 - 1)).epsilon(1e-12));
  // d=2 gives Chebyshev: T_3(t) = 4t^3 - 3t
  auto T = gegenbauer_normalized(2, 3, 0.3);
  CHECK(T[3] == doctest::Approx(4 * 0.027 - 0.9).epsilon(1e-12));
  // all families are 1 at t=1
  for (int d : {2, 3, 4, 5}) {
    auto V = gegenbauer_normalized(d, 8, 1.0);
    for (double v : V) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
  }
}
