#pragma once

#include "harp/multiplier.hpp"

namespace harp {

/// Cone-adapted symbol realized as a polynomial in the Riesz symbols.
///
/// The odd part is the truncated zonal-harmonic expansion of
/// sign(xi . xi_C) smoothed by the Poisson kernel at radius 1 - eta/4; the
/// returned symbol is the shifted form (1 + upsilon)/2, extended
/// 0-homogeneously off the sphere with value 0 at the origin.
struct ZonalDesign {
  Multiplier multiplier;
  int degree = 0;               // polynomial degree on the unit sphere
  double poisson_radius = 0.0;  // 1 - eta/4
  double tail_bound = 0.0;      // sup-norm bound on the dropped tail
  std::vector<double> coeffs;   // c_m, m = 0..degree; even entries are zero
};

ZonalDesign zonal_cone_symbol(GridPtr grid, const ConeSpec& cone, double eta);

/// Gegenbauer polynomials for S^{d-1}, normalized so G_m(1) = 1
/// (Chebyshev for d = 2, Legendre for d = 3).  Returns G_0..G_mmax at t.
std::vector<double> gegenbauer_normalized(int d, int mmax, double t);

/// Sum c_m G_m(t) for the family of dimension d.
double zonal_eval(const std::vector<double>& coeffs, int d, double t);

}  // namespace harp
