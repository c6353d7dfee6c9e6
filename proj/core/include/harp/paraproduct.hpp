#pragma once

#include <set>

#include "harp/norms.hpp"

namespace harp {

/// Rectangle-indexed family of bump functions with declared per-factor
/// integral zeros and adaptedness order.
struct BumpFamily {
  std::function<GridFunction(const DyadicRectangle&)> generator;
  std::set<int> zero_coords;  // factors whose integral vanishes
  int adaptation_order = 2;
};

/// phi_R = w_R^sig: the wavelet family (zeros in every coordinate).
BumpFamily wavelet_bump_family(const WaveletSystem& sys, Signature sig);

/// Raised-cosine tensor bumps supported on the double of R, L^2 normalized;
/// factors listed in zero_coords get an odd modulation on their first axis.
BumpFamily smooth_bump_family(GridPtr grid, std::set<int> zero_coords);

/// Largest constant in |phi_R| <= C [chi_R^{(2)}]^N over the given rectangles
/// together with the same check for finite differences up to order 2; also
/// verifies the declared integral zeros.  Returns the worst constant seen.
double verify_adaptedness(const BumpFamily& family, const ProductGrid& grid,
                          const std::vector<DyadicRectangle>& rects, double zero_tol = 1e-10);

/// B(b, f) = sum_R <b, phi_{1,R}> / |R|^{1/2} <f, phi_{2,R}> phi_{3,R}
/// over the given rectangles.
GridFunction paraproduct(const BumpFamily& phi1, const BumpFamily& phi2, const BumpFamily& phi3,
                         const GridFunction& b, const GridFunction& f,
                         const RectCollection& rects);

/// One term of an exhibited generalized-paraproduct representation.
struct ParaTerm {
  double coeff = 0.0;
  double rho = 1.0;  // scale-shift parameter
  int n = 1;         // location-shift parameter
};

/// Bookkeeping value sum n^{|d|} rho^{-1/|d|} |c| of a given representation
/// (never an infimum over representations).
double para_norm_value(const std::vector<ParaTerm>& terms, int total_dimension);

}  // namespace harp
