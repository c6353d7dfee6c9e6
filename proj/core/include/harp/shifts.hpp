#pragma once

#include "harp/norms.hpp"

namespace harp {

/// Wavelet-side relabeling operator: signature permutation, scale shift
/// sigma(R) inside R with fixed measure ratio rho, or location shift
/// lambda_n(R) inside nR.
struct ShiftSpec {
  enum class Kind { signature, scale, location };
  Kind kind = Kind::signature;

  // signature: a bijection of signatures for each rectangle
  std::function<Signature(const Signature&, const DyadicRectangle&)> sig_map;

  // scale/location: injective rectangle map; rho is |sigma(R)|/|R| for scale
  // shifts, n the location parameter
  std::function<std::optional<DyadicRectangle>(const DyadicRectangle&)> rect_map;
  double rho = 1.0;
  int n = 1;
};

/// Sh f via analyze / relabel / synthesize.  Scale shifts scale coefficients
/// by sqrt(rho); coefficients whose image leaves the grid's scale range are
/// dropped (the finite-torus reading of the injective map).
GridFunction shift(const WaveletSystem& sys, const ShiftSpec& spec, const GridFunction& f);

ShiftSpec identity_signature_shift();
/// Per-factor cyclic signature rotation (a nontrivial bijection).
ShiftSpec rotate_signature_shift(const ProductGrid& grid);
/// sigma: descend `octaves[s]` levels per factor into the child containing
/// the lower-left corner; rho = prod 2^{-octaves_s d_s}.
ShiftSpec corner_scale_shift(const ProductGrid& grid, std::vector<int> octaves);
/// lambda_n: translate positions by floor((n-1)/2) own-side steps per axis
/// (wrapping), which keeps lambda_n(R) inside the concentric nR.
ShiftSpec translate_location_shift(const ProductGrid& grid, int n);

struct ShiftNormReport {
  double l2_ratio = 0.0;
  double bmo_ratio = 0.0;
  double parameter = 0.0;  // rho or n, echoed for sweeps
};

/// Measured ||Sh f||_X / ||f||_X for X in {L^2, greedy product BMO}.
ShiftNormReport shift_norm_report(const WaveletSystem& sys, const ShiftSpec& spec,
                                  const GridFunction& f);

}  // namespace harp
