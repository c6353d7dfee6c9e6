#pragma once

#include "harp/commutator.hpp"
#include "harp/norms.hpp"

namespace harp {

/// Knobs of the lower-bound test-function machine.  The D cones pick the
/// test function, the wider C cones build the commutator.
struct LowerBoundConfig {
  WaveletKind kind = WaveletKind::haar;
  double d_half_width = 1.0;
  double c_half_width = 2.0;
  double kappa = 0.25;
  double delta_j = 0.5;  // Journe cover slack for V
  int rotations = 32;
  std::uint64_t seed = 1;
};

struct LowerBoundReport {
  // cone selection
  double gamma_norm = 0.0;
  double gamma_threshold = 0.0;  // 4^{-t}
  bool gamma_ok = false;
  int best_rotation = -1;
  double first_diff_l4 = 0.0;   // || H_D... beta - gamma ||_4
  double second_diff_l2 = 0.0;  // || (H_C... - P_C...) |gamma|^2 ||_2
  // collection split
  double shadow_measure = 0.0;
  double cover_measure = 0.0;
  bool cover_flag = false;
  std::size_t u_count = 0, v_count = 0, w_count = 0;
  // commutator pieces against conj(gamma), outer cones C
  double piece_u = 0.0;
  double piece_v = 0.0;
  double piece_w = 0.0;
};

/// The bootstrapping diagnostics: beta = P_U b, gamma = T_D1..T_Dt beta over
/// Monte-Carlo cone rotations, the Journe split U/V/W of the rectangles, and
/// the three commutator pieces applied to conj(gamma).  The symbol must be
/// BMO-normalized by the caller; `achieving` is its achieving collection.
LowerBoundReport lower_bound_diagnostics(const WaveletSystem& sys, const GridFunction& b,
                                         const RectCollection& achieving,
                                         const LowerBoundConfig& cfg = {});

}  // namespace harp
