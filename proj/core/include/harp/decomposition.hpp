#pragma once

#include <set>

#include "harp/commutator.hpp"

namespace harp {

/// The one-parameter split [T_K, M_b] = T_K B1(b,.) - B2(b,.) + remainder
/// with B1 phi = sum_l (Delta_l b) F_{l-3} phi and B2 its T_K-inside twin.
/// The identity is exact by construction; the content is that the remainder
/// acts like a rapidly decaying wavelet matrix.
struct CommutatorDecomposition {
  LinearOp full;       // [T_K, M_b]
  LinearOp principal;  // T_K o B1(b, .)
  LinearOp b2;         // B2(b, .)
  LinearOp remainder;  // full - principal + b2
};

/// Requires a one-factor grid and the Meyer system (the frequency-support
/// argument behind the split needs band-limited scales).
CommutatorDecomposition commutator_decomposition(const WaveletSystem& sys, const Multiplier& k,
                                                 const GridFunction& b);

struct TudReport {
  double sum_norm = 0.0;
  double symbol_bmo = 0.0;
  double phi_l2 = 0.0;
  double ratio = 0.0;  // sum_norm / (bmo * phi_l2)
};

/// sum over scale vectors l of (Delta F_l b) . T F_{l+k,J} phi: exact-scale
/// projections on the J coordinates, coarser tails elsewhere.  k follows the
/// paper-style orientation (positive = coarser) and must satisfy
/// 3 <= k_s <= 8 off J and |k_s| <= 8 on J.
GridFunction tud_sum(const WaveletSystem& sys, const GridFunction& b, const GridFunction& phi,
                     const std::set<int>& j_set, const std::vector<int>& kvec,
                     const Multiplier& t_op, TudReport* report = nullptr);

/// Separation predicate: every wavelet rectangle pair (R' of b, R of phi)
/// with R' below R in the J-order has A R disjoint from R'.
bool tud_separated(const WaveletSystem& sys, const GridFunction& b, const GridFunction& phi,
                   const std::set<int>& j_set, long a);

}  // namespace harp
