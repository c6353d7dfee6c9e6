#pragma once

#include "harp/linear_op.hpp"
#include "harp/wavelet.hpp"

namespace harp {

/// Convolution operator acting in one tensor factor (tensored with the
/// identity elsewhere); the building block of nested commutators.
struct FactorOp {
  int factor = 0;
  Multiplier op;
};

/// Iterated bracket [..[[M_b, T_1], T_2], .., T_t] f, evaluated through the
/// 2^t signed expansion sum_S (-1)^{|S|} T_S (b . T_{S^c} f).  One operator
/// per factor, factors distinct.
GridFunction nested_commutator(const std::vector<FactorOp>& ops, const GridFunction& b,
                               const GridFunction& f);

/// The bilinear dual form: <C(b,f), g> = <b, Pi(f,g)> under the bilinear
/// pairing integral(u v); transposes replace adjoints on the operator side.
GridFunction bilinear_dual(const std::vector<FactorOp>& ops, const GridFunction& f,
                           const GridFunction& g);

/// C(b, .) as a LinearOp with its exact adjoint.
LinearOp commutator_operator(const std::vector<FactorOp>& ops, const GridFunction& b);

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  double residual = 0.0;  // final Rayleigh gap
  bool converged = false;
};

/// L^2 -> L^2 operator norm by power iteration on A*A from a seeded start.
NormEstimate operator_norm(const LinearOp& op, std::uint64_t seed = 1, int max_iter = 200,
                           double tol = 1e-6);

struct DecayRecord {
  double norm = 0.0;        // ||[T, M_{w_Q}] w_{Q'}||_2
  double size_ratio = 0.0;  // |Q| / |Q'|
  double distance = 0.0;    // torus gap of the cubes over side(Q)
};

/// Commutator of a one-factor multiplier against a wavelet pair; the raw
/// datum behind the scale/distance decay regressions.
DecayRecord commutator_wavelet_matrix(const WaveletSystem& sys, const Multiplier& op,
                                      const DyadicRectangle& symbol_cube, const Signature& symbol_sig,
                                      const DyadicRectangle& test_cube, const Signature& test_sig);

}  // namespace harp
