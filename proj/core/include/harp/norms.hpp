#pragma once

#include <optional>

#include "harp/commutator.hpp"
#include "harp/wavelet.hpp"

namespace harp {

enum class BmoStrategy { exhaustive, greedy };

struct BmoEstimate {
  double value = 0.0;
  RectCollection achieving;  // rectangles contained in the achieving open set
  CellSet achieving_cells;
  std::string strategy;
  std::optional<double> oracle_gap;  // greedy/exhaustive, when both were run
};

/// Chang-Fefferman product BMO estimate: sup over open sets U (unions of
/// cells) of sqrt(sum_{R in U} sum_sig |<b,w>|^2 / |U|), the mean part
/// excluded.  Exhaustive enumerates every cell subset (tiny grids only);
/// greedy scans the threshold family of the coefficient energy density plus
/// prefix unions of the top-energy rectangles.
BmoEstimate product_bmo(const WaveletSystem& sys, const GridFunction& b,
                        BmoStrategy strategy = BmoStrategy::greedy);

/// One-parameter-lost variant: sup over collections fixing one factor's cube,
/// normalized by the shadow measure.  Falls back to product_bmo when t = 1.
BmoEstimate bmo_minus_one(const WaveletSystem& sys, const GridFunction& b,
                          BmoStrategy strategy = BmoStrategy::greedy);

/// Wavelet-form Littlewood-Paley square function
/// [sum_R |<f,w_R>|^2 / |R| 1_R]^{1/2}.
GridFunction square_function(const WaveletSystem& sys, const GridFunction& f);

/// Strong maximal function: sup over dyadic rectangles of the |f| average on
/// the concentric double 2R.
GridFunction strong_maximal(const GridFunction& f);

struct H1Norms {
  double maximal = 0.0;      // ||M f||_1
  double square = 0.0;       // ||f||_1 + ||S f||_1
  double riesz_combo = 0.0;  // sum over 0 <= j_s <= d_s of ||prod R_{s,j_s} f||_1
};

H1Norms h1_norms(const WaveletSystem& sys, const GridFunction& f);

struct CommutatorNormOptions {
  std::uint64_t seed = 1;
  int max_iter = 200;
  double tol = 1e-6;
};

/// sup over j in prod [1,d_s] of the L2 commutator operator norm.
double riesz_norm(const GridFunction& b, const CommutatorNormOptions& opt = {});

struct ConeNormOptions {
  double half_width = 1.0;
  double kappa = 0.25;
  std::uint64_t seed = 1;
  int max_iter = 200;
  double tol = 1e-6;
};

/// max over the configured direction set (axis directions and diagonals) of
/// the nested cone-transform commutator norm.  One-dimensional factors use
/// the positive/negative frequency projections.
double cone_norm(const GridFunction& b, const ConeNormOptions& opt = {});

/// Per-factor unit direction family: +-e_i and the normalized diagonals.
std::vector<std::vector<double>> default_cone_directions(int d);

/// Two-parameter anti-chain of alternating-sign Haar tensors through the
/// origin corner, scales (k, n-k), product-BMO normalized to one.
GridFunction carleson_example(const WaveletSystem& sys, int depth);

/// Sparse random wavelet symbol: `terms` coefficients at random rectangles
/// and signatures, synthesized and normalized to product_bmo(greedy) == 1.
GridFunction random_symbol(const WaveletSystem& sys, std::uint64_t seed, int terms,
                           int max_scale = -1);

/// Random-sign symbol with |<b,w_R>|^2 proportional to |R|: every open set
/// carries comparable coefficient density, so the normalized symbol achieves
/// its BMO on a shadow of macroscopic measure (the regime of the lower-bound
/// constructions).  Normalized to product_bmo(greedy) == 1.
GridFunction uniform_density_symbol(const WaveletSystem& sys, std::uint64_t seed);

}  // namespace harp
