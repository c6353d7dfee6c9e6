#include "harp/commutator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <set>

namespace harp {

namespace {

void validate_ops(const std::vector<FactorOp>& ops, const ProductGrid& grid) {
  if (ops.empty()) throw std::invalid_argument("nested_commutator: no operators");
  std::set<int> seen;
  for (const auto& fo : ops) {
    if (fo.factor < 0 || fo.factor >= grid.factors())
      throw std::invalid_argument("nested_commutator: factor index out of range");
    if (!seen.insert(fo.factor).second)
      throw std::invalid_argument("nested_commutator: factor collision");
    if (!(fo.op.grid() == grid)) throw std::invalid_argument("nested_commutator: grid mismatch");
  }
}

enum class Side { direct, adjoint, transpose };

// Product of the symbols of ops selected by the subset mask.
Multiplier subset_product(const std::vector<FactorOp>& ops, unsigned mask, GridPtr grid,
                          Side side) {
  std::vector<cplx> sym(grid->size(), cplx{1.0, 0.0});
  Multiplier acc(grid, std::move(sym), "subset");
  std::vector<Multiplier> parts{acc};
  for (std::size_t i = 0; i < ops.size(); ++i)
    if (mask & (1u << i)) {
      if (side == Side::adjoint)
        parts.push_back(adjoint_multiplier(ops[i].op));
      else if (side == Side::transpose)
        parts.push_back(transpose_multiplier(ops[i].op));
      else
        parts.push_back(ops[i].op);
    }
  return tensor_multiplier(parts);
}

}  // namespace

GridFunction nested_commutator(const std::vector<FactorOp>& ops, const GridFunction& b,
                               const GridFunction& f) {
  validate_ops(ops, f.grid());
  require_same_grid(b, f);
  const unsigned t = static_cast<unsigned>(ops.size());
  GridFunction acc(f.grid_ptr());
  for (unsigned mask = 0; mask < (1u << t); ++mask) {
    const Multiplier left = subset_product(ops, mask, f.grid_ptr(), Side::direct);
    const Multiplier right = subset_product(ops, ~mask, f.grid_ptr(), Side::direct);
    GridFunction term = apply_multiplier(left, multiply(b, apply_multiplier(right, f)));
    const double sign = std::popcount(mask) % 2 ? -1.0 : 1.0;
    acc += sign * term;
  }
  return acc;
}

GridFunction bilinear_dual(const std::vector<FactorOp>& ops, const GridFunction& f,
                           const GridFunction& g) {
  validate_ops(ops, f.grid());
  require_same_grid(f, g);
  // <T_S(b . T_{S^c} f), g> = <b, T_{S^c} f . T_S^t g> under the bilinear pairing
  const unsigned t = static_cast<unsigned>(ops.size());
  GridFunction acc(f.grid_ptr());
  for (unsigned mask = 0; mask < (1u << t); ++mask) {
    const Multiplier left = subset_product(ops, mask, f.grid_ptr(), Side::transpose);
    const Multiplier right = subset_product(ops, ~mask, f.grid_ptr(), Side::direct);
    GridFunction term = multiply(apply_multiplier(right, f), apply_multiplier(left, g));
    const double sign = std::popcount(mask) % 2 ? -1.0 : 1.0;
    acc += sign * term;
  }
  return acc;
}

LinearOp commutator_operator(const std::vector<FactorOp>& ops, const GridFunction& b) {
  validate_ops(ops, b.grid());
  auto grid = b.grid_ptr();
  GridFunction bc = conj(b);
  std::vector<FactorOp> adj_ops;
  for (const auto& fo : ops) adj_ops.push_back({fo.factor, adjoint_multiplier(fo.op)});
  const double sign = ops.size() % 2 ? -1.0 : 1.0;
  return LinearOp(
      grid, [ops, b](const GridFunction& f) { return nested_commutator(ops, b, f); },
      [adj_ops = std::move(adj_ops), bc = std::move(bc), sign](const GridFunction& f) {
        GridFunction out = nested_commutator(adj_ops, bc, f);
        return sign * out;
      },
      "commutator");
}

NormEstimate operator_norm(const LinearOp& op, std::uint64_t seed, int max_iter, double tol) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  GridFunction v(op.grid_ptr());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = cplx{gauss(rng), gauss(rng)};
  double nv = v.norm_l2();
  if (nv == 0.0) throw std::logic_error("operator_norm: degenerate start");
  v *= 1.0 / nv;

  NormEstimate est;
  est.seed = seed;
  double rho_prev = -1.0;
  for (int it = 1; it <= max_iter; ++it) {
    GridFunction w = op(v);
    const double rho = w.norm_l2() * w.norm_l2();
    est.iterations = it;
    est.value = std::sqrt(rho);
    est.residual = rho_prev < 0.0 ? rho : std::abs(rho - rho_prev);
    if (rho == 0.0) {  // annihilated start vector: the estimate is a lower bound
      est.converged = true;
      break;
    }
    if (rho_prev >= 0.0 && est.residual <= tol * rho) {
      est.converged = true;
      break;
    }
    rho_prev = rho;
    v = op.adjoint(w);
    const double n = v.norm_l2();
    if (n == 0.0) {
      est.converged = true;
      break;
    }
    v *= 1.0 / n;
  }
  return est;
}

DecayRecord commutator_wavelet_matrix(const WaveletSystem& sys, const Multiplier& op,
                                      const DyadicRectangle& symbol_cube,
                                      const Signature& symbol_sig,
                                      const DyadicRectangle& test_cube,
                                      const Signature& test_sig) {
  const GridFunction symbol = sys.atom(symbol_cube, symbol_sig);
  const GridFunction test = sys.atom(test_cube, test_sig);
  GridFunction out =
      apply_multiplier(op, multiply(symbol, test)) - multiply(symbol, apply_multiplier(op, test));

  DecayRecord rec;
  rec.norm = out.norm_l2();
  rec.size_ratio = symbol_cube.measure() / test_cube.measure();

  // torus gap between the cubes in units of the symbol cube side
  const ProductGrid& g = sys.grid();
  double gap2 = 0.0;
  double side = 1.0;
  for (int s = 0; s < g.factors(); ++s) {
    const auto& a = symbol_cube.cubes[s];
    const auto& b = test_cube.cubes[s];
    side = std::min(side, std::pow(0.5, a.scale));
    for (int x = 0; x < g.factor_dim(s); ++x) {
      const double la = a.position[x] * std::pow(0.5, a.scale);
      const double ra = la + std::pow(0.5, a.scale);
      const double lb = b.position[x] * std::pow(0.5, b.scale);
      const double rb = lb + std::pow(0.5, b.scale);
      double gap = 1.0;
      for (double shift : {-1.0, 0.0, 1.0}) {
        if (std::min(ra, rb + shift) >= std::max(la, lb + shift)) {
          gap = 0.0;
          break;
        }
        gap = std::min(gap, std::max(lb + shift - ra, la - (rb + shift)));
      }
      gap2 += gap * gap;
    }
  }
  rec.distance = std::sqrt(gap2) / side;
  return rec;
}

}  // namespace harp
