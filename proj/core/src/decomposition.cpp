#include "harp/decomposition.hpp"

#include <cmath>

#include "harp/norms.hpp"

namespace harp {

namespace {

// B_phi(b, f) = sum_l (Delta_l b) . (inner_op applied to F-projection of f
// strictly three octaves coarser than l).  Shared by B1 (identity inside)
// and B2 (T_K inside).
GridFunction paraproduct_half(const WaveletSystem& sys, const std::vector<GridFunction>& delta_b,
                              const Multiplier* inside, const GridFunction& f) {
  const GridPtr grid = sys.grid_ptr();
  const int levels = grid->level(0);
  GridFunction acc(grid);
  for (int l = 0; l < levels; ++l) {
    const int coarse_level = std::max(l - 2, 0);  // scales <= l - 3, plus the mean
    GridFunction tail = sys.father_projection(f, {coarse_level}, FatherMode::projection);
    if (inside) tail = apply_multiplier(*inside, tail);
    acc += multiply(delta_b[l], tail);
  }
  return acc;
}

}  // namespace

CommutatorDecomposition commutator_decomposition(const WaveletSystem& sys, const Multiplier& k,
                                                 const GridFunction& b) {
  const GridPtr grid = sys.grid_ptr();
  if (grid->factors() != 1)
    throw std::invalid_argument("commutator_decomposition: one-parameter only");
  if (sys.kind() != WaveletKind::meyer)
    throw std::invalid_argument("commutator_decomposition: requires the Meyer system");
  if (!(b.grid() == *grid)) throw std::invalid_argument("commutator_decomposition: grid mismatch");

  // scale slices of the symbol, shared by both halves
  auto delta_b = std::make_shared<std::vector<GridFunction>>();
  for (int l = 0; l < grid->level(0); ++l)
    delta_b->push_back(sys.father_projection(b, {l}, FatherMode::difference));

  auto sys_ptr = &sys;
  auto kk = std::make_shared<Multiplier>(k);
  auto bb = std::make_shared<GridFunction>(b);

  LinearOp full(
      grid,
      [kk, bb](const GridFunction& f) {
        return apply_multiplier(*kk, multiply(*bb, f)) - multiply(*bb, apply_multiplier(*kk, f));
      },
      [kk, bb](const GridFunction& f) {
        // adjoint of M_b is conjugation; of the multiplier the conj symbol
        Multiplier ka = adjoint_multiplier(*kk);
        GridFunction bc = conj(*bb);
        return multiply(bc, apply_multiplier(ka, f)) - apply_multiplier(ka, multiply(bc, f));
      },
      "[T,M_b]");

  LinearOp b1(
      grid,
      [sys_ptr, delta_b](const GridFunction& f) {
        return paraproduct_half(*sys_ptr, *delta_b, nullptr, f);
      },
      [sys_ptr, delta_b](const GridFunction& f) {
        // adjoint: sum_l F_{l-3} (conj(Delta_l b) . f)
        const GridPtr grid = sys_ptr->grid_ptr();
        GridFunction acc(grid);
        for (int l = 0; l < grid->level(0); ++l) {
          const int coarse_level = std::max(l - 2, 0);
          acc += sys_ptr->father_projection(multiply(conj((*delta_b)[l]), f), {coarse_level},
                                            FatherMode::projection);
        }
        return acc;
      },
      "B1");

  LinearOp b2(
      grid,
      [sys_ptr, delta_b, kk](const GridFunction& f) {
        return paraproduct_half(*sys_ptr, *delta_b, kk.get(), f);
      },
      [sys_ptr, delta_b, kk](const GridFunction& f) {
        const GridPtr grid = sys_ptr->grid_ptr();
        Multiplier ka = adjoint_multiplier(*kk);
        GridFunction acc(grid);
        for (int l = 0; l < grid->level(0); ++l) {
          const int coarse_level = std::max(l - 2, 0);
          acc += apply_multiplier(
              ka, sys_ptr->father_projection(multiply(conj((*delta_b)[l]), f), {coarse_level},
                                             FatherMode::projection));
        }
        return acc;
      },
      "B2");

  CommutatorDecomposition out{
      full, LinearOp::compose(LinearOp::from_multiplier(k), b1), b2,
      LinearOp::identity(grid)};
  out.remainder = LinearOp::sum(
      out.full, LinearOp::sum(LinearOp::scaled(-1.0, out.principal), out.b2));
  return out;
}

GridFunction tud_sum(const WaveletSystem& sys, const GridFunction& b, const GridFunction& phi,
                     const std::set<int>& j_set, const std::vector<int>& kvec,
                     const Multiplier& t_op, TudReport* report) {
  const GridPtr grid = sys.grid_ptr();
  const int t = grid->factors();
  if (sys.kind() != WaveletKind::meyer)
    throw std::invalid_argument("tud_sum: requires the Meyer system");
  if (static_cast<int>(kvec.size()) != t) throw std::invalid_argument("tud_sum: k per factor");
  for (int s = 0; s < t; ++s) {
    if (j_set.count(s)) {
      if (kvec[s] < -8 || kvec[s] > 8)
        throw std::invalid_argument("tud_sum: |k_s| <= 8 required on J");
    } else if (kvec[s] < 3 || kvec[s] > 8) {
      throw std::invalid_argument("tud_sum: 3 <= k_s <= 8 required off J");
    }
  }

  WaveletCoefficients phi_coef = sys.analyze(phi);
  GridFunction acc(grid);
  std::vector<int> l(t, 0);
  for (;;) {
    // Delta F_l b
    GridFunction delta = sys.father_projection(b, l, FatherMode::difference);
    if (delta.norm_l2() > 0.0) {
      // F_{l+k,J} phi: exact scale l_s - k_s on J, scales <= l_s - k_s off J
      WaveletCoefficients part = phi_coef;
      bool feasible = true;
      for (int s = 0; s < t && feasible; ++s)
        if (j_set.count(s) && (l[s] - kvec[s] < 0 || l[s] - kvec[s] >= grid->level(s)))
          feasible = false;
      if (feasible) {
        part.filter([&](const std::vector<FactorLayout::Info>& infos) {
          for (int s = 0; s < t; ++s) {
            const int target = l[s] - kvec[s];
            if (j_set.count(s)) {
              if (infos[s].mean || infos[s].scale != target) return false;
            } else {
              if (!infos[s].mean && infos[s].scale > target) return false;
            }
          }
          return true;
        });
        GridFunction tail = sys.synthesize(part);
        acc += multiply(delta, apply_multiplier(t_op, tail));
      }
    }
    int s = t - 1;
    for (; s >= 0; --s) {
      if (++l[s] < grid->level(s)) break;
      l[s] = 0;
    }
    if (s < 0) break;
  }

  if (report) {
    report->sum_norm = acc.norm_l2();
    report->symbol_bmo = product_bmo(sys, b).value;
    report->phi_l2 = phi.norm_l2();
    const double denom = report->symbol_bmo * report->phi_l2;
    report->ratio = denom > 0.0 ? report->sum_norm / denom : 0.0;
  }
  return acc;
}

bool tud_separated(const WaveletSystem& sys, const GridFunction& b, const GridFunction& phi,
                   const std::set<int>& j_set, long a) {
  const GridPtr grid = sys.grid_ptr();
  std::vector<std::pair<DyadicRectangle, double>> b_rects, phi_rects;
  sys.analyze(b).for_each_entry([&](const DyadicRectangle& r, const Signature&, cplx v) {
    if (std::norm(v) > 1e-24) b_rects.emplace_back(r, std::norm(v));
  });
  sys.analyze(phi).for_each_entry([&](const DyadicRectangle& r, const Signature&, cplx v) {
    if (std::norm(v) > 1e-24) phi_rects.emplace_back(r, std::norm(v));
  });
  for (const auto& [rp, ep] : phi_rects)
    for (const auto& [rb, eb] : b_rects) {
      // R' (symbol) below R (phi) in the J order: equal scale on J, finer off
      bool below = true;
      for (int s = 0; s < grid->factors() && below; ++s) {
        if (j_set.count(s))
          below = rb.cubes[s].scale == rp.cubes[s].scale;
        else
          below = rb.cubes[s].scale >= rp.cubes[s].scale;
      }
      if (!below) continue;
      const CellSet dil = dilated_cells(grid, rp, a);
      bool disjoint = true;
      const CellSet rbcells = rectangle_cells(grid, rb);
      for (std::size_t c = 0; c < grid->size() && disjoint; ++c)
        if (dil.contains(c) && rbcells.contains(c)) disjoint = false;
      if (!disjoint) return false;
    }
  return true;
}

}  // namespace harp
