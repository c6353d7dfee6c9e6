#include "harp/diagnostics.hpp"

#include <cmath>
#include <random>

namespace harp {

namespace {

std::vector<double> random_direction(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  if (d == 1) return {rng() & 1 ? 1.0 : -1.0};
  std::vector<double> v(d);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (auto& x : v) {
      x = gauss(rng);
      n2 += x * x;
    }
  } while (n2 < 1e-12);
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& x : v) x *= inv;
  return v;
}

// Smooth cone transform for d >= 2, frequency projection for d = 1.
Multiplier cone_transform(GridPtr grid, int s, const std::vector<double>& dir, double half_width,
                          double kappa) {
  if (grid->factor_dim(s) == 1) return make_halfspace(grid, s, dir);
  return make_cone_smooth(grid, ConeSpec{s, dir, half_width, kappa});
}

Multiplier cone_projection(GridPtr grid, int s, const std::vector<double>& dir,
                           double half_width) {
  if (grid->factor_dim(s) == 1) return make_halfspace(grid, s, dir);
  return make_cone_sharp(grid, ConeSpec{s, dir, half_width, 0.0});
}

GridFunction apply_chain(const std::vector<Multiplier>& ms, GridFunction f) {
  for (const auto& m : ms) f = apply_multiplier(m, f);
  return f;
}

}  // namespace

LowerBoundReport lower_bound_diagnostics(const WaveletSystem& sys, const GridFunction& b,
                                         const RectCollection& achieving,
                                         const LowerBoundConfig& cfg) {
  if (b.norm_l2() == 0.0) throw std::invalid_argument("lower_bound_diagnostics: zero symbol");
  const GridPtr grid = sys.grid_ptr();
  const int t = grid->factors();

  LowerBoundReport rep;
  rep.gamma_threshold = std::pow(0.25, t);

  const GridFunction beta = sys.collection_projection(b, achieving);

  // Monte-Carlo cone selection: the rotation whose T_D chain keeps the most
  // of beta, mirroring the probabilistic selection of the D cones.
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::vector<double>> best_dirs;
  GridFunction gamma;
  for (int trial = 0; trial < cfg.rotations; ++trial) {
    std::vector<std::vector<double>> dirs;
    std::vector<Multiplier> chain;
    for (int s = 0; s < t; ++s) {
      dirs.push_back(random_direction(grid->factor_dim(s), rng));
      chain.push_back(cone_transform(grid, s, dirs.back(), cfg.d_half_width, cfg.kappa));
    }
    GridFunction candidate = apply_chain(chain, beta);
    const double norm = candidate.norm_l2();
    if (norm > rep.gamma_norm) {
      rep.gamma_norm = norm;
      rep.best_rotation = trial;
      best_dirs = std::move(dirs);
      gamma = std::move(candidate);
    }
  }
  rep.gamma_ok = rep.gamma_norm >= rep.gamma_threshold;

  // halfspace versus smooth-cone difference on beta, L^4
  {
    std::vector<Multiplier> halves, cones;
    for (int s = 0; s < t; ++s) {
      halves.push_back(make_halfspace(grid, s, best_dirs[s]));
      cones.push_back(cone_transform(grid, s, best_dirs[s], cfg.d_half_width, cfg.kappa));
    }
    rep.first_diff_l4 = (apply_chain(halves, beta) - apply_chain(cones, beta)).norm_lp(4.0);
  }

  // halfspace versus sharp outer-cone projection on |gamma|^2, L^2
  {
    GridFunction gamma2 = multiply(gamma, conj(gamma));
    std::vector<Multiplier> halves, projections;
    for (int s = 0; s < t; ++s) {
      halves.push_back(make_halfspace(grid, s, best_dirs[s]));
      projections.push_back(cone_projection(grid, s, best_dirs[s], cfg.c_half_width));
    }
    rep.second_diff_l2 =
        (apply_chain(halves, gamma2) - apply_chain(projections, gamma2)).norm_l2();
  }

  // Journe split of the full rectangle family
  const JourneCover cover = journe_cover(achieving, cfg.delta_j);
  rep.shadow_measure = cover.report.shadow_measure;
  rep.cover_measure = cover.report.cover_measure;
  rep.cover_flag = cover.report.measure_bound_missed;

  std::vector<std::pair<int, int>> bounds;
  for (int s = 0; s < t; ++s) bounds.emplace_back(0, grid->level(s) - 1);
  const RectCollection all = enumerate_rectangles(grid, bounds);
  RectCollection v_rects(grid);
  for (const auto& r : all.rectangles()) {
    if (achieving.contains(r)) continue;
    const CellSet cells = rectangle_cells(grid, r);
    if (cover.cover.includes(cells) && !achieving.shadow().includes(cells)) v_rects.add(r);
  }
  rep.u_count = achieving.size();
  rep.v_count = v_rects.size();
  rep.w_count = all.size() - rep.u_count - rep.v_count;

  // the three commutator pieces against conj(gamma), built on the outer cones
  std::vector<FactorOp> c_ops;
  for (int s = 0; s < t; ++s)
    c_ops.push_back({s, cone_transform(grid, s, best_dirs[s], cfg.c_half_width, cfg.kappa)});
  const GridFunction test = conj(gamma);
  const GridFunction p_v = sys.collection_projection(b, v_rects);
  const GridFunction p_w = b - sys.mean_part(b) - beta - p_v;
  rep.piece_u = nested_commutator(c_ops, beta, test).norm_l2();
  rep.piece_v = nested_commutator(c_ops, p_v, test).norm_l2();
  rep.piece_w = nested_commutator(c_ops, p_w, test).norm_l2();
  return rep;
}

}  // namespace harp
