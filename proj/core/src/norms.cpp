#include "harp/norms.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <numbers>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>

namespace harp {

namespace {

constexpr std::size_t kExhaustiveCellBudget = 24;
constexpr int kTopPrefixes = 32;

struct EnergyItem {
  double energy = 0.0;
  double measure = 0.0;
  std::vector<std::size_t> cells;
};

struct SupCandidateResult {
  double value2 = 0.0;           // best Sum E / |U|
  std::vector<char> cellmask;    // achieving U
  std::string strategy;
};

// sup over candidate unions of sum of contained-item energies divided by the
// union measure.  cell_measure converts cell counts to measure.
SupCandidateResult greedy_sup(std::size_t total_cells, double cell_measure,
                              const std::vector<EnergyItem>& items) {
  SupCandidateResult best;
  best.strategy = "greedy";
  best.cellmask.assign(total_cells, 0);
  if (items.empty()) return best;

  // density field e(x) = sum_{item covering x} energy/measure
  std::vector<double> density(total_cells, 0.0);
  for (const auto& it : items)
    for (auto c : it.cells) density[c] += it.energy / it.measure;

  // threshold family {e > lambda}: sweep candidate thresholds descending.
  // An item is inside iff its minimum density exceeds lambda.
  std::vector<double> item_min(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    double m = std::numeric_limits<double>::infinity();
    for (auto c : items[i].cells) m = std::min(m, density[c]);
    item_min[i] = m;
  }
  std::vector<std::size_t> item_order(items.size());
  std::iota(item_order.begin(), item_order.end(), 0);
  std::sort(item_order.begin(), item_order.end(),
            [&](std::size_t a, std::size_t b) { return item_min[a] > item_min[b]; });
  std::vector<std::size_t> cell_order(total_cells);
  std::iota(cell_order.begin(), cell_order.end(), 0);
  std::sort(cell_order.begin(), cell_order.end(),
            [&](std::size_t a, std::size_t b) { return density[a] > density[b]; });

  std::size_t ci = 0, ii = 0;
  double acc_energy = 0.0;
  double best_threshold = -1.0;
  while (ci < total_cells && density[cell_order[ci]] > 0.0) {
    const double lambda = density[cell_order[ci]];
    // U = {e >= lambda}: absorb all cells and items at or above it
    while (ci < total_cells && density[cell_order[ci]] >= lambda) ++ci;
    while (ii < items.size() && item_min[item_order[ii]] >= lambda) {
      acc_energy += items[item_order[ii]].energy;
      ++ii;
    }
    const double measure = static_cast<double>(ci) * cell_measure;
    if (measure > 0.0 && acc_energy / measure > best.value2) {
      best.value2 = acc_energy / measure;
      best_threshold = lambda;
    }
  }
  if (best_threshold >= 0.0)
    for (std::size_t c = 0; c < total_cells; ++c)
      if (density[c] >= best_threshold) best.cellmask[c] = 1;

  // prefix unions of the highest-density items
  std::vector<std::size_t> by_density(items.size());
  std::iota(by_density.begin(), by_density.end(), 0);
  std::sort(by_density.begin(), by_density.end(), [&](std::size_t a, std::size_t b) {
    return items[a].energy / items[a].measure > items[b].energy / items[b].measure;
  });
  std::vector<char> mask(total_cells, 0);
  std::size_t covered = 0;
  for (int m = 0; m < std::min<int>(kTopPrefixes, static_cast<int>(items.size())); ++m) {
    for (auto c : items[by_density[m]].cells)
      if (!mask[c]) {
        mask[c] = 1;
        ++covered;
      }
    double acc = 0.0;
    for (const auto& it : items) {
      bool inside = true;
      for (auto c : it.cells)
        if (!mask[c]) {
          inside = false;
          break;
        }
      if (inside) acc += it.energy;
    }
    const double measure = static_cast<double>(covered) * cell_measure;
    if (measure > 0.0 && acc / measure > best.value2) {
      best.value2 = acc / measure;
      best.cellmask = mask;
    }
  }
  return best;
}

// Exact sup over every union of cells.  An optimal open set is a union of
// cells of the coarsest subdivision refined by all the items, so the items'
// cells are first coarsened to the distinct "columns" they generate; the
// budget applies to those columns.
SupCandidateResult exhaustive_sup(std::size_t total_cells, double cell_measure,
                                  const std::vector<EnergyItem>& items) {
  SupCandidateResult best;
  best.strategy = "exhaustive";
  best.cellmask.assign(total_cells, 0);
  if (items.empty()) return best;

  // column signature of a cell: the set of items covering it
  std::vector<std::vector<std::uint32_t>> covering(total_cells);
  for (std::size_t i = 0; i < items.size(); ++i)
    for (auto c : items[i].cells) covering[c].push_back(static_cast<std::uint32_t>(i));
  std::map<std::vector<std::uint32_t>, std::size_t> column_of;
  std::vector<std::size_t> cell_column(total_cells, SIZE_MAX);
  std::vector<std::size_t> column_cells;
  for (std::size_t c = 0; c < total_cells; ++c) {
    if (covering[c].empty()) continue;  // cells no item touches never help
    auto [it, fresh] = column_of.try_emplace(covering[c], column_of.size());
    cell_column[c] = it->second;
    if (fresh) column_cells.push_back(0);
    ++column_cells[it->second];
  }
  const std::size_t ncol = column_of.size();
  if (ncol > kExhaustiveCellBudget)
    throw std::invalid_argument("exhaustive_sup: open-set lattice beyond the cell budget");

  std::vector<std::uint64_t> item_bits(items.size(), 0);
  for (std::size_t i = 0; i < items.size(); ++i)
    for (auto c : items[i].cells) item_bits[i] |= std::uint64_t(1) << cell_column[c];
  std::uint64_t best_mask = 0;
  const std::uint64_t limit = std::uint64_t(1) << ncol;
  for (std::uint64_t u = 1; u < limit; ++u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i)
      if ((item_bits[i] & ~u) == 0) acc += items[i].energy;
    if (acc == 0.0) continue;
    double measure = 0.0;
    for (std::size_t col = 0; col < ncol; ++col)
      if ((u >> col) & 1) measure += static_cast<double>(column_cells[col]) * cell_measure;
    if (acc / measure > best.value2) {
      best.value2 = acc / measure;
      best_mask = u;
    }
  }
  for (std::size_t c = 0; c < total_cells; ++c)
    if (cell_column[c] != SIZE_MAX && ((best_mask >> cell_column[c]) & 1)) best.cellmask[c] = 1;
  return best;
}

// Rectangle coefficient energies sum_sig |<b, w_R^sig>|^2 of the analysis.
// Round-off dust (relative energy below 1e-24) is dropped so sparse symbols
// stay sparse after the synthesize/analyze round trip.
std::map<DyadicRectangle, double> rectangle_energies(const WaveletSystem& sys,
                                                     const GridFunction& b) {
  std::map<DyadicRectangle, double> energy;
  double total = 0.0;
  WaveletCoefficients c = sys.analyze(b);
  c.for_each_entry([&](const DyadicRectangle& r, const Signature&, cplx v) {
    energy[r] += std::norm(v);
    total += std::norm(v);
  });
  for (auto it = energy.begin(); it != energy.end();)
    it = it->second <= 1e-24 * total ? energy.erase(it) : std::next(it);
  return energy;
}

}  // namespace

BmoEstimate product_bmo(const WaveletSystem& sys, const GridFunction& b, BmoStrategy strategy) {
  const GridPtr grid = sys.grid_ptr();
  auto energy = rectangle_energies(sys, b);

  std::vector<EnergyItem> items;
  std::vector<DyadicRectangle> rect_of;
  for (const auto& [r, e] : energy) {
    if (e <= 0.0) continue;
    EnergyItem it;
    it.energy = e;
    it.measure = r.measure();
    CellSet cells = rectangle_cells(grid, r);
    for (std::size_t c = 0; c < grid->size(); ++c)
      if (cells.contains(c)) it.cells.push_back(c);
    items.push_back(std::move(it));
    rect_of.push_back(r);
  }

  SupCandidateResult res = strategy == BmoStrategy::exhaustive
                               ? exhaustive_sup(grid->size(), grid->cell_measure(), items)
                               : greedy_sup(grid->size(), grid->cell_measure(), items);

  BmoEstimate est;
  est.value = std::sqrt(res.value2);
  est.strategy = res.strategy;
  est.achieving_cells = CellSet(grid);
  for (std::size_t c = 0; c < grid->size(); ++c)
    if (res.cellmask[c]) est.achieving_cells.insert(c);
  est.achieving = RectCollection(grid);
  for (std::size_t i = 0; i < items.size(); ++i) {
    bool inside = true;
    for (auto c : items[i].cells)
      if (!res.cellmask[c]) {
        inside = false;
        break;
      }
    if (inside) est.achieving.add(rect_of[i]);
  }
  if (strategy == BmoStrategy::exhaustive) {
    BmoEstimate greedy = product_bmo(sys, b, BmoStrategy::greedy);
    est.oracle_gap = est.value > 0.0 ? greedy.value / est.value : 1.0;
  }
  return est;
}

BmoEstimate bmo_minus_one(const WaveletSystem& sys, const GridFunction& b,
                          BmoStrategy strategy) {
  const GridPtr grid = sys.grid_ptr();
  const int t = grid->factors();
  if (t == 1) {
    BmoEstimate est = product_bmo(sys, b, strategy);
    est.strategy += " (t=1: product_bmo)";
    return est;
  }

  // coefficient energies grouped by (fixed factor, fixed cube, rest rectangle)
  WaveletCoefficients coef = sys.analyze(b);
  BmoEstimate best;
  best.value = -1.0;
  for (int s = 0; s < t; ++s) {
    // rest grid: all factors except s
    std::vector<int> dims, res;
    for (int q = 0; q < t; ++q)
      if (q != s) {
        dims.push_back(grid->factor_dim(q));
        res.push_back(grid->resolution(q));
      }
    auto rest = make_grid(dims, res);

    std::map<DyadicCube, std::map<DyadicRectangle, double>> grouped;
    coef.for_each_entry([&](const DyadicRectangle& r, const Signature&, cplx v) {
      DyadicRectangle rest_rect;
      for (int q = 0; q < t; ++q)
        if (q != s) {
          DyadicCube c = r.cubes[q];
          c.factor = static_cast<int>(rest_rect.cubes.size());
          rest_rect.cubes.push_back(std::move(c));
        }
      grouped[r.cubes[s]][rest_rect] += std::norm(v);
    });

    for (const auto& [cube, rest_energy] : grouped) {
      std::vector<EnergyItem> items;
      std::vector<DyadicRectangle> rect_of;
      for (const auto& [rr, e] : rest_energy) {
        if (e <= 0.0) continue;
        EnergyItem it;
        it.energy = e;
        it.measure = rr.measure();
        CellSet cells = rectangle_cells(rest, rr);
        for (std::size_t c = 0; c < rest->size(); ++c)
          if (cells.contains(c)) it.cells.push_back(c);
        items.push_back(std::move(it));
        rect_of.push_back(rr);
      }
      if (items.empty()) continue;
      const double cube_measure =
          std::pow(0.5, cube.scale * static_cast<int>(cube.position.size()));
      // shadow normalization: |sh| = |Q_s| * |union of rest parts|
      SupCandidateResult res_s =
          strategy == BmoStrategy::exhaustive
              ? exhaustive_sup(rest->size(), rest->cell_measure() * cube_measure, items)
              : greedy_sup(rest->size(), rest->cell_measure() * cube_measure, items);
      if (std::sqrt(res_s.value2) > best.value) {
        best.value = std::sqrt(res_s.value2);
        best.strategy = res_s.strategy;
        best.achieving = RectCollection(grid);
        for (std::size_t i = 0; i < items.size(); ++i) {
          bool inside = true;
          for (auto c : items[i].cells)
            if (!res_s.cellmask[c]) {
              inside = false;
              break;
            }
          if (!inside) continue;
          DyadicRectangle full;
          int rq = 0;
          for (int q = 0; q < t; ++q) {
            if (q == s) {
              full.cubes.push_back(cube);
              full.cubes.back().factor = q;
            } else {
              DyadicCube c = rect_of[i].cubes[rq++];
              c.factor = q;
              full.cubes.push_back(std::move(c));
            }
          }
          best.achieving.add(std::move(full));
        }
        best.achieving_cells = best.achieving.shadow();
      }
    }
  }
  if (best.value < 0.0) {
    best.value = 0.0;
    best.achieving = RectCollection(grid);
    best.achieving_cells = CellSet(grid);
    best.strategy = strategy == BmoStrategy::exhaustive ? "exhaustive" : "greedy";
  }
  return best;
}

GridFunction square_function(const WaveletSystem& sys, const GridFunction& f) {
  const GridPtr grid = sys.grid_ptr();
  std::vector<double> acc(grid->size(), 0.0);
  WaveletCoefficients c = sys.analyze(f);
  c.for_each_entry([&](const DyadicRectangle& r, const Signature&, cplx v) {
    const double add = std::norm(v) / r.measure();
    CellSet cells = rectangle_cells(grid, r);
    for (std::size_t i = 0; i < grid->size(); ++i)
      if (cells.contains(i)) acc[i] += add;
  });
  GridFunction out(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) out[i] = std::sqrt(acc[i]);
  return out;
}

GridFunction strong_maximal(const GridFunction& f) {
  const GridPtr grid = f.grid_ptr();
  std::vector<std::pair<int, int>> bounds;
  for (int s = 0; s < grid->factors(); ++s) bounds.emplace_back(0, grid->level(s));
  const RectCollection all = enumerate_rectangles(grid, bounds);
  std::vector<double> m(grid->size(), 0.0);
  for (const auto& r : all.rectangles()) {
    const CellSet cells = dilated_cells(grid, r, 2);
    double mass = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < grid->size(); ++i)
      if (cells.contains(i)) {
        mass += std::abs(f[i]);
        ++count;
      }
    if (count == 0) continue;
    const double avg = mass / static_cast<double>(count);
    for (std::size_t i = 0; i < grid->size(); ++i)
      if (cells.contains(i)) m[i] = std::max(m[i], avg);
  }
  GridFunction out(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) out[i] = m[i];
  return out;
}

namespace {

// Signed smooth-bump maximal function sup_R psi_R(x) |<f, psi_R>| with a
// raised-cosine bump supported on the double of R, L^2 normalized.  The
// cancellation in the pairing is what keeps atoms in L^1; averaging |f|
// instead picks up a logarithmic tail on the torus and breaks the dilation
// consistency of the equivalent H^1 norms.
GridFunction bump_maximal(const GridFunction& f) {
  const GridPtr grid = f.grid_ptr();
  std::vector<std::pair<int, int>> bounds;
  for (int s = 0; s < grid->factors(); ++s) bounds.emplace_back(0, grid->level(s));
  const RectCollection all = enumerate_rectangles(grid, bounds);

  std::vector<double> m(grid->size(), 0.0);
  std::vector<int> idx(grid->axes());
  std::vector<double> bump(grid->size());
  for (const auto& r : all.rectangles()) {
    double norm2 = 0.0;
    for (std::size_t p = 0; p < grid->size(); ++p) {
      grid->unflatten(p, idx);
      double v = 1.0;
      for (int s = 0; s < grid->factors() && v != 0.0; ++s) {
        const double side = std::pow(0.5, r.cubes[s].scale);
        for (int x = 0; x < grid->factor_dim(s); ++x) {
          const int a = grid->axis_offset(s) + x;
          const double center = (r.cubes[s].position[x] + 0.5) * side;
          double dist = std::abs(static_cast<double>(idx[a]) / grid->axis_size(a) - center);
          dist = std::min(dist, 1.0 - dist);  // torus metric
          const double u = dist / side;       // support: |u| < 1, i.e. the double of R
          if (u >= 1.0) {
            v = 0.0;
            break;
          }
          const double c = std::cos(0.5 * std::numbers::pi * u);
          v *= c * c;
        }
      }
      bump[p] = v;
      norm2 += v * v;
    }
    if (norm2 == 0.0) continue;
    const double inv = 1.0 / std::sqrt(norm2 * grid->cell_measure());
    cplx pairing{0.0, 0.0};
    for (std::size_t p = 0; p < grid->size(); ++p) pairing += f[p] * bump[p];
    const double amp = std::abs(pairing) * grid->cell_measure() * inv;
    for (std::size_t p = 0; p < grid->size(); ++p)
      if (bump[p] != 0.0) m[p] = std::max(m[p], amp * bump[p] * inv);
  }
  GridFunction out(grid);
  for (std::size_t p = 0; p < grid->size(); ++p) out[p] = m[p];
  return out;
}

}  // namespace

H1Norms h1_norms(const WaveletSystem& sys, const GridFunction& f) {
  H1Norms out;
  out.maximal = bump_maximal(f).norm_lp(1.0);
  out.square = f.norm_lp(1.0) + square_function(sys, f).norm_lp(1.0);

  const GridPtr grid = sys.grid_ptr();
  const int t = grid->factors();
  std::vector<int> j(t, 0);  // 0 = identity, 1..d_s = riesz component
  double combo = 0.0;
  for (;;) {
    GridFunction g = f;
    for (int s = 0; s < t; ++s)
      if (j[s] > 0) g = apply_multiplier(make_riesz(grid, s, j[s] - 1), g);
    combo += g.norm_lp(1.0);
    int s = t - 1;
    for (; s >= 0; --s) {
      if (++j[s] <= grid->factor_dim(s)) break;
      j[s] = 0;
    }
    if (s < 0) break;
  }
  out.riesz_combo = combo;
  return out;
}

double riesz_norm(const GridFunction& b, const CommutatorNormOptions& opt) {
  const GridPtr grid = b.grid_ptr();
  const int t = grid->factors();
  std::vector<int> j(t, 0);
  double best = 0.0;
  for (;;) {
    std::vector<FactorOp> ops;
    for (int s = 0; s < t; ++s) ops.push_back({s, make_riesz(grid, s, j[s])});
    best = std::max(best, operator_norm(commutator_operator(ops, b), opt.seed, opt.max_iter,
                                        opt.tol)
                              .value);
    int s = t - 1;
    for (; s >= 0; --s) {
      if (++j[s] < grid->factor_dim(s)) break;
      j[s] = 0;
    }
    if (s < 0) break;
  }
  return best;
}

std::vector<std::vector<double>> default_cone_directions(int d) {
  std::vector<std::vector<double>> dirs;
  if (d == 1) {
    dirs.push_back({1.0});
    dirs.push_back({-1.0});
    return dirs;
  }
  for (int i = 0; i < d; ++i)
    for (double sgn : {1.0, -1.0}) {
      std::vector<double> e(d, 0.0);
      e[i] = sgn;
      dirs.push_back(std::move(e));
    }
  // the 2^d normalized diagonals
  for (int mask = 0; mask < (1 << d); ++mask) {
    std::vector<double> v(d);
    for (int i = 0; i < d; ++i) v[i] = ((mask >> i) & 1 ? -1.0 : 1.0) / std::sqrt(double(d));
    dirs.push_back(std::move(v));
  }
  return dirs;
}

double cone_norm(const GridFunction& b, const ConeNormOptions& opt) {
  const GridPtr grid = b.grid_ptr();
  const int t = grid->factors();
  std::vector<std::vector<std::vector<double>>> dirs;
  for (int s = 0; s < t; ++s) dirs.push_back(default_cone_directions(grid->factor_dim(s)));

  std::vector<std::size_t> pick(t, 0);
  double best = 0.0;
  for (;;) {
    std::vector<FactorOp> ops;
    for (int s = 0; s < t; ++s) {
      if (grid->factor_dim(s) == 1) {
        ops.push_back({s, make_halfspace(grid, s, dirs[s][pick[s]])});
      } else {
        ConeSpec spec{s, dirs[s][pick[s]], opt.half_width, opt.kappa};
        ops.push_back({s, make_cone_smooth(grid, spec)});
      }
    }
    best = std::max(best, operator_norm(commutator_operator(ops, b), opt.seed, opt.max_iter,
                                        opt.tol)
                              .value);
    int s = t - 1;
    for (; s >= 0; --s) {
      if (++pick[s] < dirs[s].size()) break;
      pick[s] = 0;
    }
    if (s < 0) break;
  }
  return best;
}

GridFunction carleson_example(const WaveletSystem& sys, int depth) {
  const GridPtr grid = sys.grid_ptr();
  if (grid->factors() != 2 || grid->factor_dim(0) != 1 || grid->factor_dim(1) != 1)
    throw std::invalid_argument("carleson_example: needs t=2, d=(1,1)");
  if (depth < 0 || depth > std::min(grid->level(0), grid->level(1)) - 1)
    throw std::invalid_argument("carleson_example: depth does not fit the grid");

  GridFunction b(grid);
  for (int k = 0; k <= depth; ++k) {
    auto r = make_rectangle(*grid, {k, depth - k}, {{0}, {0}});
    GridFunction w = sys.atom(r, Signature{{0, 0}});
    const double sign = k % 2 ? -1.0 : 1.0;
    b += sign * w;
  }
  const double norm = product_bmo(sys, b, BmoStrategy::greedy).value;
  if (norm <= 0.0) throw std::logic_error("carleson_example: degenerate norm");
  b *= 1.0 / norm;
  return b;
}

GridFunction random_symbol(const WaveletSystem& sys, std::uint64_t seed, int terms,
                           int max_scale) {
  const GridPtr grid = sys.grid_ptr();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto sigs = all_signatures(*grid);
  GridFunction b(grid);
  for (int q = 0; q < terms; ++q) {
    DyadicRectangle r;
    for (int s = 0; s < grid->factors(); ++s) {
      int cap = grid->level(s);
      if (max_scale >= 0) cap = std::min(cap, max_scale + 1);
      const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(cap));
      std::vector<int> pos(grid->factor_dim(s));
      for (auto& p : pos) p = static_cast<int>(rng() % (std::uint64_t(1) << k));
      r.cubes.push_back(DyadicCube{s, k, std::move(pos)});
    }
    const Signature& sig = sigs[rng() % sigs.size()];
    b += cplx{gauss(rng), 0.0} * sys.atom(r, sig);
  }
  const double norm = product_bmo(sys, b, BmoStrategy::greedy).value;
  if (norm <= 0.0) return b;
  b *= 1.0 / norm;
  return b;
}

GridFunction uniform_density_symbol(const WaveletSystem& sys, std::uint64_t seed) {
  const GridPtr grid = sys.grid_ptr();
  std::mt19937_64 rng(seed);
  WaveletCoefficients c = sys.analyze(GridFunction(grid));
  const auto sigs = all_signatures(*grid);
  long combos = static_cast<long>(sigs.size());
  for (int s = 0; s < grid->factors(); ++s) combos *= grid->level(s);
  std::vector<std::pair<int, int>> bounds;
  for (int s = 0; s < grid->factors(); ++s) bounds.emplace_back(0, grid->level(s) - 1);
  const RectCollection all = enumerate_rectangles(grid, bounds);
  for (const auto& r : all.rectangles()) {
    const double amp = std::sqrt(r.measure() / static_cast<double>(combos));
    for (const auto& sig : sigs) c.at(r, sig) = (rng() & 1 ? amp : -amp);
  }
  GridFunction b = sys.synthesize(c);
  const double norm = product_bmo(sys, b, BmoStrategy::greedy).value;
  if (norm > 0.0) b *= 1.0 / norm;
  return b;
}

}  // namespace harp
