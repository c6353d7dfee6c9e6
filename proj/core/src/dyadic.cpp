#include "harp/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace harp {

namespace {

// Per-axis cell range of a wrapped interval given in half-cell units.
// start/len are in cells; len == N means the full axis.
struct AxisRange {
  int start = 0;
  int len = 0;
};

// Cells meeting (lo, lo + len2) positively, half-cell units, wrapped mod 2N.
AxisRange cells_of_halfcell_interval(int n_cells, long lo, long len2) {
  const long m = 2L * n_cells;
  if (len2 >= m) return {0, n_cells};
  long lo_cell = lo >= 0 ? lo / 2 : -((-lo + 1) / 2);
  // first cell with positive overlap: cell i covers [2i, 2i+2)
  if (2 * lo_cell + 2 <= lo) ++lo_cell;
  const long hi = lo + len2;
  long hi_cell = (hi + 1) / 2 - 1;  // last cell with 2i < hi
  if (2 * hi_cell >= hi) --hi_cell;
  const long count = hi_cell - lo_cell + 1;
  if (count >= n_cells) return {0, n_cells};
  long s = lo_cell % n_cells;
  if (s < 0) s += n_cells;
  return {static_cast<int>(s), static_cast<int>(count)};
}

// Half-cell geometry of one cube axis: center and half-length.
void cube_axis_halfcells(const ProductGrid& grid, const DyadicCube& c, int axis_in_factor,
                         long& center, long& half) {
  const int l = grid.level(c.factor);
  half = 1L << (l - c.scale);  // 2^{L-k} half-cells
  center = static_cast<long>(c.position[axis_in_factor]) * 2L * half + half;
}

template <typename Fn>
void for_each_cell(const ProductGrid& grid, const std::vector<AxisRange>& ranges, Fn&& fn) {
  const int na = grid.axes();
  std::vector<int> step(na, 0);
  std::vector<int> idx(na, 0);
  for (;;) {
    for (int a = 0; a < na; ++a) idx[a] = (ranges[a].start + step[a]) % grid.axis_size(a);
    fn(grid.flat_index(idx));
    int a = na - 1;
    for (; a >= 0; --a) {
      if (++step[a] < ranges[a].len) break;
      step[a] = 0;
    }
    if (a < 0) break;
  }
}

std::vector<AxisRange> dilated_ranges(const ProductGrid& grid, const DyadicRectangle& r, long mu) {
  std::vector<AxisRange> ranges(grid.axes());
  for (int s = 0; s < grid.factors(); ++s) {
    const DyadicCube& c = r.cubes[s];
    for (int i = 0; i < grid.factor_dim(s); ++i) {
      long center, half;
      cube_axis_halfcells(grid, c, i, center, half);
      ranges[grid.axis_offset(s) + i] =
          cells_of_halfcell_interval(grid.resolution(s), center - mu * half, 2 * mu * half);
    }
  }
  return ranges;
}

}  // namespace

double DyadicRectangle::measure() const {
  double m = 1.0;
  for (const auto& c : cubes) m *= std::pow(0.5, c.scale * static_cast<int>(c.position.size()));
  return m;
}

DyadicRectangle make_rectangle(const ProductGrid& grid, std::vector<int> scales,
                               std::vector<std::vector<int>> positions) {
  DyadicRectangle r;
  for (int s = 0; s < grid.factors(); ++s)
    r.cubes.push_back(DyadicCube{s, scales.at(s), positions.at(s)});
  validate_rectangle(grid, r);
  return r;
}

void validate_rectangle(const ProductGrid& grid, const DyadicRectangle& r) {
  if (static_cast<int>(r.cubes.size()) != grid.factors())
    throw std::invalid_argument("DyadicRectangle: factor count mismatch");
  for (int s = 0; s < grid.factors(); ++s) {
    const auto& c = r.cubes[s];
    if (c.factor != s) throw std::invalid_argument("DyadicRectangle: factors out of order");
    if (c.scale < 0 || c.scale > grid.level(s))
      throw std::invalid_argument("DyadicRectangle: scale out of range");
    if (static_cast<int>(c.position.size()) != grid.factor_dim(s))
      throw std::invalid_argument("DyadicRectangle: position dimension mismatch");
    for (int p : c.position)
      if (p < 0 || p >= (1 << c.scale))
        throw std::invalid_argument("DyadicRectangle: position out of range");
  }
}

CellSet::CellSet(GridPtr grid, bool full)
    : grid_(std::move(grid)), in_(grid_->size(), full ? 1 : 0) {}

std::size_t CellSet::count() const {
  std::size_t n = 0;
  for (auto v : in_) n += v;
  return n;
}

bool CellSet::includes(const CellSet& other) const {
  for (std::size_t i = 0; i < in_.size(); ++i)
    if (other.in_[i] && !in_[i]) return false;
  return true;
}

CellSet& CellSet::operator|=(const CellSet& o) {
  for (std::size_t i = 0; i < in_.size(); ++i) in_[i] |= o.in_[i];
  return *this;
}

CellSet rectangle_cells(GridPtr grid, const DyadicRectangle& r) {
  return dilated_cells(std::move(grid), r, 1);
}

CellSet dilated_cells(GridPtr grid, const DyadicRectangle& r, long mu) {
  validate_rectangle(*grid, r);
  CellSet out(grid);
  auto ranges = dilated_ranges(*grid, r, mu);
  for_each_cell(*grid, ranges, [&](std::size_t cell) { out.insert(cell); });
  return out;
}

GridFunction indicator(const CellSet& cells) {
  GridFunction f(cells.grid_ptr());
  for (std::size_t i = 0; i < f.size(); ++i)
    if (cells.contains(i)) f[i] = 1.0;
  return f;
}

void RectCollection::add(DyadicRectangle r) {
  validate_rectangle(*grid_, r);
  auto it = std::lower_bound(rects_.begin(), rects_.end(), r);
  if (it != rects_.end() && *it == r) return;
  rects_.insert(it, std::move(r));
  shadow_.reset();
}

bool RectCollection::contains(const DyadicRectangle& r) const {
  return std::binary_search(rects_.begin(), rects_.end(), r);
}

const CellSet& RectCollection::shadow() const {
  if (!shadow_) {
    CellSet sh(grid_);
    for (const auto& r : rects_) sh |= rectangle_cells(grid_, r);
    shadow_ = std::move(sh);
  }
  return *shadow_;
}

RectCollection enumerate_rectangles(GridPtr grid, const std::vector<std::pair<int, int>>& bounds) {
  if (static_cast<int>(bounds.size()) != grid->factors())
    throw std::invalid_argument("enumerate_rectangles: bounds per factor required");
  for (int s = 0; s < grid->factors(); ++s)
    if (bounds[s].first < 0 || bounds[s].second > grid->level(s))
      throw std::invalid_argument("enumerate_rectangles: scale bounds out of range");

  RectCollection out(grid);
  // per-factor list of cubes in lexicographic (scale, position) order
  std::vector<std::vector<DyadicCube>> cubes(grid->factors());
  for (int s = 0; s < grid->factors(); ++s) {
    const int d = grid->factor_dim(s);
    for (int k = bounds[s].first; k <= bounds[s].second; ++k) {
      std::vector<int> pos(d, 0);
      for (;;) {
        cubes[s].push_back(DyadicCube{s, k, pos});
        int a = d - 1;
        for (; a >= 0; --a) {
          if (++pos[a] < (1 << k)) break;
          pos[a] = 0;
        }
        if (a < 0) break;
      }
    }
  }
  std::vector<std::size_t> pick(grid->factors(), 0);
  for (const auto& c : cubes)
    if (c.empty()) return out;
  for (;;) {
    DyadicRectangle r;
    for (int s = 0; s < grid->factors(); ++s) r.cubes.push_back(cubes[s][pick[s]]);
    out.add(std::move(r));
    int s = grid->factors() - 1;
    for (; s >= 0; --s) {
      if (++pick[s] < cubes[s].size()) break;
      pick[s] = 0;
    }
    if (s < 0) break;
  }
  return out;
}

std::pair<bool, std::optional<int>> is_t_minus_1_parameter(const RectCollection& c) {
  if (c.empty()) return {true, 0};
  const auto& rects = c.rectangles();
  const int t = static_cast<int>(rects.front().cubes.size());
  for (int s = 0; s < t; ++s) {
    bool fixed = true;
    for (const auto& r : rects)
      if (!(r.cubes[s] == rects.front().cubes[s])) {
        fixed = false;
        break;
      }
    if (fixed) return {true, s};
  }
  return {false, std::nullopt};
}

double embeddedness(const DyadicRectangle& r, const CellSet& v) {
  const GridPtr grid = v.grid_ptr();
  if (!v.includes(rectangle_cells(grid, r)))
    throw std::invalid_argument("embeddedness: rectangle not inside the cover");
  long mu = 1;
  for (;;) {
    const CellSet current = dilated_cells(grid, r, mu);
    if (current.is_full()) break;  // clipping saturates
    const CellSet next = dilated_cells(grid, r, 2 * mu);
    if (!v.includes(next)) break;
    mu *= 2;
  }
  return static_cast<double>(mu);
}

CellSet maximal_superlevel(const CellSet& u, double lambda) {
  const GridPtr grid = u.grid_ptr();
  const int t = grid->factors();
  std::vector<std::pair<int, int>> bounds;
  for (int s = 0; s < t; ++s) bounds.emplace_back(0, grid->level(s));
  const RectCollection all = enumerate_rectangles(grid, bounds);

  std::vector<double> maximal(grid->size(), 0.0);
  for (const auto& r : all.rectangles()) {
    // plain average over R, painted on R
    auto rr = dilated_ranges(*grid, r, 1);
    std::size_t hits = 0, cells = 0;
    for_each_cell(*grid, rr, [&](std::size_t cell) {
      ++cells;
      hits += u.contains(cell) ? 1 : 0;
    });
    const double plain = cells ? static_cast<double>(hits) / cells : 0.0;

    // half-cell exact average over the concentric double 2R
    auto dd = dilated_ranges(*grid, r, 2);
    double mass = 0.0, vol = 0.0;
    // weights: product over axes of per-axis half-cell overlap
    {
      // precompute axis overlap tables
      std::vector<std::vector<double>> w(grid->axes());
      std::vector<long> lo(grid->axes()), len2(grid->axes());
      for (int s = 0; s < t; ++s)
        for (int i = 0; i < grid->factor_dim(s); ++i) {
          long center, half;
          cube_axis_halfcells(*grid, r.cubes[s], i, center, half);
          const int a = grid->axis_offset(s) + i;
          lo[a] = center - 2 * half;
          len2[a] = std::min<long>(4 * half, 2L * grid->axis_size(a));
        }
      for (int a = 0; a < grid->axes(); ++a) {
        w[a].resize(dd[a].len);
        const long m = 2L * grid->axis_size(a);
        for (int jj = 0; jj < dd[a].len; ++jj) {
          const int cell = (dd[a].start + jj) % grid->axis_size(a);
          // unwrapped overlap: try all residues of the cell modulo the torus
          double ov = 0.0;
          for (long shift = -m; shift <= m; shift += m) {
            const long c0 = 2L * cell + shift;
            const long lo_ov = std::max(c0, lo[a]);
            const long hi_ov = std::min(c0 + 2, lo[a] + len2[a]);
            if (hi_ov > lo_ov) ov += 0.5 * static_cast<double>(hi_ov - lo_ov);
          }
          w[a][jj] = ov;
        }
      }
      std::vector<int> step(grid->axes(), 0);
      std::vector<int> idx(grid->axes(), 0);
      for (;;) {
        double weight = 1.0;
        for (int a = 0; a < grid->axes(); ++a) {
          idx[a] = (dd[a].start + step[a]) % grid->axis_size(a);
          weight *= w[a][step[a]];
        }
        const std::size_t cell = grid->flat_index(idx);
        vol += weight;
        if (u.contains(cell)) mass += weight;
        int a = grid->axes() - 1;
        for (; a >= 0; --a) {
          if (++step[a] < dd[a].len) break;
          step[a] = 0;
        }
        if (a < 0) break;
      }
    }
    const double doubled = vol > 0.0 ? mass / vol : 0.0;

    const double score = std::max(plain, doubled);
    if (score <= lambda) continue;
    // paint: plain on R, doubled on 2R
    if (plain > lambda)
      for_each_cell(*grid, rr, [&](std::size_t cell) { maximal[cell] = std::max(maximal[cell], plain); });
    if (doubled > lambda)
      for_each_cell(*grid, dd, [&](std::size_t cell) { maximal[cell] = std::max(maximal[cell], doubled); });
  }

  CellSet out(grid);
  for (std::size_t i = 0; i < grid->size(); ++i)
    if (maximal[i] > lambda) out.insert(i);
  return out;
}

JourneCover journe_cover(const RectCollection& u, double eta) {
  if (eta <= 0.0) throw std::invalid_argument("journe_cover: eta must be positive");
  const CellSet& sh = u.shadow();
  const double sh_measure = sh.measure();
  if (sh_measure <= 0.0) throw std::invalid_argument("journe_cover: empty shadow");

  std::optional<CellSet> chosen;
  double chosen_lambda = 0.0;
  std::optional<CellSet> tightest;
  double tightest_lambda = 0.0;
  for (int i = 0; i < 12; ++i) {
    const double lambda = 1.0 - std::ldexp(1.0, -(i + 1));  // 1/2, 3/4, 7/8, ...
    CellSet v = maximal_superlevel(sh, lambda);
    tightest = v;
    tightest_lambda = lambda;
    if (v.measure() <= (1.0 + eta) * sh_measure) {
      chosen = std::move(v);
      chosen_lambda = lambda;
      break;
    }
  }

  JourneCover out;
  out.report.shadow_measure = sh_measure;
  if (chosen) {
    out.cover = std::move(*chosen);
    out.report.threshold = chosen_lambda;
    out.report.measure_bound_missed = false;
  } else {
    out.cover = std::move(*tightest);
    out.report.threshold = tightest_lambda;
    out.report.measure_bound_missed = true;
  }
  out.report.cover_measure = out.cover.measure();
  out.report.min_emb = std::numeric_limits<double>::infinity();
  out.report.max_emb = 0.0;
  for (const auto& r : u.rectangles()) {
    const double e = embeddedness(r, out.cover);
    out.emb.emplace(r, e);
    out.report.min_emb = std::min(out.report.min_emb, e);
    out.report.max_emb = std::max(out.report.max_emb, e);
  }
  return out;
}

std::string rect_collection_to_json(const RectCollection& c) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : c.rectangles()) {
    nlohmann::json rec = nlohmann::json::array();
    for (const auto& cube : r.cubes) {
      nlohmann::json f = nlohmann::json::array();
      f.push_back(cube.scale);
      for (int p : cube.position) f.push_back(p);
      rec.push_back(std::move(f));
    }
    arr.push_back(std::move(rec));
  }
  return arr.dump();
}

RectCollection rect_collection_from_json(GridPtr grid, const std::string& text) {
  RectCollection out(grid);
  const auto arr = nlohmann::json::parse(text);
  for (const auto& rec : arr) {
    std::vector<int> scales;
    std::vector<std::vector<int>> positions;
    for (const auto& f : rec) {
      scales.push_back(f.at(0).get<int>());
      std::vector<int> pos;
      for (std::size_t i = 1; i < f.size(); ++i) pos.push_back(f.at(i).get<int>());
      positions.push_back(std::move(pos));
    }
    out.add(make_rectangle(*grid, std::move(scales), std::move(positions)));
  }
  return out;
}

}  // namespace harp
