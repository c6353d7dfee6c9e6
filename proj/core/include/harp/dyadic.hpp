#pragma once

#include <map>
#include <optional>
#include <string>

#include "harp/grid.hpp"

namespace harp {

/// Dyadic cube of one tensor factor: side 2^-scale, integer position in
/// [0, 2^scale)^{d_s}, living on the unit torus of that factor.
struct DyadicCube {
  int factor = 0;
  int scale = 0;
  std::vector<int> position;

  auto operator<=>(const DyadicCube&) const = default;
};

/// Product of one dyadic cube per factor.
struct DyadicRectangle {
  std::vector<DyadicCube> cubes;

  double measure() const;
  int scale(int s) const { return cubes.at(s).scale; }

  auto operator<=>(const DyadicRectangle&) const = default;
};

DyadicRectangle make_rectangle(const ProductGrid& grid, std::vector<int> scales,
                               std::vector<std::vector<int>> positions);
void validate_rectangle(const ProductGrid& grid, const DyadicRectangle& r);

/// Subset of sampling cells of the grid; the exact carrier for shadows,
/// covers and superlevel sets.
class CellSet {
public:
  CellSet() = default;
  explicit CellSet(GridPtr grid, bool full = false);

  const ProductGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  bool contains(std::size_t cell) const { return in_[cell] != 0; }
  void insert(std::size_t cell) { in_[cell] = 1; }
  std::size_t count() const;
  double measure() const { return static_cast<double>(count()) * grid_->cell_measure(); }
  bool includes(const CellSet& other) const;
  bool is_full() const { return count() == in_.size(); }

  CellSet& operator|=(const CellSet& o);

  bool operator==(const CellSet& o) const { return in_ == o.in_; }

private:
  GridPtr grid_;
  std::vector<std::uint8_t> in_;
};

/// Cells positively covered by a rectangle.
CellSet rectangle_cells(GridPtr grid, const DyadicRectangle& r);
/// Cells positively covered by the concentric integer dilate mu*R, wrapped on
/// the torus; a dilate at least as long as the torus covers the full axis.
CellSet dilated_cells(GridPtr grid, const DyadicRectangle& r, long mu);
/// Indicator samples of a cell set.
GridFunction indicator(const CellSet& cells);

/// Finite ordered collection of distinct dyadic rectangles with a cached
/// shadow (the union of its members).
class RectCollection {
public:
  RectCollection() = default;
  explicit RectCollection(GridPtr grid) : grid_(std::move(grid)) {}

  void add(DyadicRectangle r);
  bool contains(const DyadicRectangle& r) const;
  std::size_t size() const { return rects_.size(); }
  bool empty() const { return rects_.empty(); }
  const std::vector<DyadicRectangle>& rectangles() const { return rects_; }
  const GridPtr& grid_ptr() const { return grid_; }

  const CellSet& shadow() const;
  double shadow_measure() const { return shadow().measure(); }

private:
  GridPtr grid_;
  std::vector<DyadicRectangle> rects_;  // sorted, unique
  mutable std::optional<CellSet> shadow_;
};

/// All rectangles with per-factor scales inside [lo_s, hi_s]; deterministic
/// lexicographic order.  Empty ranges give an empty collection.
RectCollection enumerate_rectangles(GridPtr grid, const std::vector<std::pair<int, int>>& bounds);

/// (true, s) iff all members share one fixed cube in coordinate s; smallest
/// such s wins.  A singleton is vacuously one-parameter at s = 0.
std::pair<bool, std::optional<int>> is_t_minus_1_parameter(const RectCollection& c);

/// Largest dyadic dilation factor mu in {1,2,4,...} with mu*R inside V,
/// saturating once the dilate wraps to the full torus.  R must lie in V.
double embeddedness(const DyadicRectangle& r, const CellSet& v);

/// Strong maximal superlevel set {M 1_U > lambda}.  M combines plain
/// averages over dyadic rectangles containing the point with averages over
/// the concentric double 2R; the plain part makes {M > lambda} shrink to U
/// itself as lambda -> 1.
CellSet maximal_superlevel(const CellSet& u, double lambda);

struct JourneReport {
  double threshold = 0.0;       // superlevel lambda that produced the cover
  double shadow_measure = 0.0;
  double cover_measure = 0.0;
  bool measure_bound_missed = false;
  double min_emb = 0.0;
  double max_emb = 0.0;
};

struct JourneCover {
  CellSet cover;
  std::map<DyadicRectangle, double> emb;
  JourneReport report;
};

/// Journe-type cover: V from the superlevel family over the dyadic threshold
/// ladder {1/2, 3/4, 7/8, ...}, the smallest threshold whose cover meets
/// |V| <= (1+eta)|sh(U)|.  If none does, the tightest cover is returned with
/// measure_bound_missed set.
JourneCover journe_cover(const RectCollection& u, double eta);

/// JSON round trip: list of per-rectangle records, one [scale, pos...] per
/// factor.
std::string rect_collection_to_json(const RectCollection& c);
RectCollection rect_collection_from_json(GridPtr grid, const std::string& text);

}  // namespace harp
