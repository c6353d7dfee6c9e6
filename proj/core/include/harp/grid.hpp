#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace harp {

using cplx = std::complex<double>;

/// Sampling lattice for the product torus T^{d_1} x ... x T^{d_t}.
///
/// Each tensor factor s is a d_s-dimensional unit torus sampled with N_s
/// points per axis, N_s = 2^{L_s}.  All axes of one factor share the same
/// resolution.  Axes are flattened row-major, factor 0 first, so a grid with
/// factor_dims (2,1) and resolutions (16,8) is a 16x16x8 array.
class ProductGrid {
public:
  static constexpr std::size_t kDefaultSampleBudget = std::size_t(1) << 26;

  ProductGrid(std::vector<int> factor_dims, std::vector<int> resolution,
              std::size_t sample_budget = kDefaultSampleBudget);

  int factors() const { return static_cast<int>(factor_dims_.size()); }
  int factor_dim(int s) const { return factor_dims_.at(s); }
  int resolution(int s) const { return resolution_.at(s); }
  int level(int s) const { return levels_.at(s); }

  int axes() const { return static_cast<int>(axis_size_.size()); }
  int axis_size(int a) const { return axis_size_.at(a); }
  int axis_factor(int a) const { return axis_factor_.at(a); }
  /// First flattened axis belonging to factor s.
  int axis_offset(int s) const { return axis_offset_.at(s); }
  std::size_t axis_stride(int a) const { return stride_.at(a); }

  std::size_t size() const { return total_; }
  /// Lebesgue measure of one sampling cell.
  double cell_measure() const { return 1.0 / static_cast<double>(total_); }

  std::size_t flat_index(std::span<const int> idx) const;
  void unflatten(std::size_t flat, std::span<int> idx) const;

  /// Signed integer frequency of FFT bin i on axis a, in [-N/2, N/2).
  int frequency(int a, int i) const {
    const int n = axis_size_[a];
    return i < n / 2 ? i : i - n;
  }
  /// FFT bin of signed frequency m on axis a.
  int bin(int a, int m) const {
    const int n = axis_size_[a];
    return m >= 0 ? m : m + n;
  }

  bool operator==(const ProductGrid& o) const {
    return factor_dims_ == o.factor_dims_ && resolution_ == o.resolution_;
  }

private:
  std::vector<int> factor_dims_;
  std::vector<int> resolution_;
  std::vector<int> levels_;
  std::vector<int> axis_size_;
  std::vector<int> axis_factor_;
  std::vector<int> axis_offset_;
  std::vector<std::size_t> stride_;
  std::size_t total_ = 0;
};

using GridPtr = std::shared_ptr<const ProductGrid>;

GridPtr make_grid(std::vector<int> factor_dims, std::vector<int> resolution,
                  std::size_t sample_budget = ProductGrid::kDefaultSampleBudget);

enum class Space { physical, frequency };

/// Complex samples on a ProductGrid, tagged physical or frequency.
class GridFunction {
public:
  GridFunction() = default;
  GridFunction(GridPtr grid, Space space = Space::physical);
  GridFunction(GridPtr grid, std::vector<cplx> samples, Space space);

  const ProductGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  Space space() const { return space_; }
  std::size_t size() const { return samples_.size(); }

  cplx& operator[](std::size_t i) { return samples_[i]; }
  const cplx& operator[](std::size_t i) const { return samples_[i]; }
  std::vector<cplx>& samples() { return samples_; }
  const std::vector<cplx>& samples() const { return samples_; }

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(cplx a);

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(cplx a, GridFunction f) { return f *= a; }

  /// L^p norm with respect to normalized Lebesgue measure on the torus.
  double norm_lp(double p) const;
  double norm_l2() const;
  double norm_sup() const;
  cplx mean() const;

private:
  GridPtr grid_;
  std::vector<cplx> samples_;
  Space space_ = Space::physical;
};

/// <u,v> = integral of u * conj(v), normalized measure.
cplx inner(const GridFunction& u, const GridFunction& v);
/// Bilinear pairing integral of u * v (no conjugation); the pairing used by
/// the commutator duality identities.
cplx dot_bilinear(const GridFunction& u, const GridFunction& v);
/// Pointwise product.
GridFunction multiply(const GridFunction& a, const GridFunction& b);
GridFunction conj(const GridFunction& f);

void require_same_grid(const GridFunction& a, const GridFunction& b);

}  // namespace harp
