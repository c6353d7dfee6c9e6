#pragma once

#include <string>

#include "harp/fft.hpp"
#include "harp/grid.hpp"

namespace harp {

/// Frequency cone in one tensor factor, specified by a unit direction and a
/// cube aperture of given half-width in the d-1 orthogonal coordinates.
/// kappa controls the smoothed dilate (1+kappa)C used by smooth cone symbols.
struct ConeSpec {
  int factor = 0;
  std::vector<double> direction;  // unit vector in R^{d_s}
  double half_width = 1.0;
  double kappa = 0.0;

  void validate(const ProductGrid& grid) const;
};

/// Orthonormal coordinates adapted to a cone: t along the direction, u the
/// d-1 perpendicular coordinates.  Basis is a deterministic Gram-Schmidt of
/// the standard frame, so cone membership is reproducible.
class ConeFrame {
public:
  ConeFrame(const ConeSpec& spec, const ProductGrid& grid);

  /// t = xi . direction and rho = sup_i |u_i| / half_width.
  void coords(std::span<const double> xi, double& t, double& rho) const;
  /// xi in lambda*C, i.e. t > 0 and rho <= lambda * t.
  bool contains(std::span<const double> xi, double lambda = 1.0) const;
  int dim() const { return dim_; }

private:
  int dim_;
  double half_width_;
  std::vector<double> dir_;
  std::vector<std::vector<double>> perp_;
};

/// Fourier symbol on the full product lattice.  Factor-local operators are
/// stored tensored with 1 on the other factors.
class Multiplier {
public:
  Multiplier() = default;
  Multiplier(GridPtr grid, std::vector<cplx> symbol, std::string kind);

  const ProductGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const std::vector<cplx>& symbol() const { return symbol_; }
  std::vector<cplx>& symbol() { return symbol_; }
  const std::string& kind() const { return kind_; }
  double max_abs() const { return max_abs_; }

  /// Recompute the recorded bound after external edits to the symbol.
  void refresh_bound();

private:
  GridPtr grid_;
  std::vector<cplx> symbol_;
  std::string kind_;
  double max_abs_ = 0.0;
};

/// result = inverse_fourier(symbol . forward_fourier(f)); input physical.
GridFunction apply_multiplier(const Multiplier& m, const GridFunction& f);

Multiplier make_identity(GridPtr grid);
/// j-th Riesz transform acting on factor s; symbol -i xi_j / |xi|, 0 at xi=0.
Multiplier make_riesz(GridPtr grid, int s, int j);
/// Hilbert transform on a one-dimensional factor: -i sign(xi).
Multiplier make_hilbert(GridPtr grid, int s);
/// Sharp projection onto the half space xi.theta > 0 of factor s; value 1/2
/// on the hyperplane xi.theta = 0 so that H_C + H_{-C} = I on the lattice.
Multiplier make_halfspace(GridPtr grid, int s, std::vector<double> theta);
/// Indicator of the cone (kappa ignored).
Multiplier make_cone_sharp(GridPtr grid, const ConeSpec& spec);
/// Smoothstep transition between 1_C and 1_{(1+kappa)C}.
Multiplier make_cone_smooth(GridPtr grid, const ConeSpec& spec);

/// Pointwise product of symbols; all on the same grid.
Multiplier tensor_multiplier(const std::vector<Multiplier>& parts);

/// Conjugated symbol (the L^2 adjoint of the operator).
Multiplier adjoint_multiplier(const Multiplier& m);
/// Reflected symbol xi -> -xi (the transpose under the bilinear pairing).
Multiplier transpose_multiplier(const Multiplier& m);

/// Diagnostic file: JSON {factor_dims, resolution, kind_tag, symbol} with the
/// symbol as a flat re,im-interleaved array in FFT bin order.
void save_multiplier(const Multiplier& m, const std::string& path);

/// Fills per-axis signed frequencies of factor s at flat lattice index.
void factor_frequencies(const ProductGrid& grid, int s, std::span<const int> idx,
                        std::span<double> xi);

}  // namespace harp
