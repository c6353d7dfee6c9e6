#include "harp/paraproduct.hpp"

#include <cmath>
#include <numbers>

namespace harp {

BumpFamily wavelet_bump_family(const WaveletSystem& sys, Signature sig) {
  BumpFamily fam;
  fam.generator = [&sys, sig](const DyadicRectangle& r) { return sys.atom(r, sig); };
  for (int s = 0; s < sys.grid().factors(); ++s) fam.zero_coords.insert(s);
  return fam;
}

BumpFamily smooth_bump_family(GridPtr grid, std::set<int> zero_coords) {
  BumpFamily fam;
  fam.zero_coords = zero_coords;
  fam.generator = [grid, zero_coords](const DyadicRectangle& r) {
    GridFunction out(grid);
    std::vector<int> idx(grid->axes());
    double norm2 = 0.0;
    for (std::size_t p = 0; p < out.size(); ++p) {
      grid->unflatten(p, idx);
      double v = 1.0;
      for (int s = 0; s < grid->factors() && v != 0.0; ++s) {
        const double side = std::pow(0.5, r.cubes[s].scale);
        for (int x = 0; x < grid->factor_dim(s); ++x) {
          const int a = grid->axis_offset(s) + x;
          const double center = (r.cubes[s].position[x] + 0.5) * side;
          double delta = static_cast<double>(idx[a]) / grid->axis_size(a) - center;
          if (delta > 0.5) delta -= 1.0;
          if (delta < -0.5) delta += 1.0;
          const double u = delta / side;  // support |u| < 1: the double of R
          if (std::abs(u) >= 1.0) {
            v = 0.0;
            break;
          }
          const double c = std::cos(0.5 * std::numbers::pi * u);
          v *= c * c;
          if (x == 0 && zero_coords.count(s)) v *= std::sin(std::numbers::pi * u);
        }
      }
      out[p] = v;
      norm2 += v * v;
    }
    norm2 /= static_cast<double>(out.size());
    if (norm2 > 0.0) out *= 1.0 / std::sqrt(norm2);
    return out;
  };
  return fam;
}

namespace {

// Dil^2_R of chi(x) = (1+|x|^2)^{-1}: per-factor product of
// |Q_s|^{-1/2} chi((x_s - c_s)/l_s) with the torus metric.
double chi_r2(const ProductGrid& grid, const DyadicRectangle& r, std::span<const int> idx) {
  double v = 1.0;
  for (int s = 0; s < grid.factors(); ++s) {
    const double side = std::pow(0.5, r.cubes[s].scale);
    double q2 = 0.0;
    for (int x = 0; x < grid.factor_dim(s); ++x) {
      const int a = grid.axis_offset(s) + x;
      const double center = (r.cubes[s].position[x] + 0.5) * side;
      double delta = static_cast<double>(idx[a]) / grid.axis_size(a) - center;
      if (delta > 0.5) delta -= 1.0;
      if (delta < -0.5) delta += 1.0;
      q2 += (delta / side) * (delta / side);
    }
    const double measure = std::pow(side, grid.factor_dim(s));
    v *= 1.0 / (std::sqrt(measure) * (1.0 + q2));
  }
  return v;
}

}  // namespace

double verify_adaptedness(const BumpFamily& family, const ProductGrid& grid,
                          const std::vector<DyadicRectangle>& rects, double zero_tol) {
  double worst = 0.0;
  std::vector<int> idx(grid.axes());
  for (const auto& r : rects) {
    const GridFunction phi = family.generator(r);

    // declared integral zeros, factor by factor
    for (int s : family.zero_coords) {
      // slice sums over the factor-s block for every complement index
      const int first = grid.axis_offset(s);
      const int dim = grid.factor_dim(s);
      std::size_t block = 1;
      for (int x = 0; x < dim; ++x) block *= grid.axis_size(first + x);
      std::size_t inner = 1;
      for (int a = first + dim; a < grid.axes(); ++a) inner *= grid.axis_size(a);
      const std::size_t outer_step = inner * block;
      double l1 = 0.0;
      for (std::size_t p = 0; p < phi.size(); ++p) l1 += std::abs(phi[p]);
      for (std::size_t base = 0; base < phi.size(); base += outer_step)
        for (std::size_t off = 0; off < inner; ++off) {
          cplx acc{0.0, 0.0};
          for (std::size_t i = 0; i < block; ++i) acc += phi[base + off + i * inner];
          if (std::abs(acc) > zero_tol * std::max(l1, 1.0))
            throw std::logic_error("verify_adaptedness: declared zero coordinate fails");
        }
    }

    // size bound |phi| <= C [chi_R^{(2)}]^N, N = adaptation_order, plus the
    // same for first and second finite differences scaled by |R|^{-m} per
    // the discrete reading of the derivative conditions
    for (int m = 0; m <= std::min(family.adaptation_order, 2); ++m) {
      for (std::size_t p = 0; p < phi.size(); ++p) {
        grid.unflatten(p, idx);
        double value;
        if (m == 0) {
          value = std::abs(phi[p]);
        } else {
          // largest m-th difference over the axes, scaled by the cube side
          // to invert the |Q|^{-m} (side-length reading) in the bound
          value = 0.0;
          for (int a = 0; a < grid.axes(); ++a) {
            const std::size_t stride = grid.axis_stride(a);
            const int n = grid.axis_size(a);
            const int i = idx[a];
            const double side = std::pow(0.5, r.cubes[grid.axis_factor(a)].scale);
            const std::size_t fwd = p + stride * ((i + 1) % n - i);
            double deriv;
            if (m == 1) {
              deriv = std::abs(phi[fwd] - phi[p]) * n;
            } else {
              const std::size_t bwd = p + stride * ((i + n - 1) % n - i);
              deriv = std::abs(phi[fwd] - 2.0 * phi[p] + phi[bwd]) * double(n) * n;
            }
            value = std::max(value, deriv * std::pow(side, m));
          }
        }
        const double envelope = std::pow(chi_r2(grid, r, idx), family.adaptation_order);
        if (envelope > 0.0) worst = std::max(worst, value / envelope);
      }
    }
  }
  return worst;
}

GridFunction paraproduct(const BumpFamily& phi1, const BumpFamily& phi2, const BumpFamily& phi3,
                         const GridFunction& b, const GridFunction& f,
                         const RectCollection& rects) {
  require_same_grid(b, f);
  GridFunction out(b.grid_ptr());
  for (const auto& r : rects.rectangles()) {
    const GridFunction f1 = phi1.generator(r);
    const GridFunction f2 = phi2.generator(r);
    const GridFunction f3 = phi3.generator(r);
    const cplx c1 = inner(b, f1);
    const cplx c2 = inner(f, f2);
    const cplx w = c1 * c2 / std::sqrt(r.measure());
    if (w == cplx{0.0, 0.0}) continue;
    GridFunction term = f3;
    term *= w;
    out += term;
  }
  return out;
}

double para_norm_value(const std::vector<ParaTerm>& terms, int total_dimension) {
  double acc = 0.0;
  for (const auto& t : terms)
    acc += std::pow(static_cast<double>(t.n), total_dimension) *
           std::pow(t.rho, -1.0 / total_dimension) * std::abs(t.coeff);
  return acc;
}

}  // namespace harp
