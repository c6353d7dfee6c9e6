#include "harp/multiplier.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>

#include "harp/profiles.hpp"

namespace harp {

void ConeSpec::validate(const ProductGrid& grid) const {
  if (factor < 0 || factor >= grid.factors())
    throw std::invalid_argument("ConeSpec: factor index out of range");
  const int d = grid.factor_dim(factor);
  if (static_cast<int>(direction.size()) != d)
    throw std::invalid_argument("ConeSpec: direction dimension mismatch");
  double n2 = 0.0;
  for (double v : direction) n2 += v * v;
  if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
    throw std::invalid_argument("ConeSpec: direction must be a unit vector");
  if (half_width <= 0.0) throw std::invalid_argument("ConeSpec: half_width must be positive");
  if (kappa < 0.0) throw std::invalid_argument("ConeSpec: kappa must be nonnegative");
}

ConeFrame::ConeFrame(const ConeSpec& spec, const ProductGrid& grid)
    : dim_(grid.factor_dim(spec.factor)), half_width_(spec.half_width), dir_(spec.direction) {
  spec.validate(grid);
  // Orthogonal complement basis: Gram-Schmidt over standard vectors, taken in
  // order of increasing |e_i . dir| with index as tie break.
  std::vector<int> order(dim_);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(dir_[a]) < std::abs(dir_[b]); });
  for (int oi : order) {
    if (static_cast<int>(perp_.size()) == dim_ - 1) break;
    std::vector<double> v(dim_, 0.0);
    v[oi] = 1.0;
    double along = 0.0;
    for (int i = 0; i < dim_; ++i) along += v[i] * dir_[i];
    for (int i = 0; i < dim_; ++i) v[i] -= along * dir_[i];
    for (const auto& p : perp_) {
      double c = 0.0;
      for (int i = 0; i < dim_; ++i) c += v[i] * p[i];
      for (int i = 0; i < dim_; ++i) v[i] -= c * p[i];
    }
    double n2 = 0.0;
    for (double x : v) n2 += x * x;
    if (n2 < 1e-20) continue;
    const double inv = 1.0 / std::sqrt(n2);
    for (double& x : v) x *= inv;
    perp_.push_back(std::move(v));
  }
}

void ConeFrame::coords(std::span<const double> xi, double& t, double& rho) const {
  t = 0.0;
  for (int i = 0; i < dim_; ++i) t += xi[i] * dir_[i];
  double m = 0.0;
  for (const auto& p : perp_) {
    double u = 0.0;
    for (int i = 0; i < dim_; ++i) u += xi[i] * p[i];
    m = std::max(m, std::abs(u));
  }
  rho = m / half_width_;
}

bool ConeFrame::contains(std::span<const double> xi, double lambda) const {
  double t, rho;
  coords(xi, t, rho);
  return t > 0.0 && rho <= lambda * t;
}

Multiplier::Multiplier(GridPtr grid, std::vector<cplx> symbol, std::string kind)
    : grid_(std::move(grid)), symbol_(std::move(symbol)), kind_(std::move(kind)) {
  if (symbol_.size() != grid_->size())
    throw std::invalid_argument("Multiplier: symbol size does not match grid");
  refresh_bound();
}

void Multiplier::refresh_bound() {
  max_abs_ = 0.0;
  for (const auto& v : symbol_) max_abs_ = std::max(max_abs_, std::abs(v));
  if (!std::isfinite(max_abs_)) throw std::invalid_argument("Multiplier: unbounded symbol");
}

GridFunction apply_multiplier(const Multiplier& m, const GridFunction& f) {
  if (!(m.grid() == f.grid())) throw std::invalid_argument("apply_multiplier: grid mismatch");
  if (f.space() != Space::physical)
    throw std::invalid_argument("apply_multiplier: expects physical-space input");
  GridFunction hat = forward_fourier(f);
  for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= m.symbol()[i];
  return inverse_fourier(hat);
}

void factor_frequencies(const ProductGrid& grid, int s, std::span<const int> idx,
                        std::span<double> xi) {
  const int off = grid.axis_offset(s);
  for (int i = 0; i < grid.factor_dim(s); ++i)
    xi[i] = static_cast<double>(grid.frequency(off + i, idx[off + i]));
}

namespace {

// Builds a factor-local symbol by evaluating fn on the factor-s frequency
// vector at every lattice point.
Multiplier factor_symbol(GridPtr grid, int s,
                         const std::function<cplx(std::span<const double>)>& fn,
                         std::string kind) {
  if (s < 0 || s >= grid->factors())
    throw std::invalid_argument("make_multiplier: factor index out of range");
  const int d = grid->factor_dim(s);
  std::vector<cplx> sym(grid->size());
  std::vector<int> idx(grid->axes());
  std::vector<double> xi(d);
  for (std::size_t p = 0; p < sym.size(); ++p) {
    grid->unflatten(p, idx);
    factor_frequencies(*grid, s, idx, xi);
    sym[p] = fn(xi);
  }
  return Multiplier(std::move(grid), std::move(sym), std::move(kind));
}

}  // namespace

Multiplier make_identity(GridPtr grid) {
  std::vector<cplx> sym(grid->size(), cplx{1.0, 0.0});
  return Multiplier(std::move(grid), std::move(sym), "identity");
}

Multiplier make_riesz(GridPtr grid, int s, int j) {
  if (s < 0 || s >= grid->factors())
    throw std::invalid_argument("make_riesz: factor index out of range");
  if (j < 0 || j >= grid->factor_dim(s))
    throw std::invalid_argument("make_riesz: component index out of range");
  return factor_symbol(
      std::move(grid), s,
      [j](std::span<const double> xi) -> cplx {
        double n2 = 0.0;
        for (double v : xi) n2 += v * v;
        if (n2 == 0.0) return {0.0, 0.0};
        return cplx{0.0, -xi[j] / std::sqrt(n2)};
      },
      "riesz");
}

Multiplier make_hilbert(GridPtr grid, int s) {
  if (grid->factor_dim(s) != 1)
    throw std::invalid_argument("make_hilbert: factor must be one-dimensional");
  return factor_symbol(
      std::move(grid), s,
      [](std::span<const double> xi) -> cplx {
        if (xi[0] == 0.0) return {0.0, 0.0};
        return cplx{0.0, xi[0] > 0.0 ? -1.0 : 1.0};
      },
      "hilbert");
}

Multiplier make_halfspace(GridPtr grid, int s, std::vector<double> theta) {
  if (static_cast<int>(theta.size()) != grid->factor_dim(s))
    throw std::invalid_argument("make_halfspace: direction dimension mismatch");
  double n2 = 0.0;
  for (double v : theta) n2 += v * v;
  if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
    throw std::invalid_argument("make_halfspace: direction must be a unit vector");
  return factor_symbol(
      std::move(grid), s,
      [theta](std::span<const double> xi) -> cplx {
        double dot = 0.0;
        for (std::size_t i = 0; i < theta.size(); ++i) dot += theta[i] * xi[i];
        if (dot > 0.0) return {1.0, 0.0};
        if (dot < 0.0) return {0.0, 0.0};
        return {0.5, 0.0};
      },
      "halfspace");
}

Multiplier make_cone_sharp(GridPtr grid, const ConeSpec& spec) {
  ConeFrame frame(spec, *grid);
  return factor_symbol(
      std::move(grid), spec.factor,
      [frame](std::span<const double> xi) -> cplx {
        return frame.contains(xi) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
      },
      "cone_sharp");
}

Multiplier make_cone_smooth(GridPtr grid, const ConeSpec& spec) {
  if (spec.kappa <= 0.0) return make_cone_sharp(std::move(grid), spec);
  ConeFrame frame(spec, *grid);
  const double kappa = spec.kappa;
  return factor_symbol(
      std::move(grid), spec.factor,
      [frame, kappa](std::span<const double> xi) -> cplx {
        double t, rho;
        frame.coords(xi, t, rho);
        if (t <= 0.0) return {0.0, 0.0};
        const double r = rho / t;  // 0-homogeneous aperture coordinate
        if (r <= 1.0) return {1.0, 0.0};
        if (r >= 1.0 + kappa) return {0.0, 0.0};
        return {quintic_smoothstep((1.0 + kappa - r) / kappa), 0.0};
      },
      "cone_smooth");
}

Multiplier tensor_multiplier(const std::vector<Multiplier>& parts) {
  if (parts.empty()) throw std::invalid_argument("tensor_multiplier: empty list");
  GridPtr grid = parts.front().grid_ptr();
  std::vector<cplx> sym(grid->size(), cplx{1.0, 0.0});
  std::string kind = "tensor(";
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (!(parts[k].grid() == *grid)) throw std::invalid_argument("tensor_multiplier: grid mismatch");
    for (std::size_t i = 0; i < sym.size(); ++i) sym[i] *= parts[k].symbol()[i];
    kind += parts[k].kind();
    if (k + 1 < parts.size()) kind += ",";
  }
  kind += ")";
  return Multiplier(std::move(grid), std::move(sym), std::move(kind));
}

Multiplier adjoint_multiplier(const Multiplier& m) {
  std::vector<cplx> sym(m.symbol().size());
  for (std::size_t i = 0; i < sym.size(); ++i) sym[i] = std::conj(m.symbol()[i]);
  return Multiplier(m.grid_ptr(), std::move(sym), m.kind() + "*");
}

Multiplier transpose_multiplier(const Multiplier& m) {
  const ProductGrid& g = m.grid();
  std::vector<cplx> sym(m.symbol().size());
  std::vector<int> idx(g.axes()), ridx(g.axes());
  for (std::size_t p = 0; p < sym.size(); ++p) {
    g.unflatten(p, idx);
    // bin of -m is (N - i) mod N; the Nyquist bin is its own reflection
    for (int a = 0; a < g.axes(); ++a)
      ridx[a] = idx[a] == 0 ? 0 : g.axis_size(a) - idx[a];
    sym[g.flat_index(ridx)] = m.symbol()[p];
  }
  return Multiplier(m.grid_ptr(), std::move(sym), m.kind() + "^t");
}

void save_multiplier(const Multiplier& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_multiplier: cannot open " + path);
  out << "{\n  \"factor_dims\": [";
  for (int s = 0; s < m.grid().factors(); ++s)
    out << m.grid().factor_dim(s) << (s + 1 < m.grid().factors() ? ", " : "");
  out << "],\n  \"resolution\": [";
  for (int s = 0; s < m.grid().factors(); ++s)
    out << m.grid().resolution(s) << (s + 1 < m.grid().factors() ? ", " : "");
  out << "],\n  \"kind_tag\": \"" << m.kind() << "\",\n  \"symbol\": [";
  out.precision(17);
  for (std::size_t i = 0; i < m.symbol().size(); ++i) {
    out << m.symbol()[i].real() << ", " << m.symbol()[i].imag();
    if (i + 1 < m.symbol().size()) out << ", ";
  }
  out << "]\n}\n";
}

}  // namespace harp
