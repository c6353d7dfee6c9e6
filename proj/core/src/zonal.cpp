#include "harp/zonal.hpp"

#include <cmath>
#include <numbers>

namespace harp {

namespace {

constexpr int kMaxDegree = 4096;

// Composite Simpson on [a,b] with n panels (n even).
template <typename F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Expansion coefficients of sign(t) on S^{d-1} against the normalized
// Gegenbauer family: a_m = <sign, G_m>_w / <G_m, G_m>_w with weight
// sin^{d-2}(phi) dphi, t = cos(phi).  Even-m coefficients vanish by parity.
// d = 2 (square wave) and d = 3 (Legendre) have exact closed forms; other
// dimensions fall back to quadrature.
std::vector<double> sign_zonal_coeffs(int d, int mmax) {
  std::vector<double> a(mmax + 1, 0.0);
  if (d == 2) {
    for (int m = 1; m <= mmax; m += 2)
      a[m] = 4.0 / (std::numbers::pi * m) * ((m / 2) % 2 ? -1.0 : 1.0);
    return a;
  }
  if (d == 3) {
    // a_{2k+1} = (4k+3) I_k with I_k = integral of P_{2k+1} over [0,1]
    double I = 0.5;  // I_0
    a[1] = 3.0 * I;
    for (int k = 1; 2 * k + 1 <= mmax; ++k) {
      I *= -(2.0 * k - 1.0) / (2.0 * (k + 1.0));
      a[2 * k + 1] = (4.0 * k + 3.0) * I;
    }
    return a;
  }
  const int panels = std::max(8192, 32 * mmax);
  std::vector<double> num(mmax + 1, 0.0), den(mmax + 1, 0.0);
  const double h = std::numbers::pi / panels;
  for (int i = 0; i <= panels; ++i) {
    const double phi = i * h;
    double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    w *= h / 3.0 * std::pow(std::sin(phi), d - 2);
    const double t = std::cos(phi);
    const double sgn = t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
    const auto G = gegenbauer_normalized(d, mmax, t);
    for (int m = 0; m <= mmax; ++m) {
      num[m] += w * sgn * G[m];
      den[m] += w * G[m] * G[m];
    }
  }
  for (int m = 1; m <= mmax; m += 2) a[m] = num[m] / den[m];
  return a;
}

}  // namespace

std::vector<double> gegenbauer_normalized(int d, int mmax, double t) {
  std::vector<double> G(mmax + 1);
  G[0] = 1.0;
  if (mmax == 0) return G;
  G[1] = t;
  if (d == 2) {  // Chebyshev
    for (int m = 2; m <= mmax; ++m) G[m] = 2.0 * t * G[m - 1] - G[m - 2];
    return G;
  }
  const double lam = 0.5 * (d - 2);
  // Unnormalized C^lam recurrence alongside its value at t = 1.
  double cm2 = 1.0, cm1 = 2.0 * lam * t;
  double bm2 = 1.0, bm1 = 2.0 * lam;
  G[1] = cm1 / bm1;
  for (int m = 2; m <= mmax; ++m) {
    const double c = (2.0 * t * (m + lam - 1.0) * cm1 - (m + 2.0 * lam - 2.0) * cm2) / m;
    const double b = (2.0 * (m + lam - 1.0) * bm1 - (m + 2.0 * lam - 2.0) * bm2) / m;
    G[m] = c / b;
    cm2 = cm1;
    cm1 = c;
    bm2 = bm1;
    bm1 = b;
  }
  return G;
}

double zonal_eval(const std::vector<double>& coeffs, int d, double t) {
  if (coeffs.empty()) return 0.0;
  const auto G = gegenbauer_normalized(d, static_cast<int>(coeffs.size()) - 1, t);
  double acc = 0.0;
  for (std::size_t m = 0; m < coeffs.size(); ++m) acc += coeffs[m] * G[m];
  return acc;
}

ZonalDesign zonal_cone_symbol(GridPtr grid, const ConeSpec& cone, double eta) {
  cone.validate(*grid);
  const int d = grid->factor_dim(cone.factor);
  if (d < 2)
    throw std::invalid_argument(
        "zonal_cone_symbol: one-dimensional factor; use halfspace/hilbert combinations instead");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("zonal_cone_symbol: eta in (0,1)");

  const double rho = 1.0 - 0.25 * eta;

  // Grow the coefficient list until the remainder beyond it is provably
  // negligible; |G_m| <= 1 on [-1,1] makes sum |a_m| rho^m a sup-norm bound
  // on any dropped tail.
  int mmax = 256;
  std::vector<double> a;
  double beyond = 0.0;
  for (;;) {
    a = sign_zonal_coeffs(d, mmax);
    // geometric-dominated continuation past mmax
    beyond = std::abs(a[mmax - 1]) * std::pow(rho, mmax + 1) * rho / (1.0 - rho * rho);
    if (beyond < eta / 32.0 || mmax >= kMaxDegree) break;
    mmax *= 2;
  }

  // Smallest truncation degree whose dropped tail stays below eta/4.
  int degree;
  double tail = beyond;
  for (degree = mmax; degree >= 1; --degree) {
    const double term = std::abs(a[degree]) * std::pow(rho, degree);
    if (tail + term > eta / 4.0) break;
    tail += term;
  }
  if (degree < 1) degree = 1;

  std::vector<double> coeffs(degree + 1, 0.0);
  for (int m = 1; m <= degree; m += 2) coeffs[m] = a[m] * std::pow(rho, m);

  const int s = cone.factor;
  ConeFrame frame(cone, *grid);
  std::vector<cplx> sym(grid->size());
  std::vector<int> idx(grid->axes());
  std::vector<double> xi(d);
  for (std::size_t p = 0; p < sym.size(); ++p) {
    grid->unflatten(p, idx);
    factor_frequencies(*grid, s, idx, xi);
    double n2 = 0.0;
    for (double v : xi) n2 += v * v;
    if (n2 == 0.0) {
      sym[p] = {0.0, 0.0};
      continue;
    }
    double dot = 0.0;
    for (int i = 0; i < d; ++i) dot += xi[i] * cone.direction[i];
    const double t = dot / std::sqrt(n2);
    sym[p] = {0.5 * (1.0 + zonal_eval(coeffs, d, t)), 0.0};
  }

  ZonalDesign out{Multiplier(std::move(grid), std::move(sym), "zonal"), degree, rho, tail,
                  std::move(coeffs)};
  return out;
}

}  // namespace harp
