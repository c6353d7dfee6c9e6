#include "harp/fft.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace harp {
namespace detail {

namespace {

// Twiddle tables per transform length, shared across calls.  Guarded insert,
// lock-free reads are fine because entries are never mutated once published.
const std::vector<cplx>& twiddles(int n) {
  static std::mutex mu;
  static std::unordered_map<int, std::vector<cplx>> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> w(n / 2);
  for (int k = 0; k < n / 2; ++k) {
    const double ang = -2.0 * std::numbers::pi * k / n;
    w[k] = cplx{std::cos(ang), std::sin(ang)};
  }
  return cache.emplace(n, std::move(w)).first->second;
}

}  // namespace

void fft_line(cplx* data, int n, std::size_t stride, int sign) {
  if (n == 1) return;
  // bit reversal permutation
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i * stride], data[j * stride]);
  }
  const auto& w = twiddles(n);
  for (int len = 2; len <= n; len <<= 1) {
    const int step = n / len;
    for (int i = 0; i < n; i += len) {
      for (int k = 0; k < len / 2; ++k) {
        cplx tw = w[k * step];
        if (sign > 0) tw = std::conj(tw);
        cplx* a = data + (i + k) * stride;
        cplx* b = data + (i + k + len / 2) * stride;
        const cplx u = *a;
        const cplx v = *b * tw;
        *a = u + v;
        *b = u - v;
      }
    }
  }
}

void fft_axis(std::vector<cplx>& data, const ProductGrid& grid, int axis, int sign) {
  const int n = grid.axis_size(axis);
  const std::size_t stride = grid.axis_stride(axis);
  const std::size_t block = stride * static_cast<std::size_t>(n);
  for (std::size_t base = 0; base < data.size(); base += block)
    for (std::size_t off = 0; off < stride; ++off)
      fft_line(data.data() + base + off, n, stride, sign);
}

}  // namespace detail

GridFunction fourier_pair(const GridFunction& f, FftDirection dir) {
  const bool fwd = dir == FftDirection::forward;
  if (fwd && f.space() != Space::physical)
    throw std::invalid_argument("fourier_pair: forward expects physical-space input");
  if (!fwd && f.space() != Space::frequency)
    throw std::invalid_argument("fourier_pair: inverse expects frequency-space input");

  GridFunction out(f.grid_ptr(), f.samples(), fwd ? Space::frequency : Space::physical);
  const int sign = fwd ? -1 : +1;
  for (int a = 0; a < f.grid().axes(); ++a) detail::fft_axis(out.samples(), f.grid(), a, sign);
  const double scale = 1.0 / std::sqrt(static_cast<double>(f.size()));
  for (auto& v : out.samples()) v *= scale;
  return out;
}

GridFunction forward_fourier(const GridFunction& f) { return fourier_pair(f, FftDirection::forward); }
GridFunction inverse_fourier(const GridFunction& f) { return fourier_pair(f, FftDirection::inverse); }

}  // namespace harp
