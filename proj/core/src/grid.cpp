#include "harp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace harp {

namespace {
bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }
int log2i(int n) {
  int l = 0;
  while ((1 << l) < n) ++l;
  return l;
}
}  // namespace

ProductGrid::ProductGrid(std::vector<int> factor_dims, std::vector<int> resolution,
                         std::size_t sample_budget)
    : factor_dims_(std::move(factor_dims)), resolution_(std::move(resolution)) {
  if (factor_dims_.empty() || factor_dims_.size() != resolution_.size())
    throw std::invalid_argument("ProductGrid: factor_dims/resolution mismatch");
  for (std::size_t s = 0; s < factor_dims_.size(); ++s) {
    if (factor_dims_[s] < 1) throw std::invalid_argument("ProductGrid: factor dimension < 1");
    if (!is_pow2(resolution_[s]) || resolution_[s] < 8)
      throw std::invalid_argument("ProductGrid: resolution must be 2^L with L >= 3");
    levels_.push_back(log2i(resolution_[s]));
  }
  for (std::size_t s = 0; s < factor_dims_.size(); ++s) {
    axis_offset_.push_back(static_cast<int>(axis_size_.size()));
    for (int i = 0; i < factor_dims_[s]; ++i) {
      axis_size_.push_back(resolution_[s]);
      axis_factor_.push_back(static_cast<int>(s));
    }
  }
  total_ = 1;
  for (int n : axis_size_) {
    if (total_ > sample_budget / static_cast<std::size_t>(n))
      throw std::invalid_argument("ProductGrid: sample budget exceeded");
    total_ *= static_cast<std::size_t>(n);
  }
  stride_.assign(axis_size_.size(), 1);
  for (int a = static_cast<int>(axis_size_.size()) - 2; a >= 0; --a)
    stride_[a] = stride_[a + 1] * static_cast<std::size_t>(axis_size_[a + 1]);
}

std::size_t ProductGrid::flat_index(std::span<const int> idx) const {
  std::size_t f = 0;
  for (std::size_t a = 0; a < stride_.size(); ++a) f += stride_[a] * static_cast<std::size_t>(idx[a]);
  return f;
}

void ProductGrid::unflatten(std::size_t flat, std::span<int> idx) const {
  for (std::size_t a = 0; a < stride_.size(); ++a) {
    idx[a] = static_cast<int>(flat / stride_[a]);
    flat %= stride_[a];
  }
}

GridPtr make_grid(std::vector<int> factor_dims, std::vector<int> resolution,
                  std::size_t sample_budget) {
  return std::make_shared<const ProductGrid>(std::move(factor_dims), std::move(resolution),
                                             sample_budget);
}

GridFunction::GridFunction(GridPtr grid, Space space)
    : grid_(std::move(grid)), samples_(grid_->size(), cplx{0.0, 0.0}), space_(space) {}

GridFunction::GridFunction(GridPtr grid, std::vector<cplx> samples, Space space)
    : grid_(std::move(grid)), samples_(std::move(samples)), space_(space) {
  if (samples_.size() != grid_->size())
    throw std::invalid_argument("GridFunction: sample count does not match grid");
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += o.samples_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= o.samples_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(cplx a) {
  for (auto& v : samples_) v *= a;
  return *this;
}

double GridFunction::norm_lp(double p) const {
  double acc = 0.0;
  for (const auto& v : samples_) acc += std::pow(std::abs(v), p);
  return std::pow(acc / static_cast<double>(samples_.size()), 1.0 / p);
}

double GridFunction::norm_l2() const {
  double acc = 0.0;
  for (const auto& v : samples_) acc += std::norm(v);
  return std::sqrt(acc / static_cast<double>(samples_.size()));
}

double GridFunction::norm_sup() const {
  double m = 0.0;
  for (const auto& v : samples_) m = std::max(m, std::abs(v));
  return m;
}

cplx GridFunction::mean() const {
  cplx acc{0.0, 0.0};
  for (const auto& v : samples_) acc += v;
  return acc / static_cast<double>(samples_.size());
}

cplx inner(const GridFunction& u, const GridFunction& v) {
  require_same_grid(u, v);
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * std::conj(v[i]);
  return acc / static_cast<double>(u.size());
}

cplx dot_bilinear(const GridFunction& u, const GridFunction& v) {
  require_same_grid(u, v);
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
  return acc / static_cast<double>(u.size());
}

GridFunction multiply(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  GridFunction out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
  return out;
}

GridFunction conj(const GridFunction& f) {
  GridFunction out = f;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::conj(out[i]);
  return out;
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("grid mismatch");
}

}  // namespace harp
