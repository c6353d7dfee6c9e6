#include "harp/linear_op.hpp"

#include <random>

namespace harp {

LinearOp::LinearOp(GridPtr grid, Fn apply, Fn adjoint, std::string label)
    : grid_(std::move(grid)), apply_(std::move(apply)), adjoint_(std::move(adjoint)),
      label_(std::move(label)) {}

GridFunction LinearOp::operator()(const GridFunction& f) const {
  if (!(f.grid() == *grid_)) throw std::invalid_argument("LinearOp: grid mismatch");
  return apply_(f);
}

GridFunction LinearOp::adjoint(const GridFunction& f) const {
  if (!(f.grid() == *grid_)) throw std::invalid_argument("LinearOp: grid mismatch");
  return adjoint_(f);
}

LinearOp LinearOp::identity(GridPtr grid) {
  auto id = [](const GridFunction& f) { return f; };
  return LinearOp(std::move(grid), id, id, "identity");
}

LinearOp LinearOp::from_multiplier(Multiplier m) {
  auto grid = m.grid_ptr();
  Multiplier adj = adjoint_multiplier(m);
  std::string label = m.kind();
  return LinearOp(
      grid, [m = std::move(m)](const GridFunction& f) { return apply_multiplier(m, f); },
      [adj = std::move(adj)](const GridFunction& f) { return apply_multiplier(adj, f); },
      std::move(label));
}

LinearOp LinearOp::multiplication(GridFunction b) {
  auto grid = b.grid_ptr();
  GridFunction bc = conj(b);
  return LinearOp(
      grid, [b = std::move(b)](const GridFunction& f) { return multiply(b, f); },
      [bc = std::move(bc)](const GridFunction& f) { return multiply(bc, f); }, "mult");
}

LinearOp LinearOp::compose(LinearOp outer, LinearOp inner) {
  auto grid = outer.grid_ptr();
  std::string label = outer.label() + "." + inner.label();
  return LinearOp(
      grid, [outer, inner](const GridFunction& f) { return outer(inner(f)); },
      [outer, inner](const GridFunction& f) { return inner.adjoint(outer.adjoint(f)); },
      std::move(label));
}

LinearOp LinearOp::sum(LinearOp a, LinearOp b) {
  auto grid = a.grid_ptr();
  return LinearOp(
      grid, [a, b](const GridFunction& f) { return a(f) + b(f); },
      [a, b](const GridFunction& f) { return a.adjoint(f) + b.adjoint(f); },
      a.label() + "+" + b.label());
}

LinearOp LinearOp::scaled(cplx s, LinearOp op) {
  auto grid = op.grid_ptr();
  const cplx sc = std::conj(s);
  return LinearOp(
      grid, [s, op](const GridFunction& f) { return s * op(f); },
      [sc, op](const GridFunction& f) { return sc * op.adjoint(f); }, op.label());
}

double linearity_defect(const LinearOp& op, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto grid = op.grid_ptr();
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    GridFunction f(grid), g(grid);
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = cplx{gauss(rng), gauss(rng)};
      g[i] = cplx{gauss(rng), gauss(rng)};
    }
    const cplx a{gauss(rng), gauss(rng)};
    GridFunction combo = a * f + g;
    GridFunction lhs = op(combo);
    GridFunction rhs = a * op(f) + op(g);
    worst = std::max(worst, (lhs - rhs).norm_l2() / (f.norm_l2() + g.norm_l2()));
  }
  return worst;
}

}  // namespace harp
