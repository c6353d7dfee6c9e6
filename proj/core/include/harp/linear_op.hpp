#pragma once

#include <functional>
#include <string>

#include "harp/multiplier.hpp"

namespace harp {

/// Abstract linear map on grid functions with an adjoint, composed from
/// multipliers, pointwise multiplications and projections.
class LinearOp {
public:
  using Fn = std::function<GridFunction(const GridFunction&)>;

  LinearOp() = default;
  LinearOp(GridPtr grid, Fn apply, Fn adjoint, std::string label = "op");

  GridFunction operator()(const GridFunction& f) const;
  GridFunction adjoint(const GridFunction& f) const;
  const ProductGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const std::string& label() const { return label_; }

  static LinearOp identity(GridPtr grid);
  static LinearOp from_multiplier(Multiplier m);
  static LinearOp multiplication(GridFunction b);
  static LinearOp compose(LinearOp outer, LinearOp inner);
  static LinearOp sum(LinearOp a, LinearOp b);
  static LinearOp scaled(cplx a, LinearOp op);

private:
  GridPtr grid_;
  Fn apply_;
  Fn adjoint_;
  std::string label_;
};

/// max over a few random probes of ||A(a f + g) - a A f - A g|| / (||f||+||g||).
double linearity_defect(const LinearOp& op, std::uint64_t seed);

}  // namespace harp
