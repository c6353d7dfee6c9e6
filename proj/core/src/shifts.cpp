#include "harp/shifts.hpp"

#include <cmath>

namespace harp {

GridFunction shift(const WaveletSystem& sys, const ShiftSpec& spec, const GridFunction& f) {
  WaveletCoefficients src = sys.analyze(f);
  WaveletCoefficients dst = sys.analyze(GridFunction(f.grid_ptr()));
  // carry the mean part through unchanged
  {
    WaveletCoefficients means = src;
    means.keep_mean_only();
    dst.data() = means.data();
  }
  const double amp = spec.kind == ShiftSpec::Kind::scale ? std::sqrt(spec.rho) : 1.0;
  src.for_each_entry([&](const DyadicRectangle& r, const Signature& sig, cplx v) {
    if (spec.kind == ShiftSpec::Kind::signature) {
      dst.at(r, spec.sig_map(sig, r)) += v;
      return;
    }
    const auto target = spec.rect_map(r);
    if (!target) return;  // image leaves the finite grid
    dst.at(*target, sig) += amp * v;
  });
  return sys.synthesize(dst);
}

ShiftSpec identity_signature_shift() {
  ShiftSpec spec;
  spec.kind = ShiftSpec::Kind::signature;
  spec.sig_map = [](const Signature& s, const DyadicRectangle&) { return s; };
  return spec;
}

ShiftSpec rotate_signature_shift(const ProductGrid& grid) {
  ShiftSpec spec;
  spec.kind = ShiftSpec::Kind::signature;
  std::vector<int> counts;
  for (int s = 0; s < grid.factors(); ++s) counts.push_back((1 << grid.factor_dim(s)) - 1);
  spec.sig_map = [counts](const Signature& sig, const DyadicRectangle&) {
    Signature out = sig;
    for (std::size_t s = 0; s < out.masks.size(); ++s)
      out.masks[s] = (out.masks[s] + 1) % counts[s];
    return out;
  };
  return spec;
}

ShiftSpec corner_scale_shift(const ProductGrid& grid, std::vector<int> octaves) {
  if (static_cast<int>(octaves.size()) != grid.factors())
    throw std::invalid_argument("corner_scale_shift: one octave count per factor");
  ShiftSpec spec;
  spec.kind = ShiftSpec::Kind::scale;
  spec.rho = 1.0;
  for (int s = 0; s < grid.factors(); ++s) {
    if (octaves[s] < 0) throw std::invalid_argument("corner_scale_shift: negative octave");
    spec.rho *= std::pow(0.5, octaves[s] * grid.factor_dim(s));
  }
  std::vector<int> levels;
  for (int s = 0; s < grid.factors(); ++s) levels.push_back(grid.level(s));
  spec.rect_map = [octaves, levels](const DyadicRectangle& r) -> std::optional<DyadicRectangle> {
    DyadicRectangle out = r;
    for (std::size_t s = 0; s < out.cubes.size(); ++s) {
      auto& c = out.cubes[s];
      c.scale += octaves[s];
      if (c.scale > levels[s] - 1) return std::nullopt;
      for (auto& p : c.position) p <<= octaves[s];  // lower-left corner child
    }
    return out;
  };
  return spec;
}

ShiftSpec translate_location_shift(const ProductGrid& grid, int n) {
  if (n < 1) throw std::invalid_argument("translate_location_shift: n >= 1");
  (void)grid;
  ShiftSpec spec;
  spec.kind = ShiftSpec::Kind::location;
  spec.n = n;
  const int steps = (n - 1) / 2;
  spec.rect_map = [steps](const DyadicRectangle& r) -> std::optional<DyadicRectangle> {
    DyadicRectangle out = r;
    for (auto& c : out.cubes)
      for (auto& p : c.position) p = (p + steps) % (1 << c.scale);
    return out;
  };
  return spec;
}

ShiftNormReport shift_norm_report(const WaveletSystem& sys, const ShiftSpec& spec,
                                  const GridFunction& f) {
  ShiftNormReport rep;
  rep.parameter = spec.kind == ShiftSpec::Kind::scale ? spec.rho : static_cast<double>(spec.n);
  const GridFunction shifted = shift(sys, spec, f);
  const double fl2 = f.norm_l2();
  rep.l2_ratio = fl2 > 0.0 ? shifted.norm_l2() / fl2 : 0.0;
  const double fbmo = product_bmo(sys, f).value;
  const double sbmo = product_bmo(sys, shifted).value;
  rep.bmo_ratio = fbmo > 0.0 ? sbmo / fbmo : 0.0;
  return rep;
}

}  // namespace harp
