#pragma once

#include <functional>

#include "harp/dyadic.hpp"
#include "harp/grid.hpp"

namespace harp {

enum class WaveletKind { haar, meyer };

/// Meyer detail window (the profile of \hat w at scale 0, even in xi).
/// Built from the quintic smoothstep: rise on [0.4, 0.6], flat on [0.6, 0.8],
/// fall on [0.8, 1.2]; exact square partition across dyadic scales.
double meyer_profile(double xi);
/// Meyer scaling window \hat W: flat 1 on [0, 0.4], fall on [0.4, 0.6].
double meyer_father_window(double xi);

/// Per-factor signature: bit x of masks[s] set means the scaling function is
/// used on axis x of factor s; the all-ones mask is excluded.
struct Signature {
  std::vector<int> masks;

  auto operator<=>(const Signature&) const = default;
};

Signature zero_signature(const ProductGrid& grid);
/// All admissible signatures of the grid, lexicographic in the mask vector.
std::vector<Signature> all_signatures(const ProductGrid& grid);

/// Channel bookkeeping of one factor after the wavelet transform: id 0 is the
/// factor mean, then (scale, signature-mask, position) blocks, finest last.
struct FactorLayout {
  int d = 0, levels = 0, resolution = 0;
  long channels = 0;  // == resolution^d

  struct Info {
    bool mean = false;
    int scale = 0;
    int mask = 0;
    long jflat = 0;
  };

  long block_base(int scale) const;
  long encode(int scale, int mask, long jflat) const;
  Info decode(long id) const;
};

class WaveletSystem;

/// Dense coefficient tensor of a wavelet analysis; same cardinality as the
/// grid, laid out factor-major by channel id.  Entries with every factor on a
/// wavelet channel are the (rectangle, signature) map of the transform; the
/// rest (any factor on its mean channel) is the mean part.
class WaveletCoefficients {
public:
  WaveletCoefficients() = default;

  const ProductGrid& grid() const { return *grid_; }
  WaveletKind kind() const { return kind_; }
  std::vector<cplx>& data() { return coef_; }
  const std::vector<cplx>& data() const { return coef_; }

  cplx at(const DyadicRectangle& r, const Signature& sig) const;
  cplx& at(const DyadicRectangle& r, const Signature& sig);

  /// Sum of |coeff|^2 over all channels (equals ||f||_2^2).
  double total_energy() const;
  /// Sum over pure wavelet entries only.
  double wavelet_energy() const;

  /// Visits every pure wavelet entry as (rectangle, signature, coefficient).
  void for_each_entry(
      const std::function<void(const DyadicRectangle&, const Signature&, cplx)>& fn) const;

  /// Keeps entries for which keep(per-factor channel infos) is true; the keep
  /// predicate sees mean channels too.
  void filter(const std::function<bool(const std::vector<FactorLayout::Info>&)>& keep);

  /// Zeroes every pure-wavelet entry, leaving the mean part.
  void keep_mean_only();
  /// Zeroes the mean part, leaving pure-wavelet entries.
  void drop_mean();

private:
  friend class WaveletSystem;
  GridPtr grid_;
  WaveletKind kind_ = WaveletKind::haar;
  std::vector<cplx> coef_;
  std::vector<FactorLayout> layout_;
  long flat_of(const DyadicRectangle& r, const Signature& sig) const;
};

enum class FatherMode { projection, difference };  // F_l and Delta F_l

/// Orthonormal multiparameter wavelet calculus on a product grid.
///
/// Haar uses the classical step system.  Meyer is periodized by frequency
/// windows; the finest scale carries the complementary top-octave window so
/// that the discrete telescope closes and analyze/synthesize is exactly
/// unitary.  Wavelet cube scales run 0..L_s-1 per factor, plus one mean
/// channel per factor.
class WaveletSystem {
public:
  WaveletSystem(GridPtr grid, WaveletKind kind);

  const ProductGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  WaveletKind kind() const { return kind_; }
  const FactorLayout& layout(int s) const { return layouts_.at(s); }

  WaveletCoefficients analyze(const GridFunction& f) const;
  GridFunction synthesize(const WaveletCoefficients& c) const;

  /// w_R^sig as a grid function, unit L^2 norm.
  GridFunction atom(const DyadicRectangle& r, const Signature& sig) const;

  /// F mode: projection onto everything strictly coarser than level l_s in
  /// each factor (levels counted so that F at l+1 minus F at l is the exact
  /// scale-l detail), mean included.  difference mode: the exact scale-l
  /// detail in every factor.
  GridFunction father_projection(const GridFunction& f, const std::vector<int>& levels,
                                 FatherMode mode) const;

  /// P_T: projection onto wavelets with rectangle in T (all signatures).
  GridFunction collection_projection(const GridFunction& f, const RectCollection& t) const;

  /// The non-wavelet residue of f (factor means; for Meyer nothing else).
  GridFunction mean_part(const GridFunction& f) const;

private:
  GridPtr grid_;
  WaveletKind kind_;
  std::vector<FactorLayout> layouts_;
  // per factor, per scale: complex fold weights for detail/father channels,
  // in FFT bin order of that factor's axes
  std::vector<std::vector<std::vector<cplx>>> detail_weight_;
  std::vector<std::vector<std::vector<cplx>>> father_weight_;

  void factor_analyze(std::vector<cplx>& block, int s) const;
  void factor_synthesize(std::vector<cplx>& block, int s) const;
  void apply_over_factor(std::vector<cplx>& data, int s,
                         void (WaveletSystem::*op)(std::vector<cplx>&, int) const) const;
};

/// One-dimensional atom on a t=1, d=1 grid (the wavelet_1d building block).
GridFunction wavelet_atom_1d(GridPtr grid, int scale, int pos, int eps, WaveletKind kind);

}  // namespace harp
