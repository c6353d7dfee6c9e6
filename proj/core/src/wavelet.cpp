#include "harp/wavelet.hpp"

#include <cmath>
#include <numbers>

#include "harp/fft.hpp"
#include "harp/profiles.hpp"

namespace harp {

namespace {

constexpr double kPi = std::numbers::pi;

// sin(pi/2 nu) rise keeps the exact square partition of the smoothstep.
double rise(double s) { return std::sin(0.5 * kPi * quintic_smoothstep(s)); }
double fall(double s) { return std::cos(0.5 * kPi * quintic_smoothstep(s)); }

void local_fft(std::vector<cplx>& a, int d, int n, int sign) {
  std::size_t stride = 1;
  for (int x = d - 1; x >= 0; --x) {
    const std::size_t block = stride * static_cast<std::size_t>(n);
    for (std::size_t base = 0; base < a.size(); base += block)
      for (std::size_t off = 0; off < stride; ++off)
        detail::fft_line(a.data() + base + off, n, stride, sign);
    stride = block;
  }
}

}  // namespace

double meyer_father_window(double xi) {
  const double u = std::abs(xi);
  if (u <= 0.4) return 1.0;
  if (u >= 0.6) return 0.0;
  return fall((u - 0.4) / 0.2);
}

double meyer_profile(double xi) {
  const double u = std::abs(xi);
  if (u <= 0.4 || u >= 1.2) return 0.0;
  if (u <= 0.6) return rise((u - 0.4) / 0.2);
  if (u <= 0.8) return 1.0;
  return fall((u - 0.8) / 0.4);
}

Signature zero_signature(const ProductGrid& grid) {
  Signature s;
  s.masks.assign(grid.factors(), 0);
  return s;
}

std::vector<Signature> all_signatures(const ProductGrid& grid) {
  std::vector<Signature> out;
  Signature cur = zero_signature(grid);
  const int t = grid.factors();
  for (;;) {
    out.push_back(cur);
    int s = t - 1;
    for (; s >= 0; --s) {
      if (++cur.masks[s] < (1 << grid.factor_dim(s)) - 1) break;  // all-ones excluded
      cur.masks[s] = 0;
    }
    if (s < 0) break;
  }
  return out;
}

long FactorLayout::block_base(int scale) const {
  long base = 1;
  for (int k = 0; k < scale; ++k) base += ((1L << d) - 1) << (static_cast<long>(k) * d);
  return base;
}

long FactorLayout::encode(int scale, int mask, long jflat) const {
  return block_base(scale) + (static_cast<long>(mask) << (static_cast<long>(scale) * d)) + jflat;
}

FactorLayout::Info FactorLayout::decode(long id) const {
  Info info;
  if (id == 0) {
    info.mean = true;
    return info;
  }
  for (int k = 0; k < levels; ++k) {
    const long base = block_base(k);
    const long size = ((1L << d) - 1) << (static_cast<long>(k) * d);
    if (id < base + size) {
      const long rel = id - base;
      const long per_mask = 1L << (static_cast<long>(k) * d);
      info.scale = k;
      info.mask = static_cast<int>(rel / per_mask);
      info.jflat = rel % per_mask;
      return info;
    }
  }
  throw std::out_of_range("FactorLayout::decode: channel id out of range");
}

cplx WaveletCoefficients::at(const DyadicRectangle& r, const Signature& sig) const {
  return coef_[flat_of(r, sig)];
}

cplx& WaveletCoefficients::at(const DyadicRectangle& r, const Signature& sig) {
  return coef_[flat_of(r, sig)];
}

long WaveletCoefficients::flat_of(const DyadicRectangle& r, const Signature& sig) const {
  validate_rectangle(*grid_, r);
  long flat = 0;
  for (std::size_t s = 0; s < layout_.size(); ++s) {
    const auto& lay = layout_[s];
    const auto& cube = r.cubes[s];
    const int mask = sig.masks.at(s);
    if (mask < 0 || mask >= (1 << lay.d) - 1)
      throw std::invalid_argument("Signature: mask out of range");
    long jflat = 0;
    for (int x = 0; x < lay.d; ++x) jflat = (jflat << cube.scale) + cube.position[x];
    flat = flat * lay.channels + lay.encode(cube.scale, mask, jflat);
  }
  return flat;
}

double WaveletCoefficients::total_energy() const {
  double acc = 0.0;
  for (const auto& v : coef_) acc += std::norm(v);
  return acc;
}

namespace {

// Factor channel infos of a flat coefficient index.
void decode_flat(const std::vector<FactorLayout>& layout, long flat,
                 std::vector<FactorLayout::Info>& infos) {
  for (int s = static_cast<int>(layout.size()) - 1; s >= 0; --s) {
    infos[s] = layout[s].decode(flat % layout[s].channels);
    flat /= layout[s].channels;
  }
}

}  // namespace

double WaveletCoefficients::wavelet_energy() const {
  double acc = 0.0;
  std::vector<FactorLayout::Info> infos(layout_.size());
  for (long i = 0; i < static_cast<long>(coef_.size()); ++i) {
    if (coef_[i] == cplx{0.0, 0.0}) continue;
    decode_flat(layout_, i, infos);
    bool pure = true;
    for (const auto& inf : infos) pure = pure && !inf.mean;
    if (pure) acc += std::norm(coef_[i]);
  }
  return acc;
}

void WaveletCoefficients::for_each_entry(
    const std::function<void(const DyadicRectangle&, const Signature&, cplx)>& fn) const {
  std::vector<FactorLayout::Info> infos(layout_.size());
  for (long i = 0; i < static_cast<long>(coef_.size()); ++i) {
    if (coef_[i] == cplx{0.0, 0.0}) continue;
    decode_flat(layout_, i, infos);
    bool pure = true;
    for (const auto& inf : infos) pure = pure && !inf.mean;
    if (!pure) continue;
    DyadicRectangle r;
    Signature sig;
    for (std::size_t s = 0; s < layout_.size(); ++s) {
      const auto& lay = layout_[s];
      const auto& inf = infos[s];
      std::vector<int> pos(lay.d);
      long j = inf.jflat;
      for (int x = lay.d - 1; x >= 0; --x) {
        pos[x] = static_cast<int>(j & ((1L << inf.scale) - 1));
        j >>= inf.scale;
      }
      r.cubes.push_back(DyadicCube{static_cast<int>(s), inf.scale, std::move(pos)});
      sig.masks.push_back(inf.mask);
    }
    fn(r, sig, coef_[i]);
  }
}

void WaveletCoefficients::filter(
    const std::function<bool(const std::vector<FactorLayout::Info>&)>& keep) {
  std::vector<FactorLayout::Info> infos(layout_.size());
  for (long i = 0; i < static_cast<long>(coef_.size()); ++i) {
    if (coef_[i] == cplx{0.0, 0.0}) continue;
    decode_flat(layout_, i, infos);
    if (!keep(infos)) coef_[i] = {0.0, 0.0};
  }
}

void WaveletCoefficients::keep_mean_only() {
  filter([](const std::vector<FactorLayout::Info>& infos) {
    for (const auto& inf : infos)
      if (inf.mean) return true;
    return false;
  });
}

void WaveletCoefficients::drop_mean() {
  filter([](const std::vector<FactorLayout::Info>& infos) {
    for (const auto& inf : infos)
      if (inf.mean) return false;
    return true;
  });
}

WaveletSystem::WaveletSystem(GridPtr grid, WaveletKind kind)
    : grid_(std::move(grid)), kind_(kind) {
  for (int s = 0; s < grid_->factors(); ++s) {
    const int n = grid_->resolution(s);
    if (kind_ == WaveletKind::meyer && n < 32)
      throw std::invalid_argument("WaveletSystem: meyer needs resolution >= 32 per axis");
    FactorLayout lay;
    lay.d = grid_->factor_dim(s);
    lay.levels = grid_->level(s);
    lay.resolution = n;
    lay.channels = 1;
    for (int x = 0; x < lay.d; ++x) lay.channels *= n;
    layouts_.push_back(lay);

    // 1D fold weights g(m) per scale; coefficient of F(m) e^{2 pi i m j/2^k}.
    std::vector<std::vector<cplx>> dw(lay.levels), fw(lay.levels);
    for (int k = 0; k < lay.levels; ++k) {
      dw[k].assign(n, {0.0, 0.0});
      fw[k].assign(n, {0.0, 0.0});
      const double scale_norm = std::pow(0.5, 0.5 * k);
      for (int bin = 0; bin < n; ++bin) {
        const int m = bin < n / 2 ? bin : bin - n;
        if (kind_ == WaveletKind::meyer) {
          const double u = std::abs(m) * std::pow(0.5, k);
          const double wk = meyer_father_window(u);
          const double wnext = (k + 1 == lay.levels) ? 1.0 : meyer_father_window(0.5 * u);
          const double det = std::sqrt(std::max(wnext * wnext - wk * wk, 0.0));
          // detail atoms sit at half-offset centers, fathers on the lattice
          const double ang = kPi * m * std::pow(0.5, k);
          dw[k][bin] = scale_norm * det * cplx{std::cos(ang), std::sin(ang)};
          fw[k][bin] = scale_norm * wk;
        } else {
          // exact DFT of the base step / indicator divided by n
          const int len = n >> k;         // samples under the interval
          const int half = len / 2;
          cplx acc_d{0.0, 0.0}, acc_f{0.0, 0.0};
          for (int i = 0; i < len; ++i) {
            const double ang = -2.0 * kPi * m * i / n;
            const cplx e{std::cos(ang), std::sin(ang)};
            acc_f += e;
            acc_d += (i < half ? -1.0 : 1.0) * e;
          }
          const double amp = std::pow(2.0, 0.5 * k) / n;
          dw[k][bin] = amp * std::conj(acc_d);
          fw[k][bin] = amp * std::conj(acc_f);
        }
      }
    }
    detail_weight_.push_back(std::move(dw));
    father_weight_.push_back(std::move(fw));
  }
}

void WaveletSystem::factor_analyze(std::vector<cplx>& block, int s) const {
  const FactorLayout& lay = layouts_[s];
  const int d = lay.d, n = lay.resolution;
  local_fft(block, d, n, -1);
  const double inv_n = 1.0 / static_cast<double>(lay.channels);

  std::vector<cplx> out(lay.channels, cplx{0.0, 0.0});
  out[0] = block[0] * inv_n;

  std::vector<int> mbin(d);
  std::vector<cplx> folded;
  for (int k = 0; k < lay.levels; ++k) {
    const long side = 1L << k;
    long fold_size = 1;
    for (int x = 0; x < d; ++x) fold_size *= side;
    for (int mask = 0; mask < (1 << d) - 1; ++mask) {
      folded.assign(fold_size, {0.0, 0.0});
      for (long p = 0; p < static_cast<long>(block.size()); ++p) {
        if (block[p] == cplx{0.0, 0.0}) continue;
        long rem = p;
        for (int x = d - 1; x >= 0; --x) {
          mbin[x] = static_cast<int>(rem % n);
          rem /= n;
        }
        cplx w{1.0, 0.0};
        bool zero = false;
        for (int x = 0; x < d && !zero; ++x) {
          const cplx& g =
              ((mask >> x) & 1) ? father_weight_[s][k][mbin[x]] : detail_weight_[s][k][mbin[x]];
          if (g == cplx{0.0, 0.0}) zero = true;
          w *= g;
        }
        if (zero) continue;
        long r = 0;
        for (int x = 0; x < d; ++x) r = (r << k) + (mbin[x] & (side - 1));
        folded[r] += block[p] * w;
      }
      local_fft(folded, d, static_cast<int>(side), +1);
      const long base = lay.encode(k, mask, 0);
      for (long j = 0; j < fold_size; ++j) out[base + j] = folded[j] * inv_n;
    }
  }
  block = std::move(out);
}

void WaveletSystem::factor_synthesize(std::vector<cplx>& block, int s) const {
  const FactorLayout& lay = layouts_[s];
  const int d = lay.d, n = lay.resolution;

  // accumulates F(m)/n so the trailing inverse transform needs no rescale
  std::vector<cplx> freq(lay.channels, cplx{0.0, 0.0});
  freq[0] = block[0];

  std::vector<int> mbin(d);
  std::vector<cplx> cblock;
  for (int k = 0; k < lay.levels; ++k) {
    const long side = 1L << k;
    long fold_size = 1;
    for (int x = 0; x < d; ++x) fold_size *= side;
    for (int mask = 0; mask < (1 << d) - 1; ++mask) {
      const long base = lay.encode(k, mask, 0);
      cblock.assign(block.begin() + base, block.begin() + base + fold_size);
      bool any = false;
      for (const auto& v : cblock) any = any || v != cplx{0.0, 0.0};
      if (!any) continue;
      local_fft(cblock, d, static_cast<int>(side), -1);
      for (long p = 0; p < static_cast<long>(freq.size()); ++p) {
        long rem = p;
        for (int x = d - 1; x >= 0; --x) {
          mbin[x] = static_cast<int>(rem % n);
          rem /= n;
        }
        cplx w{1.0, 0.0};
        bool zero = false;
        for (int x = 0; x < d && !zero; ++x) {
          const cplx& g =
              ((mask >> x) & 1) ? father_weight_[s][k][mbin[x]] : detail_weight_[s][k][mbin[x]];
          if (g == cplx{0.0, 0.0}) zero = true;
          w *= g;
        }
        if (zero) continue;
        long r = 0;
        for (int x = 0; x < d; ++x) r = (r << k) + (mbin[x] & (side - 1));
        freq[p] += std::conj(w) * cblock[r];
      }
    }
  }
  local_fft(freq, d, n, +1);
  block = std::move(freq);
}

void WaveletSystem::apply_over_factor(std::vector<cplx>& data, int s,
                                      void (WaveletSystem::*op)(std::vector<cplx>&, int)
                                          const) const {
  const FactorLayout& lay = layouts_[s];
  const long nblock = lay.channels;
  const int first_axis = grid_->axis_offset(s);
  const int last_axis = first_axis + lay.d - 1;
  std::size_t inner = 1;
  for (int a = last_axis + 1; a < grid_->axes(); ++a) inner *= grid_->axis_size(a);
  const std::size_t outer_step = inner * static_cast<std::size_t>(nblock);

  std::vector<cplx> scratch(nblock);
  for (std::size_t base = 0; base < data.size(); base += outer_step)
    for (std::size_t off = 0; off < inner; ++off) {
      for (long i = 0; i < nblock; ++i) scratch[i] = data[base + off + i * inner];
      (this->*op)(scratch, s);
      for (long i = 0; i < nblock; ++i) data[base + off + i * inner] = scratch[i];
    }
}

WaveletCoefficients WaveletSystem::analyze(const GridFunction& f) const {
  if (!(f.grid() == *grid_)) throw std::invalid_argument("analyze: grid mismatch");
  if (f.space() != Space::physical) throw std::invalid_argument("analyze: physical input expected");
  WaveletCoefficients c;
  c.grid_ = grid_;
  c.kind_ = kind_;
  c.layout_ = layouts_;
  c.coef_ = f.samples();
  for (int s = 0; s < grid_->factors(); ++s)
    apply_over_factor(c.coef_, s, &WaveletSystem::factor_analyze);
  return c;
}

GridFunction WaveletSystem::synthesize(const WaveletCoefficients& c) const {
  if (!(c.grid() == *grid_)) throw std::invalid_argument("synthesize: grid mismatch");
  if (c.kind() != kind_) throw std::invalid_argument("synthesize: wavelet kind mismatch");
  std::vector<cplx> data = c.data();
  for (int s = 0; s < grid_->factors(); ++s)
    apply_over_factor(data, s, &WaveletSystem::factor_synthesize);
  return GridFunction(grid_, std::move(data), Space::physical);
}

GridFunction WaveletSystem::atom(const DyadicRectangle& r, const Signature& sig) const {
  WaveletCoefficients c;
  c.grid_ = grid_;
  c.kind_ = kind_;
  c.layout_ = layouts_;
  c.coef_.assign(grid_->size(), {0.0, 0.0});
  c.at(r, sig) = 1.0;  // coefficients are measure-normalized inner products
  return synthesize(c);
}

GridFunction WaveletSystem::father_projection(const GridFunction& f,
                                              const std::vector<int>& levels,
                                              FatherMode mode) const {
  if (static_cast<int>(levels.size()) != grid_->factors())
    throw std::invalid_argument("father_projection: one level per factor");
  WaveletCoefficients c = analyze(f);
  if (mode == FatherMode::projection) {
    c.filter([&](const std::vector<FactorLayout::Info>& infos) {
      for (std::size_t s = 0; s < infos.size(); ++s)
        if (!infos[s].mean && infos[s].scale >= levels[s]) return false;
      return true;
    });
  } else {
    c.filter([&](const std::vector<FactorLayout::Info>& infos) {
      for (std::size_t s = 0; s < infos.size(); ++s)
        if (infos[s].mean || infos[s].scale != levels[s]) return false;
      return true;
    });
  }
  return synthesize(c);
}

GridFunction WaveletSystem::collection_projection(const GridFunction& f,
                                                  const RectCollection& t) const {
  WaveletCoefficients c = analyze(f);
  c.filter([&](const std::vector<FactorLayout::Info>& infos) {
    DyadicRectangle r;
    for (std::size_t s = 0; s < infos.size(); ++s) {
      if (infos[s].mean) return false;
      const auto& lay = layouts_[s];
      std::vector<int> pos(lay.d);
      long j = infos[s].jflat;
      for (int x = lay.d - 1; x >= 0; --x) {
        pos[x] = static_cast<int>(j & ((1L << infos[s].scale) - 1));
        j >>= infos[s].scale;
      }
      r.cubes.push_back(DyadicCube{static_cast<int>(s), infos[s].scale, std::move(pos)});
    }
    return t.contains(r);
  });
  return synthesize(c);
}

GridFunction WaveletSystem::mean_part(const GridFunction& f) const {
  WaveletCoefficients c = analyze(f);
  c.keep_mean_only();
  return synthesize(c);
}

GridFunction wavelet_atom_1d(GridPtr grid, int scale, int pos, int eps, WaveletKind kind) {
  if (grid->factors() != 1 || grid->factor_dim(0) != 1)
    throw std::invalid_argument("wavelet_atom_1d: expects a one-factor, one-dimensional grid");
  const int n = grid->resolution(0);
  const int levels = grid->level(0);
  if (scale < 0 || scale >= levels) throw std::invalid_argument("wavelet_atom_1d: scale");
  if (pos < 0 || pos >= (1 << scale)) throw std::invalid_argument("wavelet_atom_1d: position");
  if (eps != 0 && eps != 1) throw std::invalid_argument("wavelet_atom_1d: eps in {0,1}");
  if (kind == WaveletKind::meyer && n < 32)
    throw std::invalid_argument("wavelet_atom_1d: meyer needs resolution >= 32");

  GridFunction a(grid);
  if (kind == WaveletKind::haar) {
    const int len = n >> scale;
    const double amp = std::pow(2.0, 0.5 * scale);
    for (int i = 0; i < len; ++i) {
      const double v = eps == 1 ? amp : (i < len / 2 ? -amp : amp);
      a[static_cast<std::size_t>(pos * len + i)] = v;
    }
    return a;
  }
  // Meyer, assembled from the frequency side so all window identities hold on
  // the lattice exactly.  Detail atoms sit at half-offset centers, scaling
  // atoms on the lattice.
  const double center = (eps == 0 ? pos + 0.5 : pos) * std::pow(0.5, scale);
  std::vector<cplx> freq(n, cplx{0.0, 0.0});
  for (int bin = 0; bin < n; ++bin) {
    const int m = bin < n / 2 ? bin : bin - n;
    const double u = std::abs(m) * std::pow(0.5, scale);
    double win;
    if (eps == 1) {
      win = meyer_father_window(u);
    } else {
      const double wk = meyer_father_window(u);
      const double wnext = (scale + 1 == levels) ? 1.0 : meyer_father_window(0.5 * u);
      win = std::sqrt(std::max(wnext * wnext - wk * wk, 0.0));
    }
    if (win == 0.0) continue;
    const double ang = -2.0 * kPi * m * center;
    freq[bin] = std::pow(0.5, 0.5 * scale) * win * cplx{std::cos(ang), std::sin(ang)};
  }
  detail::fft_line(freq.data(), n, 1, +1);
  for (int i = 0; i < n; ++i) a[i] = freq[i];
  return a;
}

}  // namespace harp
