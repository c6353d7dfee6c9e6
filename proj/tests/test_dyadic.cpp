#include <doctest.h>

#include <cmath>

#include "harp/dyadic.hpp"

using namespace harp;

namespace {

// Brute-force strong maximal superlevel oracle on a t=2, d=(1,1) grid.
// Recomputes averages in plain floating arithmetic on torus coordinates,
// independent of the half-cell integer path used by the library.
CellSet superlevel_oracle(const CellSet& u, double lambda) {
  const ProductGrid& g = u.grid();
  const int n0 = g.resolution(0), n1 = g.resolution(1);
  std::vector<double> m(g.size(), 0.0);
  auto cell_overlap = [](double lo, double hi, int cell, int n) {
    // overlap of wrapped interval [lo,hi) with cell [cell/n,(cell+1)/n)
    double total = 0.0;
    for (int shift = -1; shift <= 1; ++shift) {
      const double a = std::max(lo, (cell + shift * n + 0.0) / n);
      const double b = std::min(hi, (cell + shift * n + 1.0) / n);
      if (b > a) total += b - a;
    }
    return total;
  };
  for (int k0 = 0; k0 <= g.level(0); ++k0)
    for (int k1 = 0; k1 <= g.level(1); ++k1)
      for (int p0 = 0; p0 < (1 << k0); ++p0)
        for (int p1 = 0; p1 < (1 << k1); ++p1) {
          const double h0 = 0.5 * std::pow(0.5, k0), h1 = 0.5 * std::pow(0.5, k1);
          const double c0 = (p0 + 0.5) * std::pow(0.5, k0), c1 = (p1 + 0.5) * std::pow(0.5, k1);
          for (int dil = 1; dil <= 2; ++dil) {
            const double lo0 = c0 - dil * h0, hi0 = std::min(c0 + dil * h0, lo0 + 1.0);
            const double lo1 = c1 - dil * h1, hi1 = std::min(c1 + dil * h1, lo1 + 1.0);
            double mass = 0.0;
            for (int i = 0; i < n0; ++i)
              for (int j = 0; j < n1; ++j) {
                if (!u.contains(std::size_t(i) * n1 + j)) continue;
                mass += cell_overlap(lo0, hi0, i, n0) * cell_overlap(lo1, hi1, j, n1);
              }
            const double avg = mass / ((hi0 - lo0) * (hi1 - lo1));
            for (int i = 0; i < n0; ++i)
              for (int j = 0; j < n1; ++j) {
                const double ov =
                    cell_overlap(lo0, hi0, i, n0) * cell_overlap(lo1, hi1, j, n1);
                if (ov > 1e-15) m[std::size_t(i) * n1 + j] = std::max(m[std::size_t(i) * n1 + j], avg);
              }
          }
        }
  CellSet out(u.grid_ptr());
  for (std::size_t i = 0; i < g.size(); ++i)
    if (m[i] > lambda + 1e-12) out.insert(i);
  return out;
}

}  // namespace

TEST_CASE("enumerate_rectangles: counts") {
  auto g1 = make_grid({1}, {8});
  CHECK(enumerate_rectangles(g1, {{0, 2}}).size() == 7);  // 1+2+4 intervals

  auto g2 = make_grid({1, 1}, {8, 8});
  CHECK(enumerate_rectangles(g2, {{0, 1}, {0, 1}}).size() == 9);  // 3x3

  CHECK(enumerate_rectangles(g2, {{1, 0}, {0, 1}}).empty());
}

TEST_CASE("shadow_measure: single, disjoint, nested") {
  auto g = make_grid({1, 1}, {8, 8});
  RectCollection c(g);
  c.add(make_rectangle(*g, {1, 1}, {{0}, {0}}));
  CHECK(c.shadow_measure() == doctest::Approx(0.25).epsilon(1e-14));

  c.add(make_rectangle(*g, {1, 1}, {{1}, {1}}));  // disjoint
  CHECK(c.shadow_measure() == doctest::Approx(0.5).epsilon(1e-14));

  RectCollection nested(g);
  nested.add(make_rectangle(*g, {0, 0}, {{0}, {0}}));
  nested.add(make_rectangle(*g, {2, 2}, {{1}, {1}}));  // inside the torus
  CHECK(nested.shadow_measure() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("shadow monotone under collection inclusion") {
  auto g = make_grid({1, 1}, {8, 8});
  RectCollection small(g), big(g);
  small.add(make_rectangle(*g, {2, 1}, {{1}, {0}}));
  big.add(make_rectangle(*g, {2, 1}, {{1}, {0}}));
  big.add(make_rectangle(*g, {3, 2}, {{5}, {2}}));
  CHECK(big.shadow_measure() >= small.shadow_measure());
  CHECK(big.shadow().includes(small.shadow()));
}

TEST_CASE("is_t_minus_1_parameter") {
  auto g = make_grid({1, 1}, {8, 8});
  RectCollection common_first(g);
  common_first.add(make_rectangle(*g, {1, 1}, {{0}, {0}}));
  common_first.add(make_rectangle(*g, {1, 2}, {{0}, {3}}));
  auto [ok1, s1] = is_t_minus_1_parameter(common_first);
  CHECK(ok1);
  CHECK(*s1 == 0);

  RectCollection distinct(g);
  distinct.add(make_rectangle(*g, {1, 1}, {{0}, {0}}));
  distinct.add(make_rectangle(*g, {2, 2}, {{3}, {3}}));
  auto [ok2, s2] = is_t_minus_1_parameter(distinct);
  CHECK_FALSE(ok2);
  CHECK_FALSE(s2.has_value());

  RectCollection singleton(g);
  singleton.add(make_rectangle(*g, {1, 1}, {{0}, {0}}));
  auto [ok3, s3] = is_t_minus_1_parameter(singleton);
  CHECK(ok3);
  CHECK(*s3 == 0);
}

TEST_CASE("embeddedness: torus cover saturates, tight cover gives 1, 2R gives 2") {
  auto g = make_grid({1, 1}, {64, 64});
  auto r = make_rectangle(*g, {3, 4}, {{2}, {5}});

  CellSet torus(g, true);
  CHECK(embeddedness(r, torus) == 16.0);  // max scale 4 ends clipping

  CellSet tight = rectangle_cells(g, r);
  CHECK(embeddedness(r, tight) == 1.0);

  CellSet doubled = dilated_cells(g, r, 2);
  CHECK(embeddedness(r, doubled) == 2.0);

  CellSet missing(g);
  CHECK_THROWS_AS((void)embeddedness(r, missing), std::invalid_argument);
}

TEST_CASE("embeddedness monotone in the cover") {
  auto g = make_grid({1, 1}, {32, 32});
  auto r = make_rectangle(*g, {3, 3}, {{4}, {4}});
  CellSet v1 = dilated_cells(g, r, 2);
  CellSet v2 = dilated_cells(g, r, 4);
  CHECK(embeddedness(r, v1) <= embeddedness(r, v2));
}

TEST_CASE("maximal_superlevel: limits in lambda") {
  auto g = make_grid({1, 1}, {8, 8});
  CellSet u(g);
  u.insert(9);  // one interior-ish cell
  u.insert(10);

  // lambda near 1: shrinks to U itself
  CHECK(maximal_superlevel(u, 0.999) == u);

  // lambda near 0: the whole torus
  CHECK(maximal_superlevel(u, 1e-9).is_full());

  // always a superset of U below 1
  for (double lam : {0.3, 0.6, 0.9}) CHECK(maximal_superlevel(u, lam).includes(u));
}

TEST_CASE("maximal_superlevel agrees with the brute-force oracle") {
  auto g = make_grid({1, 1}, {8, 8});
  CellSet u(g);
  u.insert(2 * 8 + 3);
  SUBCASE("single cell, lambda 0.4") {
    auto mine = maximal_superlevel(u, 0.4);
    auto oracle = superlevel_oracle(u, 0.4);
    CHECK(mine == oracle);
  }
  SUBCASE("small blob, several thresholds") {
    u.insert(2 * 8 + 4);
    u.insert(3 * 8 + 3);
    u.insert(5 * 8 + 6);
    for (double lam : {0.25, 0.4, 0.55, 0.75}) {
      auto mine = maximal_superlevel(u, lam);
      auto oracle = superlevel_oracle(u, lam);
      CHECK(mine == oracle);
    }
  }
}

TEST_CASE("journe_cover: whole torus input") {
  auto g = make_grid({1, 1}, {16, 16});
  RectCollection u(g);
  u.add(make_rectangle(*g, {0, 0}, {{0}, {0}}));
  auto cov = journe_cover(u, 1.0);
  CHECK(cov.cover.is_full());
  CHECK(cov.report.cover_measure == doctest::Approx(1.0));
  CHECK_FALSE(cov.report.measure_bound_missed);
  CHECK(cov.emb.at(u.rectangles().front()) == 1.0);  // scale-0 cube saturates at once
}

TEST_CASE("journe_cover: single rectangle, eta = 1 (exhaustive threshold family)") {
  auto g = make_grid({1, 1}, {64, 64});
  RectCollection u(g);
  auto r = make_rectangle(*g, {2, 3}, {{1}, {3}});
  u.add(r);
  auto cov = journe_cover(u, 1.0);
  // d-1A: Emb(R) * R inside V, Emb >= 1
  const double e = cov.emb.at(r);
  CHECK(e >= 1.0);
  CHECK(cov.cover.includes(dilated_cells(g, r, static_cast<long>(e))));
  // d-1B for eta=1 unless flagged
  if (!cov.report.measure_bound_missed)
    CHECK(cov.report.cover_measure <= 2.0 * cov.report.shadow_measure + 1e-12);
  // when the cover actually grants 2R, embeddedness must see it
  if (cov.cover.includes(dilated_cells(g, r, 2))) CHECK(e >= 2.0);
}

TEST_CASE("journe_cover: overlapping anti-chain keeps the measure bound") {
  auto g = make_grid({1, 1}, {64, 64});
  RectCollection u(g);
  // staircase anti-chain through a common corner
  for (int k = 0; k <= 4; ++k)
    u.add(make_rectangle(*g, {k, 4 - k}, {{0}, {0}}));
  auto cov = journe_cover(u, 0.5);
  CHECK(cov.cover.includes(u.shadow()));
  for (const auto& [r, e] : cov.emb) {
    CHECK(e >= 1.0);
    CHECK(cov.cover.includes(dilated_cells(g, r, static_cast<long>(e))));
  }
  if (!cov.report.measure_bound_missed)
    CHECK(cov.report.cover_measure <= 1.5 * cov.report.shadow_measure + 1e-12);
}

TEST_CASE("rect collection JSON round trip") {
  auto g = make_grid({2, 1}, {16, 8});
  RectCollection c(g);
  c.add(make_rectangle(*g, {1, 2}, {{1, 0}, {3}}));
  c.add(make_rectangle(*g, {0, 1}, {{0, 0}, {1}}));
  auto text = rect_collection_to_json(c);
  auto back = rect_collection_from_json(g, text);
  CHECK(back.size() == c.size());
  for (const auto& r : c.rectangles()) CHECK(back.contains(r));
}
