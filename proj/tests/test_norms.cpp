#include <doctest.h>

#include <cmath>

#include "harp/norms.hpp"
#include "test_helpers.hpp"

using namespace harp;
using harp::test::random_real_function;

TEST_CASE("product_bmo: single wavelet achieves |R|^{-1/2} at U = R") {
  auto g = make_grid({1, 1}, {16, 16});
  WaveletSystem sys(g, WaveletKind::haar);
  auto r = make_rectangle(*g, {2, 1}, {{1}, {0}});
  auto b = sys.atom(r, Signature{{0, 0}});
  for (auto strat : {BmoStrategy::greedy}) {
    auto est = product_bmo(sys, b, strat);
    CHECK(est.value == doctest::Approx(1.0 / std::sqrt(r.measure())).epsilon(1e-9));
    CHECK(est.achieving.contains(r));
    CHECK(est.achieving_cells.measure() == doctest::Approx(r.measure()));
  }
}

TEST_CASE("product_bmo: zero symbol") {
  auto g = make_grid({1, 1}, {8, 8});
  WaveletSystem sys(g, WaveletKind::haar);
  GridFunction zero(g);
  CHECK(product_bmo(sys, zero).value == 0.0);
}

TEST_CASE("product_bmo: exact homogeneity and single-rectangle lower bound") {
  auto g = make_grid({1, 1}, {16, 16});
  WaveletSystem sys(g, WaveletKind::haar);
  auto b = random_real_function(g, 3);
  auto est = product_bmo(sys, b);
  GridFunction b2 = cplx{2.5, 0.0} * b;
  CHECK(product_bmo(sys, b2).value == doctest::Approx(2.5 * est.value).epsilon(1e-12));

  double single = 0.0;
  sys.analyze(b).for_each_entry([&](const DyadicRectangle& r, const Signature&, cplx v) {
    single = std::max(single, std::abs(v) / std::sqrt(r.measure()));
  });
  CHECK(est.value >= single * (1 - 1e-12));
}

TEST_CASE("product_bmo: greedy within factor two of the exhaustive sup on 4x4 patterns") {
  // coefficients at scales <= 2 per axis generate an open-set lattice of at
  // most 16 columns, which the exhaustive branch enumerates exactly
  auto g = make_grid({1, 1}, {16, 16});
  WaveletSystem sys(g, WaveletKind::haar);
  for (int seed = 0; seed < 12; ++seed) {
    auto b = random_symbol(sys, 100 + seed, 6, /*max_scale=*/1);
    auto ex = product_bmo(sys, b, BmoStrategy::exhaustive);
    auto gr = product_bmo(sys, b, BmoStrategy::greedy);
    CHECK(gr.value <= ex.value * (1 + 1e-12));
    CHECK(gr.value >= 0.5 * ex.value);
    CHECK(ex.oracle_gap.has_value());
    CHECK(*ex.oracle_gap <= 1.0 + 1e-12);
    CHECK(*ex.oracle_gap >= 0.5);
  }
}

TEST_CASE("bmo_minus_one: t=1 falls back, single wavelet matches") {
  auto g1 = make_grid({1}, {16});
  WaveletSystem sys1(g1, WaveletKind::haar);
  auto b1 = random_real_function(g1, 5);
  CHECK(bmo_minus_one(sys1, b1).value ==
        doctest::Approx(product_bmo(sys1, b1).value).epsilon(1e-12));

  auto g = make_grid({1, 1}, {16, 16});
  WaveletSystem sys(g, WaveletKind::haar);
  auto r = make_rectangle(*g, {1, 2}, {{1}, {2}});
  auto b = sys.atom(r, Signature{{0, 0}});
  CHECK(bmo_minus_one(sys, b).value == doctest::Approx(1.0 / std::sqrt(r.measure())).epsilon(1e-9));
}

TEST_CASE("carleson example: unit norm, ratio one at depth zero, smaller later") {
  auto g = make_grid({1, 1}, {32, 32});
  WaveletSystem sys(g, WaveletKind::haar);

  auto b0 = carleson_example(sys, 0);
  CHECK(product_bmo(sys, b0).value == doctest::Approx(1.0).epsilon(1e-9));
  const double ratio0 = bmo_minus_one(sys, b0).value;
  CHECK(ratio0 == doctest::Approx(1.0).epsilon(1e-9));

  auto b3 = carleson_example(sys, 3);
  CHECK(product_bmo(sys, b3).value == doctest::Approx(1.0).epsilon(1e-9));
  const double ratio3 = bmo_minus_one(sys, b3).value;
  CHECK(ratio3 < ratio0 * (1 + 1e-12));
}

TEST_CASE("square_function: atom, constant, Parseval identity") {
  auto g = make_grid({1, 1}, {16, 16});
  WaveletSystem sys(g, WaveletKind::haar);

  auto r = make_rectangle(*g, {1, 1}, {{0}, {1}});
  auto w = sys.atom(r, Signature{{0, 0}});
  auto s = square_function(sys, w);
  const CellSet cells = rectangle_cells(g, r);
  for (std::size_t i = 0; i < g->size(); ++i)
    CHECK(std::abs(s[i].real() - (cells.contains(i) ? 1.0 / std::sqrt(r.measure()) : 0.0)) <
          1e-9);

  GridFunction c(g);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = cplx{4.0, 0.0};
  CHECK(square_function(sys, c).norm_sup() < 1e-12);
  CHECK(strong_maximal(c).norm_sup() == doctest::Approx(4.0).epsilon(1e-12));

  auto f = random_real_function(g, 7);
  auto sf = square_function(sys, f);
  auto centered = f - sys.mean_part(f);
  CHECK(sf.norm_l2() == doctest::Approx(centered.norm_l2()).epsilon(1e-10));
}

TEST_CASE("h1_norms: zero input, equivalence band on an atom") {
  auto g = make_grid({1}, {64});
  WaveletSystem sys(g, WaveletKind::haar);
  GridFunction zero(g);
  auto z = h1_norms(sys, zero);
  CHECK(z.maximal == 0.0);
  CHECK(z.square == 0.0);
  CHECK(z.riesz_combo == 0.0);

  auto w = wavelet_atom_1d(g, 2, 1, 0, WaveletKind::haar);
  auto n = h1_norms(sys, w);
  CHECK(n.maximal > 0.0);
  for (double ratio : {n.maximal / n.square, n.maximal / n.riesz_combo, n.square / n.riesz_combo}) {
    CHECK(ratio > 1.0 / 20.0);
    CHECK(ratio < 20.0);
  }
}

TEST_CASE("h1_norms: dyadic dilation moves all three norms by a common factor") {
  auto g = make_grid({1}, {64});
  WaveletSystem sys(g, WaveletKind::haar);
  auto coarse = h1_norms(sys, wavelet_atom_1d(g, 3, 1, 0, WaveletKind::haar));
  auto fine = h1_norms(sys, wavelet_atom_1d(g, 4, 2, 0, WaveletKind::haar));
  const double rm = fine.maximal / coarse.maximal;
  const double rs = fine.square / coarse.square;
  const double rr = fine.riesz_combo / coarse.riesz_combo;
  CHECK(std::abs(rs / rm - 1.0) < 0.05);
  CHECK(std::abs(rr / rm - 1.0) < 0.05);
}

TEST_CASE("riesz_norm and cone_norm: constants vanish, symbols scale linearly") {
  auto g = make_grid({1, 1}, {16, 16});
  GridFunction c(g);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = cplx{2.0, 0.0};
  CHECK(riesz_norm(c) < 1e-10);
  CHECK(cone_norm(c) < 1e-10);

  WaveletSystem sys(g, WaveletKind::haar);
  auto b = sys.atom(make_rectangle(*g, {1, 1}, {{0}, {0}}), Signature{{0, 0}});
  const double n1 = riesz_norm(b);
  CHECK(n1 > 0.0);
  GridFunction b2 = cplx{2.0, 0.0} * b;
  CHECK(riesz_norm(b2) == doctest::Approx(2.0 * n1).epsilon(1e-6));
}

TEST_CASE("riesz_norm at one one-dimensional factor is the Hilbert commutator norm") {
  auto g = make_grid({1}, {32});
  WaveletSystem sys(g, WaveletKind::haar);
  auto b = sys.atom(make_rectangle(*g, {1}, {{1}}), Signature{{0}});
  const double rn = riesz_norm(b);
  const double direct =
      operator_norm(commutator_operator({{0, make_hilbert(g, 0)}}, b), 1).value;
  CHECK(rn == doctest::Approx(direct).epsilon(1e-9));
  CHECK(rn > 0.0);
}

TEST_CASE("random_symbol: normalized to unit product BMO") {
  auto g = make_grid({1, 1}, {16, 16});
  WaveletSystem sys(g, WaveletKind::haar);
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    auto b = random_symbol(sys, seed, 12);
    CHECK(product_bmo(sys, b).value == doctest::Approx(1.0).epsilon(1e-9));
  }
}
