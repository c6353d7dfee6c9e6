#include <doctest.h>

#include <cmath>
#include <numbers>

#include "harp/fft.hpp"
#include "harp/multiplier.hpp"
#include "test_helpers.hpp"

using namespace harp;
using harp::test::max_abs_diff;
using harp::test::random_function;

namespace {

GridFunction exponential_wave(const GridPtr& grid, const std::vector<int>& k) {
  GridFunction f(grid);
  std::vector<int> idx(grid->axes());
  for (std::size_t p = 0; p < f.size(); ++p) {
    grid->unflatten(p, idx);
    double phase = 0.0;
    for (int a = 0; a < grid->axes(); ++a)
      phase += 2.0 * std::numbers::pi * k[a] * idx[a] / grid->axis_size(a);
    f[p] = cplx{std::cos(phase), std::sin(phase)};
  }
  return f;
}

// Independent cone membership: solves the aperture condition from scratch in
// the cone's own coordinates, without ConeFrame.
bool cone_member_oracle(const std::vector<double>& xi, const std::vector<double>& dir,
                        double half_width, double lambda) {
  double t = 0.0, n2 = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    t += xi[i] * dir[i];
    n2 += xi[i] * xi[i];
  }
  if (t <= 0.0) return false;
  const double perp2 = n2 - t * t;  // |xi - t dir|^2
  // sup-norm over any orthonormal perp frame is bounded between the
  // euclidean norm and euclidean/sqrt(d-1); for d=2 they coincide.
  if (xi.size() == 2) return std::sqrt(std::max(perp2, 0.0)) <= lambda * half_width * t;
  throw std::logic_error("oracle only implemented for d=2");
}

}  // namespace

TEST_CASE("fourier: constant function concentrates at DC") {
  auto grid = make_grid({1, 1}, {16, 16});
  GridFunction f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = 1.0;
  auto hat = forward_fourier(f);
  CHECK(std::abs(hat[0]) == doctest::Approx(std::sqrt(double(grid->size()))).epsilon(1e-12));
  double off = 0.0;
  for (std::size_t i = 1; i < hat.size(); ++i) off = std::max(off, std::abs(hat[i]));
  CHECK(off < 1e-12);
}

TEST_CASE("fourier: roundtrip is the identity") {
  auto grid = make_grid({2, 1}, {16, 8});
  auto f = random_function(grid, 7);
  auto back = inverse_fourier(forward_fourier(f));
  CHECK(max_abs_diff(f, back) < 1e-12 * f.norm_sup());
}

TEST_CASE("fourier: exponential maps to a delta at its frequency") {
  auto grid = make_grid({1}, {16});
  auto f = exponential_wave(grid, {3});
  auto hat = forward_fourier(f);
  for (std::size_t i = 0; i < hat.size(); ++i) {
    if (i == 3)
      CHECK(std::abs(hat[i] - cplx{4.0, 0.0}) < 1e-12);
    else
      CHECK(std::abs(hat[i]) < 1e-12);
  }
}

TEST_CASE("fourier: Parseval") {
  auto grid = make_grid({1, 2}, {8, 8});
  auto f = random_function(grid, 11);
  auto hat = forward_fourier(f);
  CHECK(hat.norm_l2() == doctest::Approx(f.norm_l2()).epsilon(1e-12));
}

TEST_CASE("fourier: tag mismatch rejected") {
  auto grid = make_grid({1}, {8});
  GridFunction f(grid, Space::frequency);
  CHECK_THROWS_AS((void)forward_fourier(f), std::invalid_argument);
}

TEST_CASE("apply_multiplier: identity symbol") {
  auto grid = make_grid({1, 1}, {8, 8});
  auto f = random_function(grid, 3);
  auto g = apply_multiplier(make_identity(grid), f);
  CHECK(max_abs_diff(f, g) < 1e-12 * f.norm_sup());
}

TEST_CASE("apply_multiplier: exponentials are eigenfunctions of riesz") {
  auto grid = make_grid({2}, {16});
  auto r = make_riesz(grid, 0, 0);
  std::vector<int> k{3, -2};
  auto f = exponential_wave(grid, k);
  auto g = apply_multiplier(r, f);
  const cplx lambda = cplx{0.0, -3.0 / std::sqrt(13.0)};
  GridFunction expect = f;
  expect *= lambda;
  CHECK(max_abs_diff(g, expect) < 1e-11);
}

TEST_CASE("riesz symbols: sum of squares is -1 away from zero, exactly") {
  auto grid = make_grid({3}, {8});
  std::vector<cplx> acc(grid->size(), cplx{0.0, 0.0});
  for (int j = 0; j < 3; ++j) {
    auto r = make_riesz(grid, 0, j);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += r.symbol()[i] * r.symbol()[i];
  }
  // each squared component rounds once, so allow a few ulp
  for (std::size_t i = 1; i < acc.size(); ++i) CHECK(std::abs(acc[i] - cplx{-1.0, 0.0}) < 1e-14);
  CHECK(std::abs(acc[0]) == 0.0);
}

TEST_CASE("riesz: squares sum to minus identity plus mean") {
  auto grid = make_grid({2}, {16});
  auto f = random_function(grid, 5);
  GridFunction acc(grid);
  for (int j = 0; j < 2; ++j) {
    auto r = make_riesz(grid, 0, j);
    acc += apply_multiplier(r, apply_multiplier(r, f));
  }
  const cplx mean = f.mean();
  GridFunction expect = f;
  for (std::size_t i = 0; i < expect.size(); ++i) expect[i] = -(f[i] - mean);
  CHECK(max_abs_diff(acc, expect) < 1e-10);
}

TEST_CASE("riesz in one dimension is -i sign(xi)") {
  auto grid = make_grid({1}, {16});
  auto r = make_riesz(grid, 0, 0);
  auto h = make_hilbert(grid, 0);
  for (std::size_t i = 0; i < r.symbol().size(); ++i)
    CHECK(std::abs(r.symbol()[i] - h.symbol()[i]) == 0.0);
  CHECK(std::abs(r.symbol()[3] - cplx{0.0, -1.0}) == 0.0);
  CHECK(std::abs(r.symbol()[13] - cplx{0.0, 1.0}) == 0.0);
}

TEST_CASE("halfspace: boundary value 1/2 and complementarity") {
  auto grid = make_grid({2}, {8});
  auto hp = make_halfspace(grid, 0, {1.0, 0.0});
  auto hm = make_halfspace(grid, 0, {-1.0, 0.0});
  for (std::size_t i = 0; i < hp.symbol().size(); ++i) {
    const cplx s = hp.symbol()[i] + hm.symbol()[i];
    CHECK(std::abs(s - cplx{1.0, 0.0}) == 0.0);
  }
}

TEST_CASE("cone_sharp: wide aperture approaches the halfspace off the hyperplane") {
  auto grid = make_grid({2}, {16});
  ConeSpec cone{0, {1.0, 0.0}, 1e9, 0.0};
  auto c = make_cone_sharp(grid, cone);
  auto h = make_halfspace(grid, 0, {1.0, 0.0});
  std::vector<int> idx(grid->axes());
  std::vector<double> xi(2);
  for (std::size_t i = 0; i < c.symbol().size(); ++i) {
    grid->unflatten(i, idx);
    factor_frequencies(*grid, 0, idx, xi);
    if (xi[0] == 0.0) continue;  // hyperplane: halfspace uses 1/2, cone 0/1
    CHECK(std::abs(c.symbol()[i] - h.symbol()[i]) == 0.0);
  }
}

TEST_CASE("cone_smooth: sandwich between cone and dilate, pointwise scan") {
  auto grid = make_grid({2}, {32});
  ConeSpec cone{0, {1.0, 0.0}, 1.0, 0.25};
  auto c = make_cone_smooth(grid, cone);
  std::vector<int> idx(grid->axes());
  std::vector<double> xi(2);
  for (std::size_t i = 0; i < c.symbol().size(); ++i) {
    grid->unflatten(i, idx);
    factor_frequencies(*grid, 0, idx, xi);
    if (xi[0] == 0.0 && xi[1] == 0.0) continue;
    const double v = c.symbol()[i].real();
    const bool in_c = cone_member_oracle({xi[0], xi[1]}, cone.direction, cone.half_width, 1.0);
    const bool in_dilate =
        cone_member_oracle({xi[0], xi[1]}, cone.direction, cone.half_width, 1.25);
    if (in_c) CHECK(v == 1.0);
    if (!in_dilate) CHECK(v == 0.0);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("cone_smooth: constant along rays (0-homogeneous)") {
  auto grid = make_grid({2}, {32});
  ConeSpec cone{0, {std::sqrt(0.5), std::sqrt(0.5)}, 1.0, 0.25};
  auto c = make_cone_smooth(grid, cone);
  std::vector<int> idx(grid->axes());
  std::vector<double> xi(2);
  for (std::size_t i = 0; i < c.symbol().size(); ++i) {
    grid->unflatten(i, idx);
    factor_frequencies(*grid, 0, idx, xi);
    if (std::abs(xi[0]) > 7 || std::abs(xi[1]) > 7) continue;  // keep 2*xi alias-free
    if (xi[0] == 0.0 && xi[1] == 0.0) continue;
    std::vector<int> idx2{grid->bin(0, int(2 * xi[0])), grid->bin(1, int(2 * xi[1]))};
    const cplx v2 = c.symbol()[grid->flat_index(idx2)];
    CHECK(std::abs(c.symbol()[i] - v2) < 1e-14);
  }
}

TEST_CASE("tensor_multiplier: tensor of identities is the identity") {
  auto grid = make_grid({1, 1}, {8, 8});
  auto t = tensor_multiplier({make_identity(grid), make_identity(grid)});
  auto f = random_function(grid, 2);
  CHECK(max_abs_diff(apply_multiplier(t, f), f) < 1e-12 * f.norm_sup());
}

TEST_CASE("tensor_multiplier: separability on product functions") {
  auto grid = make_grid({1, 1}, {16, 16});
  auto g1 = make_grid({1}, {16});
  auto f1 = random_function(g1, 21);
  auto f2 = random_function(g1, 22);
  GridFunction prod(grid);
  std::vector<int> idx(2);
  for (std::size_t p = 0; p < prod.size(); ++p) {
    grid->unflatten(p, idx);
    prod[p] = f1[idx[0]] * f2[idx[1]];
  }
  auto t = tensor_multiplier({make_riesz(grid, 0, 0), make_riesz(grid, 1, 0)});
  auto lhs = apply_multiplier(t, prod);

  auto r1 = apply_multiplier(make_riesz(g1, 0, 0), f1);
  auto r2 = apply_multiplier(make_riesz(g1, 0, 0), f2);
  GridFunction rhs(grid);
  for (std::size_t p = 0; p < rhs.size(); ++p) {
    grid->unflatten(p, idx);
    rhs[p] = r1[idx[0]] * r2[idx[1]];
  }
  CHECK(max_abs_diff(lhs, rhs) < 1e-11);
}

TEST_CASE("tensor_multiplier: Parseval bound by symbol sup-norms") {
  auto grid = make_grid({2, 2}, {8, 8});
  ConeSpec c1{0, {1.0, 0.0}, 1.0, 0.5};
  ConeSpec c2{1, {0.0, 1.0}, 2.0, 0.5};
  auto m1 = make_cone_smooth(grid, c1);
  auto m2 = make_cone_smooth(grid, c2);
  auto t = tensor_multiplier({m1, m2});
  for (int s = 0; s < 5; ++s) {
    auto f = random_function(grid, 100 + s);
    CHECK(apply_multiplier(t, f).norm_l2() <=
          f.norm_l2() * m1.max_abs() * m2.max_abs() * (1.0 + 1e-12));
  }
}

TEST_CASE("multipliers commute") {
  auto grid = make_grid({2}, {16});
  auto a = make_riesz(grid, 0, 1);
  ConeSpec cone{0, {0.0, 1.0}, 1.5, 0.3};
  auto b = make_cone_smooth(grid, cone);
  auto f = random_function(grid, 9);
  auto ab = apply_multiplier(a, apply_multiplier(b, f));
  auto ba = apply_multiplier(b, apply_multiplier(a, f));
  CHECK(max_abs_diff(ab, ba) < 1e-12 * f.norm_sup());
}

TEST_CASE("make_multiplier: out-of-range indices rejected") {
  auto grid = make_grid({2}, {8});
  CHECK_THROWS_AS((void)make_riesz(grid, 0, 5), std::invalid_argument);
  CHECK_THROWS_AS((void)make_riesz(grid, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)make_hilbert(grid, 0), std::invalid_argument);
}

TEST_CASE("grid: invariants enforced") {
  CHECK_THROWS_AS(ProductGrid({1}, {12}), std::invalid_argument);
  CHECK_THROWS_AS(ProductGrid({1}, {4}), std::invalid_argument);
  CHECK_THROWS_AS(ProductGrid({0}, {8}), std::invalid_argument);
  CHECK_THROWS_AS(ProductGrid({2, 2}, {256, 256}, 1 << 20), std::invalid_argument);
}
