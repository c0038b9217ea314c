#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "oracles.hpp"
#include "pinch/numerics.hpp"

using namespace pinch;
using namespace pinch::numerics;

TEST_SUITE("numerics") {

TEST_CASE("simpson integrates known integrals") {
  const auto rule = QuadratureRule::simpson(64);
  CHECK(std::abs(integrate([](double x) { return x * x; }, 0.0, 1.0, rule) - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, QuadratureRule::simpson(4096)) - 2.0) < 1e-10);
}

TEST_CASE("sine over [0, pi] with 64 panels to 1e-10") {
  // the Simpson truncation term alone is about 6.5e-8 here
  const double v = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, QuadratureRule::simpson(64));
  CHECK(std::abs(v - 2.0) < 1e-10);
}

TEST_CASE("simpson converges at fourth order") {
  const double exact = std::numbers::e - 1.0;
  auto err = [&](int m) {
    return std::abs(integrate([](double x) { return std::exp(x); }, 0.0, 1.0, QuadratureRule::simpson(m)) - exact);
  };
  for (int m : {4, 8, 16, 32}) CHECK(err(m) / err(2 * m) >= std::pow(2.0, 3.8));
}

TEST_CASE("integrate is linear") {
  const auto rule = QuadratureRule::simpson(128);
  auto f = [](double x) { return std::cos(3 * x); };
  auto g = [](double x) { return x * x * x; };
  const double lhs = integrate([&](double x) { return 1.5 * f(x) - 2.5 * g(x); }, -1.0, 2.0, rule);
  const double rhs = 1.5 * integrate(f, -1.0, 2.0, rule) - 2.5 * integrate(g, -1.0, 2.0, rule);
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("integrate rejects bad input") {
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 1.0, 0.0, QuadratureRule::simpson(8)), Error);
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0, QuadratureRule::simpson(7)), Error);
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0, QuadratureRule::simpson(2)), Error);
  for (auto pol : {ExecPolicy::serial, ExecPolicy::parallel}) {
    try {
      integrate([](double x) { return 1.0 / (x - 0.5); }, 0.0, 1.0, QuadratureRule::simpson(8), pol);
      FAIL("expected a non-finite sample error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::singularity);
      CHECK(std::string(e.what()).find("x = 0.5") != std::string::npos);
    }
  }
}

TEST_CASE("parallel integrate is bit-identical to serial") {
  auto f = [](double x) { return std::exp(-x) * std::sin(17 * x); };
  const auto rule = QuadratureRule::simpson(1 << 14);
  CHECK(integrate(f, 0.0, 3.0, rule, ExecPolicy::serial) == integrate(f, 0.0, 3.0, rule, ExecPolicy::parallel));
}

TEST_CASE("tridiagonal closed forms") {
  const auto ev = tridiag_smallest({{2, 2, 2}, {-1, -1}}, 3);
  REQUIRE(ev.size() == 3);
  CHECK(ev[0] == doctest::Approx(2 - std::numbers::sqrt2).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ev[2] == doctest::Approx(2 + std::numbers::sqrt2).epsilon(1e-12));
  CHECK(tridiag_smallest({{5}, {}}, 1)[0] == doctest::Approx(5).epsilon(1e-12));
  // 2 - 2 cos(j pi / (m+1)) for the discrete Laplacian
  TridiagSpec lap{std::vector<double>(50, 2.0), std::vector<double>(49, -1.0)};
  const auto l = tridiag_smallest(lap, 5);
  for (int j = 1; j <= 5; ++j) CHECK(l[j - 1] == doctest::Approx(2 - 2 * std::cos(j * std::numbers::pi / 51)).epsilon(1e-12));
}

TEST_CASE("tridiagonal errors") {
  CHECK_THROWS_AS(tridiag_smallest({{1, 2}, {0.5}}, 3), Error);
  try {
    tridiag_smallest({{1, 2}, {0.5}}, 3);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::dimension);
  }
  CHECK_THROWS_AS(tridiag_smallest({{1, 2}, {}}, 1), Error);
  CHECK_THROWS_AS(tridiag_smallest({{}, {}}, 0), Error);
  CHECK_THROWS_AS(tridiag_smallest({{1, NAN}, {0.1}}, 1), Error);
}

TEST_CASE("random 8x8 matrices match the characteristic polynomial scan") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    TridiagSpec T;
    for (int i = 0; i < 8; ++i) T.diag.push_back(u(rng));
    for (int i = 0; i < 7; ++i) T.offdiag.push_back(u(rng));
    const auto want = oracle::charpoly_roots(T);
    REQUIRE(want.size() == 8);
    const auto got = tridiag_smallest(T, 8);
    for (int i = 0; i < 8; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-10);
    for (int i = 1; i < 8; ++i) CHECK(got[i - 1] <= got[i]);
    CHECK(got == tridiag_smallest(T, 8));
    CHECK(got == tridiag_smallest(T, 8, ExecPolicy::parallel));
  }
}

TEST_CASE("sturm count brackets eigenvalues") {
  const TridiagSpec T{{2, 2, 2}, {-1, -1}};
  CHECK(sturm_count(T, 0.0) == 0);
  CHECK(sturm_count(T, 1.0) == 1);
  CHECK(sturm_count(T, 3.0) == 2);
  CHECK(sturm_count(T, 4.0) == 3);
}

TEST_CASE("inverse iteration returns a unit eigenvector") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TridiagSpec T;
  for (int i = 0; i < 40; ++i) T.diag.push_back(2 + u(rng));
  for (int i = 0; i < 39; ++i) T.offdiag.push_back(u(rng));
  const double lam = tridiag_smallest(T, 1)[0];
  const auto v = tridiag_eigenvector(T, lam);
  double norm = 0, res = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    norm += v[i] * v[i];
    double Tv = T.diag[i] * v[i];
    if (i > 0) Tv += T.offdiag[i - 1] * v[i - 1];
    if (i + 1 < v.size()) Tv += T.offdiag[i] * v[i + 1];
    res = std::max(res, std::abs(Tv - lam * v[i]));
  }
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(res < 1e-10);
}

TEST_CASE("smooth step") {
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(-3.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(7.0) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  for (double x = 0.01; x < 1; x += 0.01) {
    CHECK(smooth_step(x) + smooth_step(1 - x) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(smooth_step(x + 0.005) >= smooth_step(x));
    if (x < 0.9) CHECK(smooth_step(x + 0.005) > smooth_step(x));
  }
  const double h = 1e-5;
  auto d = [&](double x) { return (smooth_step(x + h) - smooth_step(x - h)) / (2 * h); };
  CHECK(std::abs(d(1e-3)) < 1e-6);
  CHECK(std::abs(d(1 - 1e-3)) < 1e-6);
}

TEST_CASE("bisection") {
  CHECK(bisect([](double x) { return x - 1; }, 0, 2, 1e-12) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(bisect([](double x) { return x * x - 2; }, 1, 2, 1e-12) - std::numbers::sqrt2) <= 1e-12);
  CHECK(std::abs(bisect([](double x) { return std::cos(x); }, 1, 2, 1e-12) - std::numbers::pi / 2) <= 1e-12);
  try {
    bisect([](double x) { return x * x + 1; }, -1, 1, 1e-9);
    FAIL("expected bracketing error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::bracketing);
  }
}

TEST_CASE("quintic hermite reproduces quintics") {
  auto p = [](double x) { return 1 - 2 * x + 0.5 * x * x + 3 * x * x * x - x * x * x * x + 0.25 * std::pow(x, 5); };
  auto dp = [](double x) { return -2 + x + 9 * x * x - 4 * x * x * x + 1.25 * std::pow(x, 4); };
  auto ddp = [](double x) { return 1 + 18 * x - 12 * x * x + 5 * x * x * x; };
  const double a = -0.3, b = 1.1;
  const QuinticHermite H(a, b, {p(a), dp(a), ddp(a)}, {p(b), dp(b), ddp(b)});
  for (double x = a; x <= b; x += 0.07) {
    const auto v = H(x);
    CHECK(v[0] == doctest::Approx(p(x)).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(dp(x)).epsilon(1e-11));
    CHECK(v[2] == doctest::Approx(ddp(x)).epsilon(1e-10));
  }
}

}
