#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "pinch/geometry.hpp"
#include "pinch/profile.hpp"
#include "pinch/verify.hpp"

using namespace pinch;

namespace {

std::shared_ptr<const WarpProfile> pinched(int n, double eta, double S, int grid = 512) {
  return std::make_shared<const WarpProfile>(build_profile(n, eta, S, grid));
}

std::shared_ptr<const WarpProfile> round_sp(int n, int grid = 512) {
  return std::make_shared<const WarpProfile>(round_profile(n, grid));
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("principal curvatures") {
  const auto r = round_profile(2, 512);
  const auto k = principal_curvatures(r, 0.3);
  CHECK(k.kappa_t == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(k.kappa_theta == doctest::Approx(1.0).epsilon(1e-12));

  const auto p = build_profile(2, 0.1, 4, 512);
  const auto k0 = principal_curvatures(p, 0.0);
  CHECK(k0.kappa_t == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(k0.kappa_theta == doctest::Approx(1.0 / p.eval(0).r).epsilon(1e-12));
  CHECK(k0.kappa_theta >= 0.97980);
  CHECK(k0.kappa_theta <= 1.02063);
  try {
    principal_curvatures(p, p.t_max());
    FAIL("expected a singularity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::singularity);
  }
}

TEST_CASE("scalar and mean curvature") {
  for (int n = 2; n <= 6; ++n) {
    const auto a = scal_and_mean(1, 1, n);
    CHECK(a.scal == doctest::Approx(n * (n - 1.0)));
    CHECK(a.mean == doctest::Approx(1.0));
  }
  const auto b = scal_and_mean(8, 1, 2);
  CHECK(b.scal == doctest::Approx(16.0));
  CHECK(b.mean == doctest::Approx(4.5));
  const auto c = scal_and_mean(0, 1, 3);
  CHECK(c.scal == doctest::Approx(2.0));
  CHECK(c.mean == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("round sphere measures") {
  const auto g2 = measure(round_sp(2), 2);
  CHECK(std::abs(g2.volume() - 4 * std::numbers::pi) < 1e-8);
  CHECK(std::abs(g2.h2_integral() / g2.volume() - 1) < 1e-10);
  CHECK(g2.length() == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  CHECK(g2.min_scal() == doctest::Approx(2.0).epsilon(1e-9));
  const auto g3 = measure(round_sp(3), 3);
  CHECK(std::abs(g3.volume() - 2 * std::numbers::pi * std::numbers::pi) < 1e-8);
  CHECK(sphere_volume(1) == doctest::Approx(2 * std::numbers::pi));
  CHECK(sphere_volume(2) == doctest::Approx(4 * std::numbers::pi));
  for (int n : {2, 3, 4}) {
    const auto g = measure(round_sp(n), n);
    CHECK(g.curvature().all_pass());
    for (const auto& s : g.curvature().samples) {
      CHECK(std::abs(s.scal - n * (n - 1.0)) <= 1e-9);
      CHECK(std::abs(s.mean - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("rescaling laws") {
  const auto g = measure(round_sp(2), 2);
  const auto h = rescale(g, 0.5);
  CHECK(h.volume() == doctest::Approx(std::numbers::pi).epsilon(1e-10));
  CHECK(h.min_scal() == doctest::Approx(8.0).epsilon(1e-9));
  for (const auto& s : h.curvature().samples) {
    CHECK(s.scal == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(s.mean == doctest::Approx(2.0).epsilon(1e-9));
  }
  CHECK(h.length() == doctest::Approx(0.5 * g.length()));
  CHECK(h.scale() == 0.5);

  const auto id = rescale(g, 1.0);
  CHECK(id.volume() == g.volume());
  CHECK(id.h2_integral() == g.h2_integral());
  CHECK(id.min_scal() == g.min_scal());
  CHECK(id.length() == g.length());

  const auto p = measure(pinched(3, 0.1, 4), 3);
  const auto ab = rescale(rescale(p, 0.7), 1.3);
  const auto direct = rescale(p, 0.91);
  auto rel = [](double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); };
  CHECK(rel(ab.volume(), direct.volume()) < 1e-12);
  CHECK(rel(ab.h2_integral(), direct.h2_integral()) < 1e-12);
  CHECK(rel(ab.min_scal(), direct.min_scal()) < 1e-12);
  CHECK(rel(ab.min_scal_strip(), direct.min_scal_strip()) < 1e-12);
  CHECK(rel(ab.length(), direct.length()) < 1e-12);
  CHECK(rel(ab.scale(), direct.scale()) < 1e-12);
  CHECK(ab.h2_integral() == doctest::Approx(p.h2_integral() * 0.91).epsilon(1e-12));

  for (double bad : {0.0, -1.0}) {
    try {
      rescale(g, bad);
      FAIL("expected a domain error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::domain);
    }
  }
}

TEST_CASE("pinched surfaces keep the scalar curvature floor") {
  for (int n : {2, 3})
    for (auto [eta, S] : {std::pair{0.1, 4.0}, std::pair{0.05, 4.0}, std::pair{0.04, 12.0}, std::pair{0.2, 2.0}}) {
      const auto raw = measure(pinched(n, eta, S), n);
      const double q = 1 - 4 * eta * eta;
      CHECK(raw.min_scal() >= n * (n - 1) * q * q - 1e-9);
      CHECK(raw.min_scal_strip() >= S);
      CHECK(raw.curvature().all_pass());
      const auto g = rescale(raw, q);
      CHECK(g.min_scal() >= n * (n - 1) - 1e-9);
      CHECK(g.h2_integral() / g.volume() > 0);
      CHECK(raw.h2_integral() / raw.volume() > 1);
    }
}

TEST_CASE("cap samples are exact") {
  const auto g = measure(pinched(3, 0.1, 4), 3);
  const double eta = 0.1;
  int caps = 0;
  for (const auto& s : g.curvature().samples) {
    if (std::abs(s.t) < eta) continue;
    ++caps;
    CHECK(std::abs(s.scal - 6.0) <= kCapCurvatureTol);
    CHECK(std::abs(s.mean - 1.0) <= kCapCurvatureTol);
  }
  CHECK(caps > 100);
  const auto& v = g.curvature().verdicts;
  REQUIRE(v.size() == 5);
  CHECK(v[0].id == "neck-scal-floor");
  CHECK(v[1].id == "strip-scal");
  CHECK(v[2].id == "neck-mean");
  CHECK(v[3].id == "cap-mean");
  CHECK(v[4].id == "cap-scal");
}

TEST_CASE("flipped meridian curvature breaks the cap verdicts") {
  const auto g = measure(pinched(2, 0.1, 4), 2, flipped_kappa_t);
  CHECK_FALSE(g.curvature().all_pass());
  for (const auto& v : g.curvature().verdicts)
    if (v.id == "cap-mean" || v.id == "cap-scal") CHECK_FALSE(v.pass);
}

TEST_CASE("meridian") {
  const auto p = pinched(2, 0.1, 4);
  const Meridian m(p);
  const double L = m.length();
  CHECK(m.cap_angle() == doctest::Approx(std::acos(0.2)).epsilon(1e-14));
  CHECK(L > 2 * m.cap_angle());
  CHECK(m.s_of_t(0.9) == 0.0);
  CHECK(m.s_of_t(0.0) == doctest::Approx(0.5 * L).epsilon(1e-12));
  for (double s : {0.01, 0.3, 1.2, 0.5 * L - 0.01, 0.5 * L + 0.03}) {
    const auto a = m.at(s);
    const auto b = m.at(L - s);
    CHECK(a.r == doctest::Approx(b.r).epsilon(1e-10));
    CHECK(a.phi == doctest::Approx(-b.phi).epsilon(1e-10));
    CHECK(a.dr == doctest::Approx(-b.dr).epsilon(1e-9));
    CHECK(a.t == doctest::Approx(-b.t).epsilon(1e-10));
  }
  for (double s = 0.05; s < L - 0.05; s += 0.05) {
    CHECK(m.at(s).phi < m.at(s + 0.01).phi);
    const double h = 1e-5;
    const double dphi = (m.at(s + h).phi - m.at(s - h).phi) / (2 * h);
    CHECK(dphi == doctest::Approx(1.0 / m.at(s).r).epsilon(1e-6));
    const double dr = (m.at(s + h).r - m.at(s - h).r) / (2 * h);
    CHECK(dr == doctest::Approx(m.at(s).dr).epsilon(1e-6));
  }
  CHECK_THROWS_AS(m.at(-0.1), Error);
  CHECK_THROWS_AS(m.at(L + 0.1), Error);
  CHECK(m.at(0).r == 0.0);
}

TEST_CASE("mean curvature excess shrinks like eta") {
  std::vector<double> x, y;
  for (double eta : {0.2, 0.1, 0.05, 0.025}) {
    const auto g = measure(pinched(2, eta, 2), 2);
    x.push_back(std::log(eta));
    y.push_back(std::log(g.h2_integral() / g.volume() - 1));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / x.size(), my += y[i] / y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  const double slope = sxy / sxx;
  CHECK(slope >= 0.8);
  CHECK(slope <= 1.5);
}

TEST_CASE("frozen baselines (grid 512)") {
  const auto g2 = measure(pinched(2, 0.1, 4), 2);
  CHECK(g2.volume() == doctest::Approx(11.3089104376).epsilon(1e-9));
  const auto g3 = measure(pinched(3, 0.1, 4), 3);
  CHECK(g3.volume() == doctest::Approx(17.2283535718).epsilon(1e-9));
  CHECK(g2.h2_integral() / g2.volume() - 1 == doctest::Approx(0.2895).epsilon(1e-3));
}

TEST_CASE("parallel measure is bit-identical to serial") {
  const auto p = pinched(3, 0.04, 12, 1024);
  const auto a = measure(p, 3, {}, ExecPolicy::serial);
  const auto b = measure(p, 3, {}, ExecPolicy::parallel);
  CHECK(a.volume() == b.volume());
  CHECK(a.h2_integral() == b.h2_integral());
  CHECK(a.min_scal() == b.min_scal());
  REQUIRE(a.curvature().samples.size() == b.curvature().samples.size());
  for (std::size_t i = 0; i < a.curvature().samples.size(); ++i)
    CHECK(a.curvature().samples[i].scal == b.curvature().samples[i].scal);
}

}
