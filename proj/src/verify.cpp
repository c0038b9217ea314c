#include "pinch/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>

#include <fmt/format.h>

#include "pinch/bounds.hpp"
#include "pinch/io.hpp"
#include "pinch/numerics.hpp"
#include "pinch/profile.hpp"
#include "pinch/spectral.hpp"
#include "pinch/sweep.hpp"

namespace pinch {

Curvatures flipped_kappa_t(const Jet& j) {
  Curvatures k = curvatures_from_jet(j);
  k.kappa_t = -k.kappa_t;
  return k;
}

namespace {

struct Check {
  bool pass;
  double margin;
  std::string detail;
};

// pass iff err <= tol, margin tol - err
Check within(double err, double tol, std::string detail) { return {err <= tol, tol - err, std::move(detail)}; }

std::shared_ptr<const WarpProfile> pinched(int n, double eta, double S, int grid) {
  return std::make_shared<const WarpProfile>(build_profile(n, eta, S, grid));
}

std::shared_ptr<const WarpProfile> round_sphere(int n, int grid) {
  return std::make_shared<const WarpProfile>(round_profile(n, grid));
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

std::vector<InvariantResult> run_verify(const VerifyOptions& opts) {
  const bool full = opts.level == VerifyLevel::full;
  const ExecPolicy pol = opts.policy;
  const CurvatureModel& model = opts.curvature_model;
  const int pgrid = full ? 1024 : 512;
  const int mgrid = full ? 2048 : 1024;

  std::vector<std::pair<std::string, std::function<Check()>>> suite;
  auto add = [&](std::string id, std::function<Check()> f) { suite.emplace_back(std::move(id), std::move(f)); };

  add("numerics.integrate-linear", [] {
    const auto rule = numerics::QuadratureRule::simpson(64);
    auto f = [](double x) { return x * x; };
    auto g = [](double x) { return std::sin(x); };
    const double lhs = numerics::integrate([&](double x) { return 2 * f(x) + 3 * g(x); }, 0.0, 2.0, rule);
    const double rhs = 2 * numerics::integrate(f, 0.0, 2.0, rule) + 3 * numerics::integrate(g, 0.0, 2.0, rule);
    return within(std::abs(lhs - rhs), 1e-12, fmt::format("difference {:.3e}", lhs - rhs));
  });
  add("numerics.tridiag-closed-form", [] {
    const auto ev = numerics::tridiag_smallest({{2, 2, 2}, {-1, -1}}, 3);
    const double ref[3] = {2 - std::numbers::sqrt2, 2, 2 + std::numbers::sqrt2};
    double err = 0;
    for (int i = 0; i < 3; ++i) err = std::max(err, std::abs(ev[i] - ref[i]) / ref[i]);
    return within(err, 1e-12, fmt::format("max relative error {:.3e}", err));
  });
  add("numerics.smooth-step-flat", [] {
    const double h = 1e-5;
    auto d = [&](double x) { return (numerics::smooth_step(x + h) - numerics::smooth_step(x - h)) / (2 * h); };
    const double worst = std::max(std::abs(d(1e-3)), std::abs(d(1 - 1e-3)));
    return within(worst, 1e-6, fmt::format("end slopes {:.3e}", worst));
  });
  add("profile.lattice-valid", [&] {
    std::size_t bad = 0, built = 0;
    for (double eta : {0.05, 0.1, 0.2})
      for (double S : {2.0, 4.0, 12.0}) {
        if (!feasibility(eta, S).ok) continue;
        ++built;
        bad += validate_profile(build_profile(2, eta, S, pgrid)).size();
      }
    return Check{bad == 0 && built > 0, bad == 0 ? 0.0 : -static_cast<double>(bad),
                 fmt::format("{} feasible lattice points, {} violations", built, bad)};
  });
  add("profile.rdot-zero", [&] {
    const auto p = build_profile(2, 0.1, 4, pgrid);
    const double v = std::abs(p.eval(0.0).rdot);
    return within(v, 1e-10, fmt::format("|r'(0)| = {:.3e}", v));
  });
  add("profile.infeasible-rejected", [] {
    const auto b = feasibility(0.1, 1.0).failed_names();
    const auto c = feasibility(0.2, 4.0).failed_names();
    bool domain = false;
    try {
      feasibility(0.5, 4.0);
    } catch (const Error& e) {
      domain = e.kind() == ErrorKind::domain;
    }
    const bool ok = std::find(b.begin(), b.end(), "b") != b.end() && std::find(c.begin(), c.end(), "c") != c.end() && domain;
    return Check{ok, ok ? 0.0 : -1.0, "S = 1 fails (b), (0.2, 4) fails (c), eta = 1/2 is a domain error"};
  });
  add("geometry.cap-curvature", [&] {
    double margin = std::numeric_limits<double>::infinity();
    std::string where;
    auto scan = [&](const WarpProfile& p, int n, const char* name) {
      const auto rep = curvature_report(p, n, model, pol);
      for (const auto& v : rep.verdicts)
        if ((v.id == "cap-scal" || v.id == "cap-mean") && v.margin < margin) {
          margin = v.margin;
          where = fmt::format("{} {} margin {:.3e}", name, v.id, v.margin);
        }
    };
    scan(round_profile(2, pgrid), 2, "round n=2");
    scan(round_profile(3, pgrid), 3, "round n=3");
    scan(build_profile(3, 0.1, 4, pgrid), 3, "pinched n=3");
    return Check{margin >= 0, margin, where};
  });
  add("geometry.neck-table", [&] {
    double margin = std::numeric_limits<double>::infinity();
    std::string failed;
    for (int n : {2, 3})
      for (auto [eta, S] : {std::pair{0.1, 4.0}, std::pair{0.04, 12.0}}) {
        const auto rep = curvature_report(build_profile(n, eta, S, pgrid), n, model, pol);
        for (const auto& v : rep.verdicts) {
          if (!v.pass) failed += fmt::format(" {}(n={},eta={})", v.id, n, eta);
          margin = std::min(margin, v.pass ? std::max(v.margin, 0.0) : std::min(v.margin, -1e-300));
        }
      }
    return Check{failed.empty(), margin, failed.empty() ? "all five table lines hold" : "failing:" + failed};
  });
  add("geometry.round-volume", [&] {
    const auto g = measure(round_sphere(2, pgrid), 2, model, pol);
    const double e1 = std::abs(g.volume() - 4 * std::numbers::pi);
    const double e2 = std::abs(g.h2_integral() / g.volume() - 1.0);
    return within(std::max(e1 / 1e-8, e2 / 1e-10), 1.0, fmt::format("vol error {:.3e}, H2/vol error {:.3e}", e1, e2));
  });
  add("geometry.rescaled-scal-floor", [&] {
    double margin = std::numeric_limits<double>::infinity();
    for (auto [n, eta, S] : {std::tuple{2, 0.1, 4.0}, std::tuple{3, 0.05, 4.0}, std::tuple{3, 0.04, 12.0}}) {
      const auto g = rescale(measure(pinched(n, eta, S, pgrid), n, model, pol), 1 - 4 * eta * eta);
      margin = std::min(margin, g.min_scal() - n * (n - 1.0) + 1e-9);
    }
    return Check{margin >= 0, margin, "rescaled min Scal >= n(n-1)"};
  });
  add("geometry.rescale-compose", [&] {
    const auto g = measure(pinched(3, 0.1, 4, pgrid), 3, model, pol);
    const auto a = rescale(rescale(g, 0.7), 1.3), b = rescale(g, 0.7 * 1.3);
    double err = std::max({std::abs(a.volume() / b.volume() - 1), std::abs(a.h2_integral() / b.h2_integral() - 1),
                           std::abs(a.min_scal() / b.min_scal() - 1), std::abs(a.length() / b.length() - 1)});
    return within(err, 1e-12, fmt::format("max relative difference {:.3e}", err));
  });
  add("spectral.round-s2", [&] {
    const auto g = measure(round_sphere(2, pgrid), 2, model, pol);
    const auto r = dirac_lambda1(g, 1, mgrid, pol);
    return within(std::abs(r.lambda1_sq - 1.0), 1e-4, fmt::format("lambda_1 = {:.12f}", r.lambda1_sq));
  });
  add("spectral.mode-symmetry", [&] {
    const auto g = measure(pinched(2, 0.1, 4, pgrid), 2, model, pol);
    double err = 0;
    for (double mu : {0.5, 1.5}) {
      const double a = mode_lambda1(g, mu, 1, 512, pol);
      const double b = mode_lambda1(g, -mu, -1, 512, pol);
      const double c = mode_lambda1(g, mu, -1, 512, pol);
      err = std::max({err, std::abs(a - b) / a, std::abs(a - c) / a});
    }
    return within(err, 1e-9, fmt::format("max relative asymmetry {:.3e}", err));
  });
  add("spectral.homothety", [&] {
    const auto g = measure(pinched(2, 0.1, 4, pgrid), 2, model, pol);
    const double c = 0.96;
    const double a = dirac_lambda1(g, 1, 512, pol).lambda1_sq;
    const double b = dirac_lambda1(rescale(g, c), 1, 512, pol).lambda1_sq;
    const double err = std::abs(b * c * c / a - 1);
    return within(err, 1e-6, fmt::format("relative deviation {:.3e}", err));
  });
  add("spectral.friedrich-consistency", [&] {
    double margin = std::numeric_limits<double>::infinity();
    for (auto [n, eta, S] : {std::tuple{2, 0.1, 4.0}, std::tuple{3, 0.04, 12.0}}) {
      const auto g = rescale(measure(pinched(n, eta, S, pgrid), n, model, pol), 1 - 4 * eta * eta);
      const double fb = friedrich_bound(n, g.min_scal());
      for (const auto& m : dirac_lambda1(g, 1, 512, pol).per_mode) margin = std::min(margin, m.lambda - fb + 5e-2);
    }
    return Check{margin >= 0, margin, "every mode value above the Friedrich bound"};
  });
  add("bounds.round-squeeze", [&] {
    double err = 0;
    for (int n : {2, 3, 4}) {
      const auto g = measure(round_sphere(n, pgrid), n, model, pol);
      err = std::max({err, std::abs(friedrich_bound(n, n * (n - 1.0)) - n * n / 4.0),
                      std::abs(extrinsic_bound(g) - n * n / 4.0)});
    }
    return within(err, 1e-12, fmt::format("max deviation from n^2/4: {:.3e}", err));
  });
  add("bounds.eigenvalue-bracket", [&] {
    double margin = std::numeric_limits<double>::infinity();
    for (auto [n, eta, S] : {std::tuple{2, 0.1, 4.0}, std::tuple{3, 0.04, 12.0}}) {
      const auto g = rescale(measure(pinched(n, eta, S, pgrid), n, model, pol), 1 - 4 * eta * eta);
      const double lam = dirac_lambda1(g, 1, mgrid, pol).lambda1_sq;
      margin = std::min({margin, lam - friedrich_bound(n, g.min_scal()) + 5e-3, extrinsic_bound(g) - lam + 5e-3});
    }
    return Check{margin >= 0, margin, "friedrich <= lambda_1 <= extrinsic"};
  });
  add("bounds.cutoff-ordered", [&] {
    const auto g = measure(round_sphere(3, pgrid), 3, model, pol);
    const auto spec = dirac_lambda1(g, 1, mgrid, pol);
    const auto phi = eigenspinor_profile(g, spec);
    const double r0 = default_r0(g);
    double margin = std::numeric_limits<double>::infinity();
    for (double r : {r0, r0 / 2, r0 / 4}) {
      const auto ch = cutoff_chain(g, phi, r, r0);
      margin = std::min({margin, ch.quotient_bound - ch.lambda1, ch.volume_bound - ch.quotient_bound + 1e-9,
                         ch.final_bound - ch.volume_bound + 1e-9});
    }
    return Check{margin >= 0, margin, "lambda_1 <= quotient <= volume <= final"};
  });
  add("io.roundtrip", [&] {
    const auto p = build_profile(2, 0.1, 4, pgrid);
    const auto q = io::profile_from_json(io::profile_to_json(p));
    const bool same = p.t() == q.t() && p.r() == q.r() && p.rdot() == q.rdot() && p.rddot() == q.rddot() &&
                      p.eta() == q.eta() && p.S() == q.S() && validate_profile(q).empty();
    return Check{same, same ? 0.0 : -1.0, "write -> read -> validate is bit-exact"};
  });

  if (full) {
    add("profile.grid-convergence", [] {
      const double a = build_profile(2, 0.1, 4, 512).eval(0).r;
      const double b = build_profile(2, 0.1, 4, 1024).eval(0).r;
      return within(std::abs(a - b), 1e-9, fmt::format("r(0) changes by {:.3e}", a - b));
    });
    add("spectral.round-s3", [&] {
      const auto g = measure(round_sphere(3, pgrid), 3, model, pol);
      const auto r = dirac_lambda1(g, 1, 2048, pol);
      return within(std::abs(r.lambda1_sq - 2.25), 1e-3, fmt::format("lambda_1 = {:.12f}", r.lambda1_sq));
    });
    add("spectral.grid-order", [&] {
      const auto g = measure(round_sphere(2, pgrid), 2, model, pol);
      const auto r = dirac_lambda1(g, 1, 1024, pol);
      return Check{r.richardson.order >= 1.8, r.richardson.order - 1.8,
                   fmt::format("measured order {:.4f}", r.richardson.order)};
    });
    add("spectral.spinor-residual", [&] {
      const auto g = measure(round_sphere(2, pgrid), 2, model, pol);
      const auto phi = eigenspinor_profile(g, dirac_lambda1(g, 1, 2048, pol));
      const double err = std::max(phi.residual / 1e-4, std::abs(phi.norm - 1) / 1e-8);
      return within(err, 1.0, fmt::format("residual {:.3e}, norm {:.15f}", phi.residual, phi.norm));
    });
    add("geometry.h2-order", [&] {
      std::vector<double> etas{0.2, 0.1, 0.05, 0.025}, ex;
      for (double eta : etas) {
        const auto g = measure(pinched(2, eta, 2.0, pgrid), 2, model, pol);
        ex.push_back(g.h2_integral() / g.volume() - 1.0);
      }
      const double k = slope(etas, ex);
      return Check{k >= 0.8 && k <= 1.5, std::min(k - 0.8, 1.5 - k), fmt::format("log-log slope {:.4f} (S = 2)", k)};
    });
    add("bounds.cutoff-slope", [&] {
      const auto g = measure(round_sphere(3, pgrid), 3, model, pol);
      const auto phi = eigenspinor_profile(g, dirac_lambda1(g, 1, 2048, pol));
      std::vector<double> rs{0.2, 0.1, 0.05}, ex;
      for (double r : rs) ex.push_back(cutoff_chain(g, phi, r, default_r0(g)).excess);
      const double k = slope(rs, ex);
      return Check{k >= 0.7, k - 0.7, fmt::format("log-log slope {:.4f}", k)};
    });
    add("bounds.conjecture-mechanism", [&] {
      const double eta = 0.04;
      const auto g = rescale(measure(pinched(3, eta, 12.0, pgrid), 3, model, pol), 1 - 4 * eta * eta);
      const double lam = dirac_lambda1(g, 1, mgrid, pol).lambda1_sq;
      const double cb = conjecture_bound(3, g.min_scal());
      const double margin = std::min(cb - lam, g.min_scal() - 6.0);
      return Check{margin > 0, margin,
                   fmt::format("lambda_1 = {:.6f} < {:.6f}, min Scal = {:.6f} (eta = 0.04)", lam, cb, g.min_scal())};
    });
    add("sweep.bracket", [&] {
      SweepConfig cfg;
      cfg.n = 2;
      cfg.S = 4;
      cfg.etas = {0.1, 0.05, 0.025};
      cfg.profile_grid = pgrid;
      cfg.mode_grid = 1024;
      const auto res = run_sweep(cfg, pol);
      bool ok = res.excess_nonincreasing;
      for (const auto& r : res.rows) ok = ok && r.bracket_ok && r.neck_strip_scal_ok;
      return Check{ok, ok ? 0.0 : -1.0, "rows bracketed, excess non-increasing"};
    });
  }

  std::vector<InvariantResult> out;
  for (const auto& [id, f] : suite) {
    try {
      const Check c = f();
      out.push_back({id, c.pass, c.margin, c.detail});
    } catch (const std::exception& e) {
      out.push_back({id, false, -std::numeric_limits<double>::infinity(), std::string("threw: ") + e.what()});
    }
  }
  return out;
}

}  // namespace pinch
