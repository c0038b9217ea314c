#include "pinch/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "pinch/numerics.hpp"

namespace pinch {

namespace {

double one_minus_4eta2(double eta) { return 1.0 - 4.0 * eta * eta; }

// Upper acceleration bound on the neck, -(1-4eta^2)^{-3/2}.
double upper_accel(double eta) { return -std::pow(one_minus_4eta2(eta), -1.5); }

double cap_rdot_at_eta(double eta) { return -2.0 * eta / std::sqrt(one_minus_4eta2(eta)); }

}  // namespace

// ---------------------------------------------------------------- feasibility

std::vector<std::string> FeasibilityReport::failed_names() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.pass) out.push_back(c.name);
  return out;
}

std::string FeasibilityReport::describe() const {
  std::string s = ok ? "feasible" : "infeasible";
  for (const auto& c : checks)
    s += fmt::format("\n  [{}] ({}) {}: {:.9g} vs {:.9g}", c.pass ? "ok" : "FAIL", c.name, c.relation,
                     c.lhs, c.rhs);
  return s;
}

FeasibilityError::FeasibilityError(FeasibilityReport report)
    : Error(ErrorKind::feasibility, "infeasible neck parameters: " + report.describe()),
      report_(std::move(report)) {}

FeasibilityReport feasibility(double eta, double S) {
  if (!std::isfinite(eta) || !std::isfinite(S))
    throw Error(ErrorKind::domain, "feasibility: eta and S must be finite");
  if (eta <= 0)
    throw Error(ErrorKind::domain, fmt::format("feasibility: eta must be > 0, got {}", eta));
  if (eta >= 0.5)
    throw Error(ErrorKind::domain,
                fmt::format("feasibility: eta must be < 1/2 so that 1-4eta^2 > 0, got {}", eta));

  const double q = one_minus_4eta2(eta);
  FeasibilityReport rep;
  auto add = [&](std::string name, std::string rel, double lhs, double rhs, bool pass) {
    rep.checks.push_back({std::move(name), std::move(rel), lhs, rhs, pass});
  };
  add("eta<1/2", "eta < 1/2", eta, 0.5, true);
  add("S>1", "S > 1", S, 1.0, S > 1.0);
  const double a_rhs = 2.0 * eta / std::sqrt(q);
  add("a", "2 S eta^2 < 2 eta / sqrt(1-4eta^2)", 2.0 * S * eta * eta, a_rhs, 2.0 * S * eta * eta < a_rhs);
  const double b_rhs = 1.0 / std::sqrt(q);
  add("b", "S > 1 / sqrt(1-4eta^2)", S, b_rhs, S > b_rhs);
  const double c_rhs = (1.0 / eta + 1.0 - 8.0 * eta) / (2.0 * std::pow(q, 1.5));
  add("c", "S < (1/eta + 1 - 8 eta) / (2 (1-4eta^2)^{3/2})", S, c_rhs, S < c_rhs);
  rep.ok = std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.pass; });
  return rep;
}

// ---------------------------------------------------------------- caps

Jet cap_eval(double t, double eta, CapSide side) {
  const double lo = side == CapSide::north ? eta : -1.0 + eta;
  const double hi = side == CapSide::north ? 1.0 - eta : -eta;
  const double slack = 1e-14;
  if (!(t >= lo - slack && t <= hi + slack))
    throw Error(ErrorKind::range, fmt::format("cap_eval: t = {} outside {} cap [{}, {}]", t,
                                              side == CapSide::north ? "north" : "south", lo, hi));
  // x is the coordinate along the axis measured from the translated centre
  const double x = side == CapSide::north ? t + eta : t - eta;
  const double rr = std::max(0.0, 1.0 - x * x);
  Jet j;
  j.r = std::sqrt(rr);
  if (j.r == 0.0) {
    const double inf = std::numeric_limits<double>::infinity();
    j.rdot = x > 0 ? -inf : inf;
    j.rddot = -inf;
    return j;
  }
  j.rdot = -x / j.r;
  j.rddot = -1.0 / (rr * j.r);
  return j;
}

double cap_accel_continuation(double t, double eta) {
  const double x = t + eta;
  return -std::pow(1.0 - x * x, -1.5);
}

// ---------------------------------------------------------------- neck blend

double NeckBlend::accel(double t) const {
  const double tau = std::abs(t);
  const double upper = upper_accel(eta);
  const double plateau = -2.0 * S;
  double v = plateau + (upper - plateau) * numerics::smooth_step((tau - ramp_begin) / (ramp_end - ramp_begin));
  const double m0 = eta - match_width;
  if (tau > m0) v += (cap_accel_continuation(tau, eta) - upper) * numerics::smooth_step((tau - m0) / match_width);
  return v;
}

namespace {

constexpr int kSegmentPanels = 2048;

double match_window_excess(double eta, double m) {
  const double upper = upper_accel(eta);
  const double m0 = eta - m;
  return numerics::integrate(
      [&](double t) {
        return (cap_accel_continuation(t, eta) - upper) * numerics::smooth_step((t - m0) / m);
      },
      m0, eta, numerics::QuadratureRule::simpson(kSegmentPanels));
}

}  // namespace

double neck_accel_integral(const NeckBlend& blend) {
  const double eta = blend.eta;
  const std::array<double, 5> cuts{0.0, blend.ramp_begin, blend.ramp_end, eta - blend.match_width, eta};
  double total = 0;
  auto f = [&](double t) { return blend.accel(t); };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i])
      total += numerics::integrate(f, cuts[i], cuts[i + 1], numerics::QuadratureRule::simpson(kSegmentPanels));
  return total;
}

NeckBlend tune_neck(double eta, double S) {
  const auto rep = feasibility(eta, S);
  if (!rep.ok) throw FeasibilityError(rep);

  const double eta2 = eta * eta;
  const double upper = upper_accel(eta);
  const double plateau = -2.0 * S;
  const double target = cap_rdot_at_eta(eta);

  // The integral over [0, eta] equals plateau*eta + (U - plateau)(eta - centre)
  // + J(m), independent of the ramp width, so the admissible centre is known in
  // closed form; shrink m until it fits left of the match window.
  double m = 0.25 * (eta - eta2);
  double centre = 0;
  bool fits = false;
  for (int it = 0; it < 40; ++it) {
    const double jm = match_window_excess(eta, m);
    centre = eta - (target - jm - plateau * eta) / (upper - plateau);
    if (centre <= eta2)
      throw Error(ErrorKind::construction,
                  fmt::format("neck ramp would start inside the plateau (centre {} <= eta^2 = {})", centre, eta2));
    if (centre < eta - m) {
      fits = true;
      break;
    }
    m *= 0.5;
  }
  if (!fits)
    throw Error(ErrorKind::construction,
                fmt::format("neck ramp centre {} does not fit before the match window (eta = {}, S = {})",
                            centre, eta, S));

  NeckBlend blend{eta, S, 0, 0, m};
  const double lo = eta2;
  const double hi = eta - m;
  auto with_centre = [&](double c) {
    NeckBlend b = blend;
    const double hw = std::min(c - lo, hi - c);
    b.ramp_begin = c - hw;
    b.ramp_end = c + hw;
    return b;
  };
  auto mismatch = [&](double c) {
    if (c <= lo || c >= hi) {
      // degenerate ramp: step at the boundary
      return plateau * eta + (upper - plateau) * (eta - c) + match_window_excess(eta, m) - target;
    }
    return neck_accel_integral(with_centre(c)) - target;
  };
  double tuned = 0;
  try {
    tuned = numerics::bisect(mismatch, lo, hi, 1e-15 * std::max(1.0, eta));
  } catch (const Error& e) {
    throw Error(ErrorKind::construction,
                fmt::format("ramp centre bisection failed to bracket: mismatch {} at {} and {} at {}",
                            mismatch(lo), lo, mismatch(hi), hi));
  }
  blend = with_centre(tuned);
  if (!(blend.ramp_end > blend.ramp_begin))
    throw Error(ErrorKind::construction, "tuned neck ramp has zero width");
  const double residual = neck_accel_integral(blend) - target;
  if (std::abs(residual) > 1e-11)
    throw Error(ErrorKind::construction, fmt::format("neck integral mismatch {} after tuning", residual));
  return blend;
}

// ---------------------------------------------------------------- profile

namespace {

void check_grid_size(int grid_size) {
  if (grid_size < 64 || grid_size % 4 != 0)
    throw Error(ErrorKind::domain,
                fmt::format("grid_size must be a multiple of 4 and >= 64, got {}", grid_size));
}

// Half-neck nodes 0 = tau_0 < ... < tau_K = eta: piecewise uniform, four times
// denser on the ramp and in the match window.
std::vector<double> half_neck_nodes(const NeckBlend& b, int K) {
  const std::array<double, 5> cuts{0.0, b.ramp_begin, b.ramp_end, b.eta - b.match_width, b.eta};
  const std::array<double, 4> density{1, 4, 1, 4};
  std::array<double, 4> share{};
  std::array<int, 4> count{};
  double total = 0;
  for (int i = 0; i < 4; ++i) {
    share[i] = std::max(0.0, cuts[i + 1] - cuts[i]) * density[i];
    total += share[i];
  }
  int used = 0;
  for (int i = 0; i < 4; ++i) {
    const bool present = cuts[i + 1] > cuts[i];
    const int floor_min = present ? (density[i] > 1 ? 2 : 1) : 0;
    count[i] = present ? std::max(floor_min, static_cast<int>(std::floor(K * share[i] / total))) : 0;
    used += count[i];
  }
  // hand out (or take back) the remainder by largest fractional share
  while (used != K) {
    int best = -1;
    double best_key = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
      if (cuts[i + 1] <= cuts[i]) continue;
      const double ideal = K * share[i] / total;
      const double key = used < K ? ideal - count[i] : count[i] - ideal;
      const int floor_min = density[i] > 1 ? 2 : 1;
      if (used > K && count[i] <= floor_min) continue;
      if (key > best_key) {
        best_key = key;
        best = i;
      }
    }
    if (best < 0) throw Error(ErrorKind::construction, "grid too coarse for the neck segments");
    count[best] += used < K ? 1 : -1;
    used += used < K ? 1 : -1;
  }
  std::vector<double> nodes{0.0};
  for (int i = 0; i < 4; ++i)
    for (int j = 1; j <= count[i]; ++j)
      nodes.push_back(j == count[i] ? cuts[i + 1] : cuts[i] + (cuts[i + 1] - cuts[i]) * j / count[i]);
  nodes.back() = b.eta;
  return nodes;
}

constexpr int kIntervalPanels = 64;

}  // namespace

WarpProfile WarpProfile::from_samples(int n, double eta, double S, int grid_size, std::string blend_id,
                                      std::vector<double> t, std::vector<double> r,
                                      std::vector<double> rdot, std::vector<double> rddot) {
  if (n < 2) throw Error(ErrorKind::corrupt, fmt::format("dimension n = {} < 2", n));
  if (!(eta >= 0 && eta < 0.5)) throw Error(ErrorKind::corrupt, fmt::format("eta = {} outside [0, 1/2)", eta));
  if (!std::isfinite(S)) throw Error(ErrorKind::corrupt, "S is not finite");
  const std::size_t m = t.size();
  if (m < 3 || r.size() != m || rdot.size() != m || rddot.size() != m)
    throw Error(ErrorKind::corrupt, "sample arrays are missing or have different lengths");
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(r[i]) || !std::isfinite(rdot[i]) || !std::isfinite(rddot[i]))
      throw Error(ErrorKind::corrupt, fmt::format("non-finite sample at index {}", i));
    if (i > 0 && !(t[i] > t[i - 1]))
      throw Error(ErrorKind::corrupt, fmt::format("t is not strictly increasing at index {}", i));
  }
  if (t.front() <= -1.0 + eta || t.back() >= 1.0 - eta)
    throw Error(ErrorKind::corrupt, "samples must lie strictly between the poles");
  WarpProfile p;
  p.n_ = n;
  p.eta_ = eta;
  p.S_ = S;
  p.grid_size_ = grid_size;
  p.blend_id_ = std::move(blend_id);
  p.t_ = std::move(t);
  p.r_ = std::move(r);
  p.rdot_ = std::move(rdot);
  p.rddot_ = std::move(rddot);
  return p;
}

Jet WarpProfile::eval(double t) const {
  if (!(t >= t_min() && t <= t_max()))
    throw Error(ErrorKind::range, fmt::format("profile evaluated at t = {} outside [{}, {}]", t, t_min(), t_max()));
  if (t >= eta_) return cap_eval(t, eta_, CapSide::north);
  if (t <= -eta_) return cap_eval(t, eta_, CapSide::south);
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  if (it == t_.begin() || it == t_.end())
    throw Error(ErrorKind::range, fmt::format("no neck samples bracket t = {}", t));
  const auto k = static_cast<std::size_t>(it - t_.begin());
  if (t == t_[k - 1]) return {r_[k - 1], rdot_[k - 1], rddot_[k - 1]};
  const numerics::QuinticHermite h(t_[k - 1], t_[k], {r_[k - 1], rdot_[k - 1], rddot_[k - 1]},
                                   {r_[k], rdot_[k], rddot_[k]});
  const auto v = h(t);
  return {v[0], v[1], v[2]};
}

WarpProfile build_profile(int n, double eta, double S, int grid_size) {
  if (n < 2) throw Error(ErrorKind::domain, fmt::format("dimension n = {} < 2", n));
  check_grid_size(grid_size);
  const NeckBlend blend = tune_neck(eta, S);

  const int K = grid_size / 4;
  const int n_cap = grid_size / 4;
  const std::vector<double> tau = half_neck_nodes(blend, K);

  // integrate r'' inward from the cap junction at t = eta
  std::vector<Jet> half(tau.size());
  half.back() = cap_eval(eta, eta, CapSide::north);
  half.back().rddot = blend.accel(eta);
  const auto rule = numerics::QuadratureRule::simpson(kIntervalPanels);
  auto acc = [&](double u) { return blend.accel(u); };
  for (std::size_t k = tau.size() - 1; k-- > 0;) {
    const double a = tau[k], b = tau[k + 1];
    const double i0 = numerics::integrate(acc, a, b, rule);
    const double i1 = numerics::integrate([&](double u) { return (u - a) * blend.accel(u); }, a, b, rule);
    half[k].rdot = half[k + 1].rdot - i0;
    half[k].r = half[k + 1].r - half[k + 1].rdot * (b - a) + i1;
    half[k].rddot = blend.accel(a);
  }

  WarpProfile p;
  p.n_ = n;
  p.eta_ = eta;
  p.S_ = S;
  p.grid_size_ = grid_size;
  p.blend_id_ = kBlendId;
  p.blend_ = blend;

  const double theta_cap = std::acos(2.0 * eta);
  auto push = [&](double t, const Jet& j) {
    p.t_.push_back(t);
    p.r_.push_back(j.r);
    p.rdot_.push_back(j.rdot);
    p.rddot_.push_back(j.rddot);
  };
  // south cap, pole side first; the junction t = -eta is the last cap point
  for (int j = 1; j <= n_cap; ++j) {
    const double t = -(std::cos(theta_cap * j / n_cap) - eta);
    push(j == n_cap ? -eta : t, cap_eval(j == n_cap ? -eta : t, eta, CapSide::south));
  }
  for (std::size_t k = tau.size() - 1; k-- > 1;) push(-tau[k], {half[k].r, -half[k].rdot, half[k].rddot});
  push(0.0, half[0]);
  for (std::size_t k = 1; k + 1 < tau.size(); ++k) push(tau[k], half[k]);
  for (int j = n_cap; j >= 1; --j) {
    const double t = j == n_cap ? eta : std::cos(theta_cap * j / n_cap) - eta;
    push(t, cap_eval(t, eta, CapSide::north));
  }
  // guard against cos rounding near the junction breaking monotonicity
  for (std::size_t i = 1; i < p.t_.size(); ++i)
    if (!(p.t_[i] > p.t_[i - 1]))
      throw Error(ErrorKind::construction, fmt::format("grid is not strictly increasing at t = {}", p.t_[i]));

  // bound enforcement is a check, never a repair
  for (std::size_t k = 0; k < tau.size(); ++k) {
    const double v = half[k].rddot;
    if (v < -2.0 * S - 1e-12 || v > cap_accel_continuation(tau[k], eta) + 1e-12 || v >= 0)
      throw Error(ErrorKind::construction,
                  fmt::format("neck acceleration {} at t = {} leaves [-2S, cap envelope]", v, tau[k]));
  }
  return p;
}

WarpProfile round_profile(int n, int grid_size) {
  if (n < 2) throw Error(ErrorKind::domain, fmt::format("dimension n = {} < 2", n));
  check_grid_size(grid_size);
  WarpProfile p;
  p.n_ = n;
  p.eta_ = 0.0;
  p.S_ = 0.0;
  p.grid_size_ = grid_size;
  p.blend_id_ = kRoundBlendId;
  const int n_cap = grid_size / 2;
  const double half_pi = std::acos(0.0);
  auto push = [&](double t, const Jet& j) {
    p.t_.push_back(t);
    p.r_.push_back(j.r);
    p.rdot_.push_back(j.rdot);
    p.rddot_.push_back(j.rddot);
  };
  for (int j = 1; j < n_cap; ++j) {
    const double t = -std::cos(half_pi * j / n_cap);
    push(t, cap_eval(t, 0.0, CapSide::south));
  }
  push(0.0, cap_eval(0.0, 0.0, CapSide::north));
  for (int j = n_cap - 1; j >= 1; --j) {
    const double t = std::cos(half_pi * j / n_cap);
    push(t, cap_eval(t, 0.0, CapSide::north));
  }
  return p;
}

// ---------------------------------------------------------------- validation

std::vector<Violation> validate_profile(const WarpProfile& p, double tol) {
  std::vector<Violation> out;
  const auto& t = p.t();
  const auto& r = p.r();
  const auto& rd = p.rdot();
  const auto& rdd = p.rddot();
  const std::size_t m = t.size();
  const double eta = p.eta();
  const double S = p.S();
  auto rel = [&](double ref) { return tol * std::max(1.0, std::abs(ref)); };
  auto fail = [&](int cond, double at, double margin, std::string what) {
    out.push_back({cond, at, margin, std::move(what)});
  };

  // (1) evenness on a mirror-symmetric grid
  if (m % 2 == 0) fail(1, 0.0, -1.0, "grid has an even number of samples, cannot be symmetric about t = 0");
  for (std::size_t i = 0; i < m / 2 + 1 && i < m; ++i) {
    const std::size_t j = m - 1 - i;
    const double dt = std::abs(t[i] + t[j]);
    if (dt > rel(t[i])) {
      fail(1, t[i], rel(t[i]) - dt, "grid is not symmetric about t = 0");
      continue;
    }
    const double d0 = std::abs(r[i] - r[j]);
    const double d1 = std::abs(rd[i] + rd[j]);
    const double d2 = std::abs(rdd[i] - rdd[j]);
    if (d0 > rel(r[i])) fail(1, t[j], rel(r[i]) - d0, "r(-t) != r(t)");
    if (d1 > rel(rd[i])) fail(1, t[j], rel(rd[i]) - d1, "r'(-t) != -r'(t)");
    if (d2 > rel(rdd[i])) fail(1, t[j], rel(rdd[i]) - d2, "r''(-t) != r''(t)");
  }

  const double cap_slack = 1e-12;
  for (std::size_t i = 0; i < m; ++i) {
    const double ti = t[i];
    // (2), (3) cap formulas, including the junction points
    for (const auto side : {CapSide::south, CapSide::north}) {
      const bool in_cap = side == CapSide::north ? ti >= eta - cap_slack : ti <= -eta + cap_slack;
      if (!in_cap) continue;
      const int cond = side == CapSide::south ? 2 : 3;
      const Jet c = cap_eval(std::clamp(ti, p.t_min(), p.t_max()), eta, side);
      const double e0 = std::abs(r[i] - c.r), e1 = std::abs(rd[i] - c.rdot), e2 = std::abs(rdd[i] - c.rddot);
      if (e0 > rel(c.r)) fail(cond, ti, rel(c.r) - e0, fmt::format("r = {} but cap gives {}", r[i], c.r));
      if (e1 > rel(c.rdot)) fail(cond, ti, rel(c.rdot) - e1, fmt::format("r' = {} but cap gives {}", rd[i], c.rdot));
      if (e2 > rel(c.rddot))
        fail(cond, ti, rel(c.rddot) - e2, fmt::format("r'' = {} but cap gives {}", rdd[i], c.rddot));
    }
    // (6) strict concavity everywhere
    if (!(rdd[i] < 0)) fail(6, ti, -rdd[i], fmt::format("r'' = {} is not negative", rdd[i]));
    if (!(r[i] > 0)) fail(4, ti, r[i], "r is not positive on the open interval");

    if (p.is_round() || std::abs(ti) > eta + cap_slack) continue;
    const double q = 1.0 - 4.0 * eta * eta;
    // (4)
    const double lo4 = std::sqrt(q), hi4 = 1.0 / std::sqrt(q);
    if (r[i] < lo4 - tol) fail(4, ti, r[i] - lo4, fmt::format("r = {} below sqrt(1-4eta^2)", r[i]));
    if (r[i] > hi4 + tol) fail(4, ti, hi4 - r[i], fmt::format("r = {} above 1/sqrt(1-4eta^2)", r[i]));
    // (5)
    const double hi5 = 2.0 * eta / std::sqrt(q);
    if (std::abs(rd[i]) > hi5 + tol) fail(5, ti, hi5 - std::abs(rd[i]), fmt::format("|r'| = {} too large", std::abs(rd[i])));
    // (7)
    if (std::abs(ti) <= eta * eta) {
      const double e7 = std::abs(rdd[i] + 2.0 * S);
      if (e7 > rel(2.0 * S)) fail(7, ti, rel(2.0 * S) - e7, fmt::format("r'' = {} on the plateau, expected {}", rdd[i], -2.0 * S));
    }
    // (8) lower bound -2S; upper bound is the cap-continuation envelope, which
    // equals -(1-4eta^2)^{-3/2} at |t| = eta
    if (rdd[i] < -2.0 * S - rel(2.0 * S)) fail(8, ti, rdd[i] + 2.0 * S, fmt::format("r'' = {} below -2S", rdd[i]));
    const double env = cap_accel_continuation(std::min(std::abs(ti), eta), eta);
    if (rdd[i] > env + rel(env)) fail(8, ti, env - rdd[i], fmt::format("r'' = {} above the cap envelope {}", rdd[i], env));
  }
  return out;
}

}  // namespace pinch
