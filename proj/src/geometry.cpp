#include "pinch/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

namespace pinch {

namespace {

using Gauss = boost::math::quadrature::gauss<double, 16>;

constexpr int kCapPanels = 4096;
constexpr int kNeckPanels = 16;

double speed(const Jet& j) { return std::sqrt(1.0 + j.rdot * j.rdot); }

}  // namespace

Curvatures curvatures_from_jet(const Jet& j) {
  if (!(j.r > 0))
    throw Error(ErrorKind::singularity, fmt::format("principal curvatures need r > 0, got r = {}", j.r));
  const double w = speed(j);
  return {-j.rddot / (w * w * w), 1.0 / (j.r * w)};
}

Curvatures principal_curvatures(const WarpProfile& p, double t) {
  const Jet j = p.eval(t);
  if (!(j.r > 0))
    throw Error(ErrorKind::singularity, fmt::format("t = {} is a pole of the profile (r = {})", t, j.r));
  return curvatures_from_jet(j);
}

ScalMean scal_and_mean(double kt, double kth, int n) {
  if (n < 2) throw Error(ErrorKind::domain, fmt::format("dimension n = {} < 2", n));
  const double m = n - 1;
  return {2.0 * m * kt * kth + m * (n - 2) * kth * kth, (kt + m * kth) / n};
}

bool CurvatureReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.pass; });
}

CurvatureReport curvature_report(const WarpProfile& p, int n, const CurvatureModel& model, ExecPolicy policy) {
  const auto& t = p.t();
  const long m = static_cast<long>(t.size());
  CurvatureReport rep;
  rep.samples.resize(t.size());
  auto one = [&](long i) {
    const Jet j{p.r()[i], p.rdot()[i], p.rddot()[i]};
    const Curvatures k = model ? model(j) : curvatures_from_jet(j);
    const ScalMean sm = scal_and_mean(k.kappa_t, k.kappa_theta, n);
    rep.samples[i] = {t[i], 0.0, k.kappa_t, k.kappa_theta, sm.scal, sm.mean};
  };
  if (policy == ExecPolicy::parallel) {
    std::exception_ptr err;
#pragma omp parallel for schedule(static)
    for (long i = 0; i < m; ++i) {
      try {
        one(i);
      } catch (...) {
#pragma omp critical(pinch_curvature_throw)
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (long i = 0; i < m; ++i) one(i);
  }

  const double eta = p.eta();
  const double S = p.S();
  const double nn1 = n * (n - 1.0);
  const double floor = nn1 * std::pow(1.0 - 4.0 * eta * eta, 2);
  const double inf = std::numeric_limits<double>::infinity();
  double neck_floor = inf, strip = inf, neck_mean = inf, cap_mean = inf, cap_scal = inf;
  for (const auto& c : rep.samples) {
    const double at = std::abs(c.t);
    if (!p.is_round() && at <= eta) {
      neck_floor = std::min(neck_floor, c.scal - floor);
      neck_mean = std::min(neck_mean, 2.0 * S - c.mean);
      if (at <= eta * eta) strip = std::min(strip, c.scal - S);
    }
    if (at >= eta) {
      cap_mean = std::min(cap_mean, kCapCurvatureTol - std::abs(c.mean - 1.0));
      cap_scal = std::min(cap_scal, kCapCurvatureTol * nn1 - std::abs(c.scal - nn1));
    }
  }
  auto verdict = [&](std::string id, std::string what, double margin, bool strict) {
    if (margin == inf) return CurvatureVerdict{std::move(id), what + " (vacuous)", true, 0.0};
    const bool pass = strict ? margin > 0 : margin >= -kCapCurvatureTol;
    return CurvatureVerdict{std::move(id), std::move(what), pass, margin};
  };
  rep.verdicts.push_back(verdict("neck-scal-floor", "Scal >= n(n-1)(1-4eta^2)^2 on [-eta, eta]", neck_floor, false));
  rep.verdicts.push_back(verdict("strip-scal", "Scal > S on [-eta^2, eta^2]", strip, true));
  rep.verdicts.push_back(verdict("neck-mean", "H <= 2S on [-eta, eta]", neck_mean, false));
  rep.verdicts.push_back(verdict("cap-mean", "H = 1 on the caps", cap_mean, false));
  rep.verdicts.push_back(verdict("cap-scal", "Scal = n(n-1) on the caps", cap_scal, false));
  return rep;
}

// ---------------------------------------------------------------- meridian

Meridian::Meridian(std::shared_ptr<const WarpProfile> profile) : profile_(std::move(profile)) {
  if (!profile_) throw Error(ErrorKind::domain, "Meridian: null profile");
  const WarpProfile& p = *profile_;
  const double eta = p.eta();
  cap_angle_ = std::acos(2.0 * eta);

  for (std::size_t i = p.size(); i-- > 0;)
    if (std::abs(p.t()[i]) <= eta) t_.push_back(p.t()[i]);
  if (t_.empty() || t_.front() != eta || t_.back() != -eta)
    throw Error(ErrorKind::corrupt, "profile grid does not contain both neck junctions t = +-eta");

  const std::size_t K = t_.size();
  s_.assign(K, cap_angle_);
  phi_.assign(K, 0.0);
  std::vector<Jet> jet(K);
  for (std::size_t k = 0; k < K; ++k) jet[k] = p.eval(t_[k]);
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const double lo = t_[k + 1], hi = t_[k];
    const double ds = Gauss::integrate([&](double u) { return speed(p.eval(u)); }, lo, hi);
    const double dphi = Gauss::integrate(
        [&](double u) {
          const Jet j = p.eval(u);
          return speed(j) / j.r;
        },
        lo, hi);
    s_[k + 1] = s_[k] + ds;
    phi_[k + 1] = phi_[k] + dphi;
  }
  half_phi_ = 0.5 * phi_.back();
  for (auto& v : phi_) v -= half_phi_;
  length_ = s_.back() + cap_angle_;

  for (std::size_t k = 0; k + 1 < K; ++k) {
    auto tdata = [&](std::size_t i) {
      const Jet& j = jet[i];
      const double w2 = 1.0 + j.rdot * j.rdot;
      return std::array<double, 3>{t_[i], -1.0 / std::sqrt(w2), -j.rdot * j.rddot / (w2 * w2)};
    };
    auto pdata = [&](std::size_t i) {
      const Jet& j = jet[i];
      const double dr = -j.rdot / speed(j);
      return std::array<double, 3>{phi_[i], 1.0 / j.r, -dr / (j.r * j.r)};
    };
    t_of_s_.emplace_back(s_[k], s_[k + 1], tdata(k), tdata(k + 1));
    phi_of_s_.emplace_back(s_[k], s_[k + 1], pdata(k), pdata(k + 1));
  }
}

Meridian::Point Meridian::at(double s) const {
  const double slack = 1e-12 * length_;
  if (!(s >= -slack && s <= length_ + slack))
    throw Error(ErrorKind::range, fmt::format("arclength s = {} outside [0, {}]", s, length_));
  s = std::clamp(s, 0.0, length_);
  const double eta = profile_->eta();
  const double log_cap = std::log(std::tan(0.5 * cap_angle_));
  auto cap_phi = [&](double sigma) {
    return sigma == 0 ? -std::numeric_limits<double>::infinity()
                      : std::log(std::tan(0.5 * sigma)) - log_cap - half_phi_;
  };
  if (s <= cap_angle_) return {std::cos(s) - eta, std::sin(s), std::cos(s), cap_phi(s)};
  if (s >= length_ - cap_angle_) {
    const double sigma = length_ - s;
    return {eta - std::cos(sigma), std::sin(sigma), -std::cos(sigma), -cap_phi(sigma)};
  }
  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  std::size_t k = static_cast<std::size_t>(it - s_.begin());
  k = std::clamp<std::size_t>(k, 1, s_.size() - 1) - 1;
  const double t = std::clamp(t_of_s_[k](s)[0], t_[k + 1], t_[k]);
  const Jet j = profile_->eval(t);
  return {t, j.r, -j.rdot / speed(j), phi_of_s_[k](s)[0]};
}

double Meridian::s_of_t(double t) const {
  const WarpProfile& p = *profile_;
  if (!(t >= p.t_min() && t <= p.t_max()))
    throw Error(ErrorKind::range, fmt::format("t = {} outside the profile domain", t));
  const double eta = p.eta();
  if (t >= eta) return std::acos(std::min(1.0, t + eta));
  if (t <= -eta) return length_ - std::acos(std::min(1.0, eta - t));
  auto it = std::lower_bound(t_.begin(), t_.end(), t, std::greater<>());
  const std::size_t k = static_cast<std::size_t>(it - t_.begin());
  if (t_[k] == t) return s_[k];
  return s_[k - 1] + Gauss::integrate([&](double u) { return speed(p.eval(u)); }, t, t_[k - 1]);
}

// ---------------------------------------------------------------- surface

double sphere_volume(int k) {
  if (k < 0) throw Error(ErrorKind::domain, fmt::format("sphere dimension {} < 0", k));
  const double h = 0.5 * (k + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

Meridian::Point SurfaceGeometry::at(double s) const {
  Meridian::Point q = meridian_->at(s / scale_);
  q.r *= scale_;
  return q;
}

SurfaceGeometry measure(std::shared_ptr<const WarpProfile> p, int n, const CurvatureModel& model,
                        ExecPolicy policy) {
  if (!p) throw Error(ErrorKind::domain, "measure: null profile");
  if (n < 2) throw Error(ErrorKind::domain, fmt::format("dimension n = {} < 2", n));
  SurfaceGeometry g;
  g.n_ = n;
  g.meridian_ = std::make_shared<const Meridian>(p);
  g.omega_ = sphere_volume(n - 1);
  g.report_ = curvature_report(*p, n, model, policy);
  const Meridian& mer = *g.meridian_;
  for (auto& c : g.report_.samples) c.s = mer.s_of_t(c.t);

  const double cap = numerics::integrate([&](double th) { return std::pow(std::sin(th), n - 1); }, 0.0,
                                         mer.cap_angle(), numerics::QuadratureRule::simpson(kCapPanels), policy);

  // neck intervals between consecutive samples in [-eta, eta]
  std::vector<double> nodes;
  for (double t : p->t())
    if (std::abs(t) <= p->eta()) nodes.push_back(t);
  const long K = static_cast<long>(nodes.size()) - 1;
  std::vector<double> dv(std::max(K, 0L)), dh(std::max(K, 0L));
  auto one = [&](long k) {
    const auto rule = numerics::QuadratureRule::simpson(kNeckPanels);
    auto w = [&](double u, bool h2) {
      const Jet j = p->eval(u);
      double v = std::pow(j.r, n - 1) * speed(j);
      if (h2) {
        const Curvatures kc = model ? model(j) : curvatures_from_jet(j);
        const double H = scal_and_mean(kc.kappa_t, kc.kappa_theta, n).mean;
        v *= H * H;
      }
      return v;
    };
    dv[k] = numerics::integrate([&](double u) { return w(u, false); }, nodes[k], nodes[k + 1], rule);
    dh[k] = numerics::integrate([&](double u) { return w(u, true); }, nodes[k], nodes[k + 1], rule);
  };
  if (policy == ExecPolicy::parallel) {
    std::exception_ptr err;
#pragma omp parallel for schedule(static)
    for (long k = 0; k < K; ++k) {
      try {
        one(k);
      } catch (...) {
#pragma omp critical(pinch_measure_throw)
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (long k = 0; k < K; ++k) one(k);
  }
  double neck_v = 0, neck_h = 0;
  for (long k = 0; k < K; ++k) {
    neck_v += dv[k];
    neck_h += dh[k];
  }
  g.vol_ = g.omega_ * (2.0 * cap + neck_v);
  g.h2_ = g.omega_ * (2.0 * cap + neck_h);
  if (!std::isfinite(g.vol_) || !std::isfinite(g.h2_))
    throw Error(ErrorKind::singularity, "volume or H^2 integral is not finite");

  g.min_scal_ = std::numeric_limits<double>::infinity();
  g.min_scal_strip_ = std::numeric_limits<double>::infinity();
  const double e2 = p->eta() * p->eta();
  for (const auto& c : g.report_.samples) {
    g.min_scal_ = std::min(g.min_scal_, c.scal);
    if (std::abs(c.t) <= e2) g.min_scal_strip_ = std::min(g.min_scal_strip_, c.scal);
  }
  return g;
}

SurfaceGeometry measure(const WarpProfile& p, int n) {
  return measure(std::make_shared<const WarpProfile>(p), n);
}

SurfaceGeometry rescale(const SurfaceGeometry& g, double c) {
  if (!(c > 0) || !std::isfinite(c))
    throw Error(ErrorKind::domain, fmt::format("rescale factor must be > 0, got {}", c));
  SurfaceGeometry out = g;
  if (c == 1.0) return out;
  const int n = g.n_;
  out.scale_ = g.scale_ * c;
  out.vol_ = g.vol_ * std::pow(c, n);
  out.h2_ = g.h2_ * std::pow(c, n - 2);
  out.min_scal_ = g.min_scal_ / (c * c);
  out.min_scal_strip_ = g.min_scal_strip_ / (c * c);
  for (auto& smp : out.report_.samples) {
    smp.s *= c;
    smp.kappa_t /= c;
    smp.kappa_theta /= c;
    smp.scal /= c * c;
    smp.mean /= c;
  }
  return out;
}

}  // namespace pinch
