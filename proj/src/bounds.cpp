#include "pinch/bounds.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace pinch {

namespace {

void check_n(int n) {
  if (n < 2) throw Error(ErrorKind::domain, fmt::format("dimension n = {} < 2", n));
}

}  // namespace

double friedrich_bound(int n, double min_scal) {
  check_n(n);
  return n / (4.0 * (n - 1)) * min_scal;
}

double conjecture_bound(int n, double min_scal) {
  if (n < 3) throw Error(ErrorKind::domain, fmt::format("conjectured bound needs n >= 3, got {}", n));
  return (n - 1) / (4.0 * (n - 2)) * min_scal;
}

std::string to_string(MetricClass c) {
  switch (c) {
    case MetricClass::general: return "general";
    case MetricClass::kaehler_odd: return "kaehler_odd";
    case MetricClass::kaehler_even: return "kaehler_even";
    case MetricClass::quaternionic: return "quaternionic";
    case MetricClass::parallel_one_form: return "parallel_one_form";
  }
  return "unknown";
}

double class_constant(int n, MetricClass c) {
  check_n(n);
  auto reject = [&](const char* why) {
    return Error(ErrorKind::domain, fmt::format("class {} does not apply for n = {}: {}", to_string(c), n, why));
  };
  switch (c) {
    case MetricClass::general:
      return n / (4.0 * (n - 1));
    case MetricClass::kaehler_odd:
      if (n % 2 != 0 || (n / 2) % 2 != 1) throw reject("needs n even with n/2 odd");
      return (n + 2) / (4.0 * n);
    case MetricClass::kaehler_even:
      if (n % 4 != 0) throw reject("needs n even with n/2 even");
      return n / (4.0 * (n - 2));
    case MetricClass::quaternionic:
      if (n % 4 != 0) throw reject("needs n divisible by 4");
      return (n + 12) / (4.0 * (n + 8));
    case MetricClass::parallel_one_form:
      if (n < 3) throw reject("needs n >= 3");
      return (n - 2) / (4.0 * (n - 1));
  }
  throw reject("unknown class");
}

std::map<std::string, double> class_constants(int n) {
  std::map<std::string, double> out;
  for (auto c : {MetricClass::general, MetricClass::kaehler_odd, MetricClass::kaehler_even,
                 MetricClass::quaternionic, MetricClass::parallel_one_form}) {
    try {
      out[to_string(c)] = class_constant(n, c);
    } catch (const Error&) {
    }
  }
  return out;
}

double extrinsic_bound(const SurfaceGeometry& g) {
  const int n = g.dimension();
  return n * n * g.h2_integral() / (4.0 * g.volume());
}

bool CutoffChain::ordered(double tol) const {
  return lambda1 <= quotient_bound + tol && quotient_bound <= volume_bound + tol && volume_bound <= final_bound + tol;
}

CutoffChain cutoff_chain(const SurfaceGeometry& g, const RadialEigenspinor& phi, double r, double r0) {
  const std::size_t N = phi.s_grid.size();
  if (N < 2 || phi.density.size() != N) throw Error(ErrorKind::dimension, "eigenspinor has no samples");
  const double L = g.length();
  const double h = phi.s_grid[1] - phi.s_grid[0];
  if (!(r0 > 0) || !(2 * r0 < L))
    throw Error(ErrorKind::domain, fmt::format("need 0 < 2 r0 < L, got r0 = {}, L = {}", r0, L));
  if (!(r > 0) || r > r0) throw Error(ErrorKind::domain, fmt::format("need 0 < r <= r0, got r = {}, r0 = {}", r, r0));
  if (r < 4 * h)
    throw Error(ErrorKind::domain, fmt::format("r = {} is below four grid spacings ({}); refine the spinor", r, 4 * h));

  const int n = g.dimension();
  const double omega = g.sphere_factor();
  std::vector<double> dv(N), mass(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double rr = g.at(phi.s_grid[i]).r;
    dv[i] = h * omega * std::pow(rr, n - 1);
    mass[i] = dv[i] * phi.density[i];
  }
  // prefix sums over nodes with s_i < rho
  std::vector<double> vol_prefix(N + 1, 0.0), mass_prefix(N + 1, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    vol_prefix[i + 1] = vol_prefix[i] + dv[i];
    mass_prefix[i + 1] = mass_prefix[i] + mass[i];
  }
  auto count_below = [&](double rho) {
    return static_cast<std::size_t>(std::lower_bound(phi.s_grid.begin(), phi.s_grid.end(), rho) - phi.s_grid.begin());
  };
  const double total = mass_prefix[N];
  const std::size_t k2r = count_below(2 * r);
  const std::size_t k2r0 = count_below(2 * r0);
  const double inner = mass_prefix[k2r];
  const double outer = total - inner;
  const double outer0 = total - mass_prefix[k2r0];

  CutoffChain ch;
  ch.r = r;
  ch.r0 = r0;
  ch.lambda1 = phi.lambda * phi.lambda;
  ch.ball_volume = vol_prefix[k2r];
  ch.quotient_bound = ch.lambda1 + 4.0 / (r * r) * inner / outer;
  ch.volume_bound = ch.lambda1 + 4.0 / (r * r) * ch.ball_volume * phi.sup_norm_sq / outer0;

  // sup over rho in [8h, 2 r0] of vol(B_rho)/rho^n; the step function is
  // right-continuous in the node count so the supremum sits at rho = 8h or
  // just past a node.
  const double lo = 8 * h;
  double vstar = vol_prefix[count_below(lo)] / std::pow(lo, n);
  for (std::size_t i = 0; i < N && phi.s_grid[i] < 2 * r0; ++i)
    if (phi.s_grid[i] >= lo) vstar = std::max(vstar, vol_prefix[i + 1] / std::pow(phi.s_grid[i], n));
  ch.C = 4.0 * std::pow(2.0, n) * vstar * phi.sup_norm_sq / outer0;
  ch.final_bound = ch.lambda1 + ch.C * std::pow(r, n - 2);
  ch.excess = ch.quotient_bound - ch.lambda1;
  return ch;
}

double radius_for_excess(double delta, double C, int n) {
  if (n < 3) throw Error(ErrorKind::domain, fmt::format("radius_for_excess needs n >= 3, got {}", n));
  if (!(delta > 0) || !(C > 0))
    throw Error(ErrorKind::domain, fmt::format("need delta > 0 and C > 0, got {} and {}", delta, C));
  return std::pow(delta / C, 1.0 / (n - 2));
}

BoundsReport bounds_report(const SurfaceGeometry& g, const SpectrumResult* spectrum, const RadialEigenspinor* phi) {
  BoundsReport rep;
  rep.n = g.dimension();
  rep.min_scal = g.min_scal();
  rep.friedrich = friedrich_bound(rep.n, rep.min_scal);
  if (rep.n >= 3) rep.conjecture = conjecture_bound(rep.n, rep.min_scal);
  rep.extrinsic = extrinsic_bound(g);
  rep.class_constants = class_constants(rep.n);
  if (spectrum) {
    rep.lambda1_sq = spectrum->lambda1_sq;
    if (phi) {
      const double r0 = default_r0(g);
      rep.cutoff = cutoff_chain(g, *phi, 0.5 * r0, r0);
    }
  }
  return rep;
}

}  // namespace pinch
