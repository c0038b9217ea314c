#include "pinch/numerics.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

namespace pinch::numerics {

void check_rule(const QuadratureRule& rule) {
  if (rule.order != 4)
    throw Error(ErrorKind::domain, fmt::format("quadrature order {} unsupported (only 4)", rule.order));
  if (rule.panel_count < 4 || rule.panel_count % 2 != 0)
    throw Error(ErrorKind::domain,
                fmt::format("panel_count must be even and >= 4, got {}", rule.panel_count));
}

void throw_non_finite(double x, double fx) {
  throw Error(ErrorKind::singularity, fmt::format("integrand is {} at x = {:.17g}", fx, x));
}

void check_tridiag(const TridiagSpec& spec) {
  const std::size_t m = spec.diag.size();
  if (m == 0) throw Error(ErrorKind::dimension, "tridiagonal matrix is empty");
  if (spec.offdiag.size() != m - 1)
    throw Error(ErrorKind::dimension, fmt::format("offdiag has {} entries, expected {}",
                                                  spec.offdiag.size(), m - 1));
  for (double v : spec.diag)
    if (!std::isfinite(v)) throw Error(ErrorKind::domain, "non-finite diagonal entry");
  for (double v : spec.offdiag)
    if (!std::isfinite(v)) throw Error(ErrorKind::domain, "non-finite off-diagonal entry");
}

namespace {

double pivot_floor(const TridiagSpec& spec) {
  double emax = 1.0;
  for (double e : spec.offdiag) emax = std::max(emax, e * e);
  return DBL_MIN * emax;
}

std::size_t count_below(const TridiagSpec& spec, double x, double pivmin) {
  const std::size_t m = spec.diag.size();
  std::size_t count = 0;
  double q = spec.diag[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < m; ++i) {
    const double e = spec.offdiag[i - 1];
    q = spec.diag[i] - x - e * e / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++count;
  }
  return count;
}

}  // namespace

std::size_t sturm_count(const TridiagSpec& spec, double x) {
  check_tridiag(spec);
  return count_below(spec, x, pivot_floor(spec));
}

std::vector<double> tridiag_smallest(const TridiagSpec& spec, std::size_t k, ExecPolicy policy) {
  check_tridiag(spec);
  const std::size_t m = spec.size();
  if (k > m)
    throw Error(ErrorKind::dimension, fmt::format("requested {} eigenvalues of a {}x{} matrix", k, m, m));

  // Gershgorin enclosure
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < m; ++i) {
    const double left = i > 0 ? std::abs(spec.offdiag[i - 1]) : 0.0;
    const double right = i + 1 < m ? std::abs(spec.offdiag[i]) : 0.0;
    lo = std::min(lo, spec.diag[i] - left - right);
    hi = std::max(hi, spec.diag[i] + left + right);
  }
  const double pad = 4 * DBL_EPSILON * std::max(std::abs(lo), std::abs(hi)) + 1e-300;
  lo -= pad;
  hi += pad;
  const double pivmin = pivot_floor(spec);

  std::vector<double> out(k);
  auto solve_one = [&](std::size_t j) {
    double a = lo, b = hi;
    for (int it = 0; it < 400; ++it) {
      const double width = b - a;
      if (width <= 1e-13 * std::max(std::abs(a), std::abs(b)) || width <= 2 * pivmin) break;
      const double mid = a + 0.5 * width;
      if (mid <= a || mid >= b) break;
      if (count_below(spec, mid, pivmin) <= j)
        a = mid;
      else
        b = mid;
    }
    out[j] = a + 0.5 * (b - a);
  };
  const auto kk = static_cast<long>(k);
  if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long j = 0; j < kk; ++j) solve_one(static_cast<std::size_t>(j));
  } else {
    for (long j = 0; j < kk; ++j) solve_one(static_cast<std::size_t>(j));
  }
  return out;
}

std::vector<double> tridiag_eigenvector(const TridiagSpec& spec, double lambda) {
  check_tridiag(spec);
  const std::size_t n = spec.size();
  if (n == 1) return {1.0};

  // LU with partial pivoting of (T - lambda I), LAPACK gttrf layout.
  std::vector<double> dl(spec.offdiag), du(spec.offdiag), d(n), du2(n > 2 ? n - 2 : 0, 0.0);
  std::vector<char> swapped(n - 1, 0);
  double scale = 0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = spec.diag[i] - lambda;
    scale = std::max(scale, std::abs(spec.diag[i]) + (i > 0 ? std::abs(spec.offdiag[i - 1]) : 0.0));
  }
  const double tiny = DBL_EPSILON * std::max(scale, 1e-300);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0) d[i] = tiny;
      const double fact = dl[i] / d[i];
      dl[i] = fact;
      d[i + 1] -= fact * du[i];
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const double temp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = temp - fact * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  if (d[n - 1] == 0) d[n - 1] = tiny;

  auto solve = [&](std::vector<double>& b) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (swapped[i]) std::swap(b[i], b[i + 1]);
      b[i + 1] -= dl[i] * b[i];
    }
    b[n - 1] /= d[n - 1];
    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
  };
  auto normalize = [](std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    s = std::sqrt(s);
    for (double& x : v) x /= s;
  };

  // start vector with no special symmetry
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(i) + 0.3);
  normalize(v);
  for (int it = 0; it < 4; ++it) {
    solve(v);
    normalize(v);
  }
  const auto big = std::max_element(v.begin(), v.end(),
                                    [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*big < 0)
    for (double& x : v) x = -x;
  return v;
}

double smooth_step(double x) {
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(tol > 0)) throw Error(ErrorKind::domain, "bisect: tolerance must be positive");
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if (!std::isfinite(flo) || !std::isfinite(fhi) || (flo > 0) == (fhi > 0))
    throw Error(ErrorKind::bracketing,
                fmt::format("bisect: f({}) = {} and f({}) = {} do not bracket a root", lo, flo, hi, fhi));
  for (int it = 0; it < 500 && hi - lo > tol; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

}  // namespace pinch::numerics

namespace pinch::numerics {

QuinticHermite::QuinticHermite(double x0, double x1, std::array<double, 3> left,
                               std::array<double, 3> right)
    : x0_(x0), h_(x1 - x0) {
  if (!(h_ > 0)) throw Error(ErrorKind::domain, fmt::format("QuinticHermite: empty interval [{}, {}]", x0, x1));
  const double p0 = left[0], p1 = right[0];
  const double m0 = h_ * left[1], m1 = h_ * right[1];
  const double a0 = h_ * h_ * left[2], a1 = h_ * h_ * right[2];
  c_[0] = p0;
  c_[1] = m0;
  c_[2] = 0.5 * a0;
  c_[3] = -10 * p0 - 6 * m0 - 1.5 * a0 + 0.5 * a1 - 4 * m1 + 10 * p1;
  c_[4] = 15 * p0 + 8 * m0 + 1.5 * a0 - a1 + 7 * m1 - 15 * p1;
  c_[5] = -6 * p0 - 3 * m0 - 0.5 * a0 + 0.5 * a1 - 3 * m1 + 6 * p1;
}

std::array<double, 3> QuinticHermite::operator()(double x) const {
  const double u = (x - x0_) / h_;
  double p = c_[5], dp = 5 * c_[5], ddp = 20 * c_[5];
  for (int j = 4; j >= 0; --j) p = p * u + c_[j];
  for (int j = 4; j >= 1; --j) dp = dp * u + j * c_[j];
  for (int j = 4; j >= 2; --j) ddp = ddp * u + j * (j - 1) * c_[j];
  return {p, dp / h_, ddp / (h_ * h_)};
}

}  // namespace pinch::numerics
