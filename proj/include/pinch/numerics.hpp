#pragma once

#include <cmath>
#include <algorithm>
#include <array>
#include <cstddef>
#include <exception>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "pinch/error.hpp"
#include "pinch/exec.hpp"

namespace pinch::numerics {

/// Composite Newton-Cotes rule. Only order 4 (Simpson) is provided.
struct QuadratureRule {
  int panel_count = 64;
  int order = 4;

  static QuadratureRule simpson(int panels) { return {panels, 4}; }
};

void check_rule(const QuadratureRule& rule);

[[noreturn]] void throw_non_finite(double x, double fx);

/// Composite Simpson approximation of the integral of f over [a, b].
/// Samples are evaluated first (in parallel under ExecPolicy::parallel) and
/// then summed in a fixed order, so both policies give identical bits.
template <class F>
double integrate(F&& f, double a, double b, QuadratureRule rule,
                 ExecPolicy policy = ExecPolicy::serial) {
  check_rule(rule);
  if (!(a <= b))
    throw Error(ErrorKind::domain, fmt::format("integrate: need a <= b, got [{}, {}]", a, b));
  if (a == b) return 0.0;
  const int m = rule.panel_count;
  const double h = (b - a) / m;
  std::vector<double> fx(static_cast<std::size_t>(m) + 1);
  auto sample = [&](int i) {
    const double x = (i == m) ? b : a + i * h;
    const double v = f(x);
    if (!std::isfinite(v)) throw_non_finite(x, v);
    return v;
  };
  if (policy == ExecPolicy::parallel) {
    // Non-finite samples are reported at the smallest offending x so the
    // message does not depend on thread scheduling.
    int bad = m + 1;
    std::exception_ptr thrown;
#pragma omp parallel for schedule(static) reduction(min : bad)
    for (int i = 0; i <= m; ++i) {
      try {
        const double x = (i == m) ? b : a + i * h;
        fx[i] = f(x);
        if (!std::isfinite(fx[i])) bad = std::min(bad, i);
      } catch (...) {
#pragma omp critical(pinch_integrate_throw)
        if (!thrown) thrown = std::current_exception();
      }
    }
    if (thrown) std::rethrow_exception(thrown);
    if (bad <= m) throw_non_finite(bad == m ? b : a + bad * h, fx[bad]);
  } else {
    for (int i = 0; i <= m; ++i) fx[i] = sample(i);
  }
  double odd = 0, even = 0;
  for (int i = 1; i < m; i += 2) odd += fx[i];
  for (int i = 2; i < m; i += 2) even += fx[i];
  return h / 3.0 * (fx[0] + 4.0 * odd + 2.0 * even + fx[m]);
}

/// Symmetric tridiagonal matrix: diag has m entries, offdiag m-1.
struct TridiagSpec {
  std::vector<double> diag;
  std::vector<double> offdiag;

  std::size_t size() const { return diag.size(); }
};

void check_tridiag(const TridiagSpec& spec);

/// Number of eigenvalues strictly below x (Sturm sequence / LDL^T inertia).
std::size_t sturm_count(const TridiagSpec& spec, double x);

/// The k smallest eigenvalues, ascending, each bisected to relative width 1e-13.
std::vector<double> tridiag_smallest(const TridiagSpec& spec, std::size_t k,
                                     ExecPolicy policy = ExecPolicy::serial);

/// Unit eigenvector for an (already accurate) eigenvalue, by inverse iteration.
/// Sign convention: the largest-magnitude component is positive.
std::vector<double> tridiag_eigenvector(const TridiagSpec& spec, double lambda);

/// C-infinity step: 0 for x <= 0, 1 for x >= 1, flat to all orders at both ends,
/// psi(x) + psi(1 - x) = 1.
double smooth_step(double x);

/// Quintic Hermite interpolant on [x0, x1] matching value, first and second
/// derivative at both ends. operator() returns {p, p', p''}.
class QuinticHermite {
 public:
  QuinticHermite(double x0, double x1, std::array<double, 3> left, std::array<double, 3> right);
  std::array<double, 3> operator()(double x) const;

 private:
  std::array<double, 6> c_{};
  double x0_ = 0, h_ = 1;
};

/// Root of f in [lo, hi] by bisection; stops when the bracket is narrower than tol.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol);

}  // namespace pinch::numerics
