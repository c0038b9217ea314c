#include "pinch/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

namespace pinch {

namespace {

using Gauss = boost::math::quadrature::gauss<double, 16>;

// Unscaled meridian data on the midpoint grid, shared by all modes.
struct Sampling {
  int N = 0;
  double h = 0;
  double s0 = 0;
  std::vector<double> s, phi, r;
  std::vector<double> cell_phi;  // 16 per cell, cell i spans [s_i, s_{i+1}]
};

constexpr int kGaussPoints = 16;

Sampling sample_meridian(const Meridian& mer, int N, ExecPolicy policy) {
  Sampling smp;
  smp.N = N;
  smp.h = mer.length() / N;
  smp.s0 = 0.5 * smp.h;
  smp.s.resize(N);
  smp.phi.resize(N);
  smp.r.resize(N);
  smp.cell_phi.resize(static_cast<std::size_t>(N - 1) * kGaussPoints);
  const auto& abscissa = Gauss::abscissa();
  // gauss<16> stores the 8 non-negative abscissae
  auto node = [&](long i) {
    const double s = (i + 0.5) * smp.h;
    const auto q = mer.at(s);
    smp.s[i] = s;
    smp.phi[i] = q.phi;
    smp.r[i] = q.r;
    if (i + 1 < N) {
      const double mid = s + 0.5 * smp.h;
      const double half = 0.5 * smp.h;
      for (std::size_t k = 0; k < abscissa.size(); ++k) {
        smp.cell_phi[i * kGaussPoints + 2 * k] = mer.at(mid - half * abscissa[k]).phi;
        smp.cell_phi[i * kGaussPoints + 2 * k + 1] = mer.at(mid + half * abscissa[k]).phi;
      }
    }
  };
  if (policy == ExecPolicy::parallel) {
    std::exception_ptr err;
#pragma omp parallel for schedule(static)
    for (long i = 0; i < N; ++i) {
      try {
        node(i);
      } catch (...) {
#pragma omp critical(pinch_sampling_throw)
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (long i = 0; i < N; ++i) node(i);
  }
  return smp;
}

// int_0^{s0} (tan(s/2)/tan(s0/2))^p ds, infinite for p <= -1.
double pole_half_cell(double s0, double p) {
  if (p <= -1.0) return std::numeric_limits<double>::infinity();
  const double k = 1.0 / (p + 1.0);
  const double ts0 = std::tan(0.5 * s0);
  auto g = [&](double y) {
    if (y <= 0) return std::pow(0.5 * s0 / ts0, p);
    const double s = s0 * std::pow(y, k);
    return std::pow((std::tan(0.5 * s) / ts0) / (s / s0), p);
  };
  return s0 * k * Gauss::integrate(g, 0.0, 1.0);
}

struct Couplings {
  std::vector<double> G;     // -eps mu phi at nodes
  std::vector<double> J;     // cell kernels int exp(2G - G_i - G_{i+1}) ds
  double north = 0, south = 0;  // pole half-cell integrals (inf: natural end)
};

Couplings couplings(const Sampling& smp, double mu, int eps) {
  Couplings c;
  const int N = smp.N;
  const double a = -eps * mu;
  c.G.resize(N);
  for (int i = 0; i < N; ++i) c.G[i] = a * smp.phi[i];
  c.J.resize(N - 1);
  const auto& w = Gauss::weights();
  for (int i = 0; i + 1 < N; ++i) {
    const double base = c.G[i] + c.G[i + 1];
    double acc = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      acc += w[k] * (std::exp(2 * a * smp.cell_phi[i * kGaussPoints + 2 * k] - base) +
                     std::exp(2 * a * smp.cell_phi[i * kGaussPoints + 2 * k + 1] - base));
    }
    c.J[i] = 0.5 * smp.h * acc;
  }
  c.north = pole_half_cell(smp.s0, 2 * a);
  c.south = pole_half_cell(smp.s0, -2 * a);
  return c;
}

numerics::TridiagSpec assemble(const Sampling& smp, const Couplings& c, double scale) {
  const int N = smp.N;
  const double h = smp.h;
  numerics::TridiagSpec T;
  T.diag.assign(N, 0.0);
  T.offdiag.assign(N - 1, 0.0);
  for (int i = 0; i + 1 < N; ++i) {
    const double k = 1.0 / (h * c.J[i]);
    T.offdiag[i] = -k;
    T.diag[i] += std::exp(c.G[i] - c.G[i + 1]) * k;
    T.diag[i + 1] += std::exp(c.G[i + 1] - c.G[i]) * k;
  }
  if (std::isfinite(c.north)) T.diag[0] += 1.0 / (h * c.north);
  if (std::isfinite(c.south)) T.diag[N - 1] += 1.0 / (h * c.south);
  const double c2 = scale * scale;
  for (auto& v : T.diag) v /= c2;
  for (auto& v : T.offdiag) v /= c2;
  for (int i = 0; i < N; ++i)
    if (!std::isfinite(T.diag[i]))
      throw Error(ErrorKind::singularity,
                  fmt::format("mode operator is not finite at s = {}", smp.s[i]));
  return T;
}

void check_mode(double mu, int eps, int grid_size) {
  if (mu == 0 || !std::isfinite(mu)) throw Error(ErrorKind::domain, "mode value mu must be finite and nonzero");
  if (eps != 1 && eps != -1) throw Error(ErrorKind::domain, fmt::format("chirality sign must be +-1, got {}", eps));
  if (grid_size < kMinModeGrid)
    throw Error(ErrorKind::domain, fmt::format("mode grid {} < {}", grid_size, kMinModeGrid));
}

double smallest(const numerics::TridiagSpec& T) { return numerics::tridiag_smallest(T, 1)[0]; }

double first_excluded(int n, int m_max) { return 0.5 * (n - 1) + m_max + 1; }

}  // namespace

std::vector<double> mode_set(int n, int m_max) {
  if (n < 2) throw Error(ErrorKind::domain, fmt::format("dimension n = {} < 2", n));
  if (m_max < 0) throw Error(ErrorKind::domain, fmt::format("m_max = {} < 0", m_max));
  std::vector<double> out;
  for (int m = 0; m <= m_max; ++m) {
    const double mu = 0.5 * (n - 1) + m;
    out.push_back(-mu);
    out.push_back(mu);
  }
  return out;
}

double mode_potential(const SurfaceGeometry& g, double mu, int eps, double s) {
  const auto q = g.at(s);
  const double v = (mu * mu - eps * mu * q.dr) / (q.r * q.r);
  if (!std::isfinite(v))
    throw Error(ErrorKind::singularity, fmt::format("mode potential is {} at s = {}", v, s));
  return v;
}

numerics::TridiagSpec mode_matrix(const SurfaceGeometry& g, double mu, int eps, int grid_size, ExecPolicy policy) {
  check_mode(mu, eps, grid_size);
  const Sampling smp = sample_meridian(g.meridian(), grid_size, policy);
  return assemble(smp, couplings(smp, mu, eps), g.scale());
}

double mode_lambda1(const SurfaceGeometry& g, double mu, int eps, int grid_size, ExecPolicy policy) {
  return smallest(mode_matrix(g, mu, eps, grid_size, policy));
}

SpectrumResult dirac_lambda1(const SurfaceGeometry& g, int m_max, int grid_size, ExecPolicy policy) {
  const int n = g.dimension();
  if (m_max < 0 || m_max > kMaxModeCutoff)
    throw Error(ErrorKind::domain, fmt::format("m_max must lie in [0, {}], got {}", kMaxModeCutoff, m_max));
  check_mode(1.0, 1, grid_size);
  if (grid_size % 2 != 0) throw Error(ErrorKind::domain, "mode grid must be even for Richardson levels");

  const Meridian& mer = g.meridian();
  const Sampling coarse = sample_meridian(mer, grid_size, policy);
  const Sampling fine = sample_meridian(mer, 2 * grid_size, policy);
  const double c = g.scale();

  double r_max = 1.0;
  if (!g.profile().is_round()) r_max = 1.0 / std::sqrt(1.0 - 4.0 * g.profile().eta() * g.profile().eta());
  for (double r : g.profile().r()) r_max = std::max(r_max, r);
  r_max *= c;
  auto certificate = [&](int m) {
    const double mu = first_excluded(n, m);
    return (mu * mu - mu) / (r_max * r_max);
  };

  SpectrumResult res;
  res.scale = c;
  res.m_max_requested = m_max;

  auto solve_modes = [&](const std::vector<std::pair<double, int>>& todo) {
    std::vector<ModeValue> out(todo.size());
    auto one = [&](long j) {
      const auto [mu, eps] = todo[j];
      const double lc = smallest(assemble(coarse, couplings(coarse, mu, eps), c));
      const double lf = smallest(assemble(fine, couplings(fine, mu, eps), c));
      out[j] = {mu, eps, lf + (lf - lc) / 3.0, lc, lf};
    };
    const long m = static_cast<long>(todo.size());
    if (policy == ExecPolicy::parallel) {
      std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
      for (long j = 0; j < m; ++j) {
        try {
          one(j);
        } catch (...) {
#pragma omp critical(pinch_modes_throw)
          if (!err) err = std::current_exception();
        }
      }
      if (err) std::rethrow_exception(err);
    } else {
      for (long j = 0; j < m; ++j) one(j);
    }
    return out;
  };
  auto modes_for = [&](int m_lo, int m_hi) {
    std::vector<std::pair<double, int>> todo;
    for (int m = m_lo; m <= m_hi; ++m) {
      const double mu = 0.5 * (n - 1) + m;
      for (double sm : {-mu, mu})
        for (int eps : {-1, 1}) todo.emplace_back(sm, eps);
    }
    return todo;
  };

  res.per_mode = solve_modes(modes_for(0, m_max));
  int m_cur = m_max;
  auto current_min = [&] {
    double v = std::numeric_limits<double>::infinity();
    for (const auto& mv : res.per_mode) v = std::min(v, mv.lambda);
    return v;
  };
  while (!(certificate(m_cur) > current_min())) {
    if (m_cur >= kMaxModeCutoff)
      throw Error(ErrorKind::certificate,
                  fmt::format("mode cutoff certificate {} does not exceed lambda_1 = {} within m_max = {}",
                              certificate(m_cur), current_min(), kMaxModeCutoff));
    ++m_cur;
    auto more = solve_modes(modes_for(m_cur, m_cur));
    res.per_mode.insert(res.per_mode.end(), more.begin(), more.end());
  }
  res.m_max = m_cur;
  res.mode_cutoff_certificate = certificate(m_cur);
  std::sort(res.per_mode.begin(), res.per_mode.end(), [](const ModeValue& a, const ModeValue& b) {
    return a.mu != b.mu ? a.mu < b.mu : a.eps < b.eps;
  });

  const ModeValue* ground = &res.per_mode.front();
  for (const auto& mv : res.per_mode)
    if (mv.lambda < ground->lambda) ground = &mv;
  res.lambda1_sq = ground->lambda;
  res.ground_mu = ground->mu;
  res.ground_eps = ground->eps;

  const Sampling half = sample_meridian(mer, grid_size / 2, policy);
  const double lh = smallest(assemble(half, couplings(half, ground->mu, ground->eps), c));
  res.richardson = {grid_size, 2 * grid_size, ground->coarse, ground->fine, ground->lambda, 0.0};
  const double ratio = (lh - ground->coarse) / (ground->coarse - ground->fine);
  if (std::isfinite(ratio) && ratio > 0) res.richardson.order = std::log2(ratio);

  const auto T = assemble(fine, couplings(fine, ground->mu, ground->eps), c);
  res.ground_grid = 2 * grid_size;
  res.ground_vector = numerics::tridiag_eigenvector(T, ground->fine);
  return res;
}

RadialEigenspinor eigenspinor_profile(const SurfaceGeometry& g, const SpectrumResult& result) {
  const int N = result.ground_grid;
  if (N < 2 || static_cast<int>(result.ground_vector.size()) != N)
    throw Error(ErrorKind::dimension, "spectrum result carries no ground eigenvector");
  const Sampling smp = sample_meridian(g.meridian(), N, ExecPolicy::serial);
  const Couplings cp = couplings(smp, result.ground_mu, result.ground_eps);
  const double c = g.scale();
  const double h = smp.h;
  const double lam2 = smallest(assemble(smp, cp, 1.0));
  if (!(lam2 > 0)) throw Error(ErrorKind::singularity, "ground eigenvalue is not positive; no partner component");
  const double lam = std::sqrt(lam2);

  RadialEigenspinor out;
  out.mu = result.ground_mu;
  out.eps = result.ground_eps;
  out.u1.resize(N);
  out.u2.resize(N);
  for (int i = 0; i < N; ++i) out.u1[i] = result.ground_vector[i] / std::sqrt(h);
  const auto& u = out.u1;
  const auto& G = cp.G;
  for (int i = 0; i < N; ++i) {
    double left, right;
    if (i == 0)
      left = std::isfinite(cp.north) ? u[0] / (lam * cp.north) : 0.0;
    else
      left = (std::exp(G[i] - G[i - 1]) * u[i] - u[i - 1]) / (lam * cp.J[i - 1]);
    if (i == N - 1)
      right = std::isfinite(cp.south) ? -u[i] / (lam * cp.south) : 0.0;
    else
      right = (u[i + 1] - std::exp(G[i] - G[i + 1]) * u[i]) / (lam * cp.J[i]);
    out.u2[i] = 0.5 * (left + right);
  }
  double norm = 0;
  for (int i = 0; i < N; ++i) norm += h * (out.u1[i] * out.u1[i] + out.u2[i] * out.u2[i]);
  const double inv = 1.0 / std::sqrt(norm);
  for (int i = 0; i < N; ++i) {
    out.u1[i] *= inv;
    out.u2[i] *= inv;
  }

  // A* u2 = -e^G (e^{-G} u2)' must reproduce lambda u1
  double res2 = 0;
  for (int i = 1; i + 1 < N; ++i) {
    const double dz = (std::exp(G[i] - G[i + 1]) * out.u2[i + 1] - std::exp(G[i] - G[i - 1]) * out.u2[i - 1]) / (2 * h);
    const double d = -dz - lam * out.u1[i];
    res2 += h * d * d;
  }

  const int n = g.dimension();
  const double omega = g.sphere_factor();
  out.s_grid.resize(N);
  out.density.resize(N);
  const double cn = std::pow(c, n);
  const double sc = std::sqrt(c);
  double total = 0;
  for (int i = 0; i < N; ++i) {
    out.s_grid[i] = c * smp.s[i];
    const double w = out.u1[i] * out.u1[i] + out.u2[i] * out.u2[i];
    out.density[i] = w / (omega * std::pow(smp.r[i], n - 1) * cn);
    total += c * h * omega * std::pow(c * smp.r[i], n - 1) * out.density[i];
    out.u1[i] /= sc;
    out.u2[i] /= sc;
  }
  out.norm = total;
  out.sup_norm_sq = *std::max_element(out.density.begin(), out.density.end());
  out.lambda = lam / c;
  out.residual = std::sqrt(res2) / c;
  return out;
}

std::array<std::array<double, 2>, 2> clifford_radial() { return {{{0.0, -1.0}, {1.0, 0.0}}}; }

}  // namespace pinch
