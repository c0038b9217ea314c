#pragma once

#include <array>
#include <vector>

#include "pinch/exec.hpp"
#include "pinch/geometry.hpp"
#include "pinch/numerics.hpp"

namespace pinch {

/// Cross-section Dirac eigenvalues +-((n-1)/2 + m), 0 <= m <= m_max, ordered
/// by |mu| with the negative value first.
std::vector<double> mode_set(int n, int m_max);

/// mu^2/r^2 - eps mu r'/r^2 at scaled arclength s.
double mode_potential(const SurfaceGeometry& g, double mu, int eps, double s);

/// Discrete mode operator A*A, A = d/ds - eps mu / r, on the midpoint grid
/// s_i = (i + 1/2) L/N, in the scaled metric. Cell couplings use the exact
/// integrating-factor kernel, so the critical n = 2 mode stays bounded below.
numerics::TridiagSpec mode_matrix(const SurfaceGeometry& g, double mu, int eps, int grid_size,
                                  ExecPolicy policy = ExecPolicy::serial);

inline constexpr int kMinModeGrid = 256;
inline constexpr int kMaxModeCutoff = 64;

/// Smallest eigenvalue of one mode operator at a single resolution.
double mode_lambda1(const SurfaceGeometry& g, double mu, int eps, int grid_size,
                    ExecPolicy policy = ExecPolicy::serial);

struct ModeValue {
  double mu = 0;
  int eps = 1;
  double lambda = 0;  // extrapolated
  double coarse = 0;  // at grid_size
  double fine = 0;    // at 2 grid_size
};

struct Richardson {
  int grid_coarse = 0;
  int grid_fine = 0;
  double coarse = 0;
  double fine = 0;
  double extrapolated = 0;
  double order = 0;  // measured from grid/2, grid, 2 grid
};

struct SpectrumResult {
  double scale = 1;
  double lambda1_sq = 0;
  std::vector<ModeValue> per_mode;  // sorted by (mu, eps)
  int m_max = 0;                    // after any automatic increase
  int m_max_requested = 0;
  double mode_cutoff_certificate = 0;
  Richardson richardson;  // of the ground mode
  double ground_mu = 0;
  int ground_eps = 1;
  int ground_grid = 0;
  std::vector<double> ground_vector;  // unit eigenvector at ground_grid
};

/// lambda_1(D^2) as the minimum over mode_set(n, m_max) x {+1, -1}, each
/// Richardson-extrapolated from grid_size and 2 grid_size. m_max grows until
/// (mu^2 - |mu|)/max r^2 for the first excluded mode exceeds the minimum;
/// ErrorKind::certificate beyond kMaxModeCutoff.
SpectrumResult dirac_lambda1(const SurfaceGeometry& g, int m_max, int grid_size,
                             ExecPolicy policy = ExecPolicy::serial);

struct RadialEigenspinor {
  std::vector<double> s_grid;  // scaled arclength nodes
  std::vector<double> u1, u2;  // mode components, int (u1^2 + u2^2) ds = 1
  std::vector<double> density;  // |phi|^2, int density dV = 1
  double sup_norm_sq = 0;
  double lambda = 0;  // positive square root of the ground eigenvalue
  double norm = 0;    // int density dV by node quadrature
  double residual = 0;  // L2 norm of the first-order defect
  double mu = 0;
  int eps = 1;
};

/// Rebuilds the ground eigenspinor from the stored eigenvector.
/// ErrorKind::singularity if lambda vanishes.
RadialEigenspinor eigenspinor_profile(const SurfaceGeometry& g, const SpectrumResult& result);

/// Clifford multiplication by the unit radial vector in the mode frame.
std::array<std::array<double, 2>, 2> clifford_radial();

}  // namespace pinch
