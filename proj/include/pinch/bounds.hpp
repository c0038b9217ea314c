#pragma once

#include <map>
#include <optional>
#include <string>

#include "pinch/geometry.hpp"
#include "pinch/spectral.hpp"

namespace pinch {

/// lambda^2 >= n/(4(n-1)) min Scal.
double friedrich_bound(int n, double min_scal);

/// (n-1)/(4(n-2)) min Scal; n >= 3.
double conjecture_bound(int n, double min_scal);

enum class MetricClass { general, kaehler_odd, kaehler_even, quaternionic, parallel_one_form };

std::string to_string(MetricClass c);

/// Improved Friedrich coefficient for a metric class. ErrorKind::domain when
/// the class does not exist in dimension n.
double class_constant(int n, MetricClass c);

/// All classes that apply in dimension n with their coefficients.
std::map<std::string, double> class_constants(int n);

/// n^2/(4 vol) int H^2 dV.
double extrinsic_bound(const SurfaceGeometry& g);

struct CutoffChain {
  double r = 0;
  double r0 = 0;
  double lambda1 = 0;         // lambda_1(D^2)
  double quotient_bound = 0;  // lambda_1 + (4/r^2) int_{B_2r}|phi|^2 / int_{M-B_2r}|phi|^2
  double volume_bound = 0;    // lambda_1 + (4/r^2) vol(B_2r) sup|phi|^2 / int_{M-B_2r0}|phi|^2
  double final_bound = 0;     // lambda_1 + C r^{n-2}
  double C = 0;
  double excess = 0;  // quotient_bound - lambda_1
  double ball_volume = 0;  // vol(B_2r)
  bool ordered(double tol = 1e-9) const;
};

inline double default_r0(const SurfaceGeometry& g) { return g.length() / 8.0; }

/// Balls are centred at the north pole, B_rho = {s < rho}. Integrals use the
/// eigenspinor's node quadrature. Requires 4h <= r <= r0 and 2 r0 < L.
CutoffChain cutoff_chain(const SurfaceGeometry& g, const RadialEigenspinor& phi, double r, double r0);

/// (delta / C)^{1/(n-2)}, the radius at which C r^{n-2} = delta. n >= 3.
double radius_for_excess(double delta, double C, int n);

struct BoundsReport {
  int n = 2;
  double min_scal = 0;
  double friedrich = 0;
  std::optional<double> conjecture;
  double extrinsic = 0;
  std::map<std::string, double> class_constants;
  std::optional<double> lambda1_sq;
  std::optional<CutoffChain> cutoff;
};

/// Bounds of g; the cutoff chain (at r = r0/2) needs a spectrum.
BoundsReport bounds_report(const SurfaceGeometry& g, const SpectrumResult* spectrum = nullptr,
                           const RadialEigenspinor* phi = nullptr);

}  // namespace pinch
