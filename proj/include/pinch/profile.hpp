#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pinch/error.hpp"

namespace pinch {

/// Warping-function value with its first two t-derivatives.
struct Jet {
  double r = 0;
  double rdot = 0;
  double rddot = 0;
};

enum class CapSide { north, south };

struct FeasibilityCheck {
  std::string name;      // "eta<1/2", "S>1", "a", "b", "c"
  std::string relation;  // human-readable inequality, lhs <op> rhs
  double lhs = 0;
  double rhs = 0;
  bool pass = false;
};

struct FeasibilityReport {
  bool ok = false;
  std::vector<FeasibilityCheck> checks;

  std::vector<std::string> failed_names() const;
  std::string describe() const;
};

/// Evaluates the three neck inequalities (a)-(c) together with S > 1.
/// Throws ErrorKind::domain unless 0 < eta < 1/2.
FeasibilityReport feasibility(double eta, double S);

class FeasibilityError : public Error {
 public:
  explicit FeasibilityError(FeasibilityReport report);
  const FeasibilityReport& report() const noexcept { return report_; }

 private:
  FeasibilityReport report_;
};

/// Translated unit-sphere cap: north r = sqrt(1-(t+eta)^2) on [eta, 1-eta],
/// south r = sqrt(1-(t-eta)^2) on [-1+eta, -eta].
Jet cap_eval(double t, double eta, CapSide side);

/// Second derivative of the north cap continued analytically into the neck.
double cap_accel_continuation(double t, double eta);

/// Closed-form neck acceleration on [-eta, eta] (even in t):
///
///   r''(t) = -2S + (U + 2S) psi((|t| - a) / (b - a))
///                + (c(|t|) - U) psi((|t| - (eta - m)) / m)
///
/// with U = -(1-4eta^2)^{-3/2} and c the cap continuation. The first ramp lifts
/// the plateau value -2S to U across [a, b]; the second window of width m ends
/// at eta and glues U to the cap's own second derivative to all orders.
struct NeckBlend {
  double eta = 0;
  double S = 0;
  double ramp_begin = 0;  // a, >= eta^2
  double ramp_end = 0;    // b, <= eta - m
  double match_width = 0; // m

  double accel(double t) const;
  double ramp_centre() const { return 0.5 * (ramp_begin + ramp_end); }
};

/// Picks the match window and tunes the ramp centre by bisection so that
/// int_0^eta r'' dt = r'(eta); that integral is what makes r'(0) = 0.
NeckBlend tune_neck(double eta, double S);

/// Integral of the blend's acceleration over [0, eta].
double neck_accel_integral(const NeckBlend& blend);

/// The warping function r_eta on [-1+eta, 1-eta], sampled on a grid that
/// excludes the two poles (r' diverges there). Caps are closed form; on the
/// neck r, r' come from integrating r'' and are interpolated by quintic
/// Hermite between samples. Immutable once constructed.
class WarpProfile {
 public:
  /// Wraps raw samples (e.g. read from a file). Throws ErrorKind::corrupt when
  /// the arrays are structurally unusable; geometric validity is the job of
  /// validate_profile.
  static WarpProfile from_samples(int n, double eta, double S, int grid_size, std::string blend_id,
                                  std::vector<double> t, std::vector<double> r,
                                  std::vector<double> rdot, std::vector<double> rddot);

  int dimension() const { return n_; }
  double eta() const { return eta_; }
  double S() const { return S_; }
  int grid_size() const { return grid_size_; }
  const std::string& blend_id() const { return blend_id_; }
  bool is_round() const { return eta_ == 0.0; }

  const std::vector<double>& t() const { return t_; }
  const std::vector<double>& r() const { return r_; }
  const std::vector<double>& rdot() const { return rdot_; }
  const std::vector<double>& rddot() const { return rddot_; }
  std::size_t size() const { return t_.size(); }

  /// Present only for profiles built in-process.
  const std::optional<NeckBlend>& blend() const { return blend_; }

  double t_min() const { return -1.0 + eta_; }
  double t_max() const { return 1.0 - eta_; }

  /// r, r', r'' at any t in [t_min, t_max]; ErrorKind::range outside.
  Jet eval(double t) const;

 private:
  WarpProfile() = default;
  friend WarpProfile build_profile(int, double, double, int);
  friend WarpProfile round_profile(int, int);

  int n_ = 2;
  double eta_ = 0;
  double S_ = 0;
  int grid_size_ = 0;
  std::string blend_id_;
  std::vector<double> t_, r_, rdot_, rddot_;
  std::optional<NeckBlend> blend_;
};

inline constexpr const char* kBlendId = "ramp-match-v1";
inline constexpr const char* kRoundBlendId = "round";
inline constexpr double kValidationTol = 1e-9;

/// Pinched profile. grid_size counts grid intervals from pole to pole (a
/// multiple of 4, >= 64); size() == grid_size - 1 because poles are excluded.
/// Throws FeasibilityError for infeasible (eta, S) and ErrorKind::construction
/// if the tuned neck leaves the admissible bounds.
WarpProfile build_profile(int n, double eta, double S, int grid_size);

/// The round unit sphere, r = sqrt(1 - t^2), stored with eta = 0 and S = 0.
WarpProfile round_profile(int n, int grid_size);

struct Violation {
  int condition = 0;  // 1..8
  double t = 0;
  double margin = 0;  // negative: amount by which the condition fails
  std::string what;
};

/// Checks the eight neck conditions at every sample. Empty result means valid.
std::vector<Violation> validate_profile(const WarpProfile& p, double tol = kValidationTol);

}  // namespace pinch
