#pragma once

#include <string>
#include <vector>

#include "pinch/exec.hpp"

namespace pinch {

struct SweepRow {
  double eta = 0;
  double delta_equiv = 0;  // lambda_1 - n^2/4
  double R2 = 0;           // eta^2 (1 - 4 eta^2)
  double min_scal = 0;     // rescaled surface
  double lambda1_sq = 0;
  double friedrich = 0;
  double extrinsic = 0;
  bool bracket_ok = false;
  bool neck_strip_scal_ok = false;
};

struct SweepConfig {
  int n = 2;
  double S = 4;
  std::vector<double> etas;
  int profile_grid = 512;
  int mode_grid = 1024;
  int m_max = 2;
  double tol = 5e-3;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;  // descending eta
  bool excess_nonincreasing = false;
  double epsilon_max = 0;  // 2 max delta_equiv
};

/// Checks every eta for feasibility before computing anything; throws
/// FeasibilityError naming the first infeasible eta.
SweepResult run_sweep(const SweepConfig& cfg, ExecPolicy policy = ExecPolicy::serial);

std::string sweep_csv(const SweepResult& r);

}  // namespace pinch
