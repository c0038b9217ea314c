#pragma once

#include <string>
#include <vector>

#include "pinch/exec.hpp"
#include "pinch/geometry.hpp"

namespace pinch {

enum class VerifyLevel { quick, full };

struct InvariantResult {
  std::string id;
  bool pass = false;
  double margin = 0;  // >= 0 when passing
  std::string detail;
};

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::quick;
  CurvatureModel curvature_model;  // empty: the correct formula
  ExecPolicy policy = ExecPolicy::parallel;
};

/// kappa_t with its sign flipped; used to check that the suite notices.
Curvatures flipped_kappa_t(const Jet& j);

std::vector<InvariantResult> run_verify(const VerifyOptions& opts);

}  // namespace pinch
