#include <doctest.h>

#include <chrono>
#include <string>

#include "pinch/error.hpp"
#include "pinch/sweep.hpp"

using namespace pinch;

TEST_SUITE("sweep") {

TEST_CASE("feasible n = 2 sweep") {
  SweepConfig cfg;
  cfg.n = 2;
  cfg.S = 4;
  cfg.etas = {0.025, 0.1, 0.05};
  const auto res = run_sweep(cfg, ExecPolicy::parallel);
  REQUIRE(res.rows.size() == 3);
  CHECK(res.rows[0].eta == 0.1);
  CHECK(res.rows[1].eta == 0.05);
  CHECK(res.rows[2].eta == 0.025);
  for (const auto& row : res.rows) {
    CHECK(row.R2 == row.eta * row.eta * (1 - 4 * row.eta * row.eta));
    CHECK(row.R2 > 0);
    CHECK(row.min_scal >= 2 - 1e-6);
    CHECK(row.bracket_ok);
    CHECK(row.neck_strip_scal_ok);
    CHECK(row.delta_equiv == row.lambda1_sq - 1.0);
    CHECK(row.friedrich <= row.lambda1_sq + cfg.tol);
    CHECK(row.lambda1_sq <= row.extrinsic + cfg.tol);
  }
  CHECK(res.excess_nonincreasing);
  CHECK(res.epsilon_max == doctest::Approx(2 * res.rows[0].delta_equiv));

  const auto csv = sweep_csv(res);
  CHECK(csv.rfind("eta,delta_equiv,R2,min_scal,lambda1_sq,friedrich,extrinsic,bracket_ok\n", 0) == 0);
  CHECK(csv.find("# excess_nonincreasing_as_eta_decreases=true") != std::string::npos);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv == sweep_csv(run_sweep(cfg, ExecPolicy::serial)));
}

TEST_CASE("infeasible etas are rejected before any work") {
  SweepConfig cfg;
  cfg.n = 2;
  cfg.S = 4;
  cfg.etas = {0.05, 0.1, 0.2};
  cfg.profile_grid = 1 << 20;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    run_sweep(cfg);
    FAIL("expected a feasibility error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::feasibility);
    CHECK(std::string(e.what()).find("0.2") != std::string::npos);
    CHECK(std::string(e.what()).find("(c)") != std::string::npos);
  }
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 0.5);
  cfg.etas = {};
  CHECK_THROWS_AS(run_sweep(cfg), Error);
}

}
