#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>

#include <fmt/format.h>
#include <omp.h>

#include "pinch/geometry.hpp"
#include "pinch/numerics.hpp"
#include "pinch/profile.hpp"
#include "pinch/spectral.hpp"

using namespace pinch;

namespace {

double seconds(const std::function<void()>& f, int reps) {
  f();  // warm up
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

void row(const char* name, const std::function<void(ExecPolicy)>& f, int reps) {
  const double ts = seconds([&] { f(ExecPolicy::serial); }, reps);
  const double tp = seconds([&] { f(ExecPolicy::parallel); }, reps);
  fmt::print("{:<28} serial {:9.4f} s   parallel {:9.4f} s   speedup {:5.2f}\n", name, ts, tp, ts / tp);
}

}  // namespace

int main() {
  fmt::print("threads: {}\n", omp_get_max_threads());
  auto p = std::make_shared<const WarpProfile>(build_profile(3, 0.04, 12.0, 2048));
  const auto g = rescale(measure(p, 3), 1 - 4 * 0.04 * 0.04);

  row("integrate (2^20 panels)", [](ExecPolicy pol) {
    volatile double v = numerics::integrate([](double x) { return std::exp(-x) * std::sin(40 * x); }, 0.0, 3.0,
                                            numerics::QuadratureRule::simpson(1 << 20), pol);
    (void)v;
  }, 5);
  row("measure (grid 2048)", [&](ExecPolicy pol) { (void)measure(p, 3, {}, pol); }, 5);
  row("mode_lambda1 (grid 8192)", [&](ExecPolicy pol) { (void)mode_lambda1(g, 1.0, 1, 8192, pol); }, 3);
  row("dirac_lambda1 (m_max 6)", [&](ExecPolicy pol) { (void)dirac_lambda1(g, 6, 2048, pol); }, 2);
  return 0;
}
