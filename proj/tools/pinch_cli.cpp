#include <algorithm>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pinch/bounds.hpp"
#include "pinch/geometry.hpp"
#include "pinch/io.hpp"
#include "pinch/profile.hpp"
#include "pinch/spectral.hpp"
#include "pinch/sweep.hpp"
#include "pinch/verify.hpp"

using namespace pinch;

namespace {

enum Exit { ok = 0, invariant = 1, infeasible = 2, io_failure = 3, corrupt = 4, certificate = 5 };

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::domain:
    case ErrorKind::feasibility: return infeasible;
    case ErrorKind::io: return io_failure;
    case ErrorKind::corrupt: return corrupt;
    case ErrorKind::certificate: return certificate;
    default: return invariant;
  }
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    io::write_text(out_path, text);
}

// Reads and validates; corrupt documents and invalid profiles both exit 4.
std::shared_ptr<const WarpProfile> load_valid(const std::string& path) {
  auto p = std::make_shared<const WarpProfile>(io::read_profile(path));
  const auto bad = validate_profile(*p);
  if (!bad.empty()) {
    std::string msg = fmt::format("profile {} violates {} condition checks:", path, bad.size());
    std::vector<int> seen;
    for (const auto& v : bad) {
      if (seen.size() < 20) msg += fmt::format("\n  condition ({}) at t = {:.9g}: {}", v.condition, v.t, v.what);
      seen.push_back(v.condition);
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    msg += "\n  violated conditions:";
    for (int c : seen) msg += fmt::format(" ({})", c);
    throw Error(ErrorKind::corrupt, msg);
  }
  return p;
}

SurfaceGeometry surface(std::shared_ptr<const WarpProfile> p, const std::string& mode, ExecPolicy pol) {
  const SurfaceGeometry g = measure(p, p->dimension(), {}, pol);
  if (mode == "auto" && !p->is_round()) return rescale(g, 1.0 - 4.0 * p->eta() * p->eta());
  return g;
}

std::vector<double> parse_etas(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorKind::domain, fmt::format("cannot parse eta value \"{}\"", tok));
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pinched-sphere Dirac eigenvalue toolkit"};
  app.require_subcommand(1);
  bool serial = false;
  app.add_flag("--serial", serial, "Run kernels on a single thread");

  // profile build
  auto* profile = app.add_subcommand("profile", "Profile operations");
  profile->require_subcommand(1);
  auto* build = profile->add_subcommand("build", "Build a warping profile and write it as JSON");
  int b_n = 2, b_grid = 512;
  double b_eta = 0.1, b_S = 4;
  bool b_round = false;
  std::string b_out;
  build->add_option("--n", b_n, "Dimension")->default_val(2);
  build->add_option("--eta", b_eta, "Neck half-width eta in (0, 1/2)");
  build->add_option("--S", b_S, "Scalar curvature target on the neck, S > 1");
  build->add_option("--grid", b_grid, "Grid intervals pole to pole (multiple of 4, >= 64)")->default_val(512);
  build->add_flag("--round", b_round, "Build the round unit sphere instead");
  build->add_option("--out", b_out, "Output path")->required();

  // report
  auto* report = app.add_subcommand("report", "Curvature or bounds report as CSV");
  std::string r_profile, r_kind = "curvature", r_out, r_rescale = "none";
  int r_grid = 1024, r_modes = 2;
  report->add_option("--profile", r_profile, "Profile JSON")->required();
  report->add_option("--kind", r_kind, "curvature or bounds")->check(CLI::IsMember({"curvature", "bounds"}));
  report->add_option("--rescale", r_rescale, "auto applies 1-4eta^2")->check(CLI::IsMember({"auto", "none"}));
  report->add_option("--grid", r_grid, "Mode grid for the bounds spectrum")->default_val(1024);
  report->add_option("--modes", r_modes, "Initial m_max for the bounds spectrum")->default_val(2);
  report->add_option("--out", r_out, "Output path (default stdout)");

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "lambda_1(D^2) as JSON");
  std::string s_profile, s_rescale = "auto", s_out;
  int s_grid = 2048, s_modes = 2;
  spectrum->add_option("--profile", s_profile, "Profile JSON")->required();
  spectrum->add_option("--modes", s_modes, "Initial m_max")->default_val(2);
  spectrum->add_option("--grid", s_grid, "Mode grid (>= 256)")->default_val(2048);
  spectrum->add_option("--rescale", s_rescale, "auto applies 1-4eta^2")->check(CLI::IsMember({"auto", "none"}));
  spectrum->add_option("--out", s_out, "Output path (default stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Eigenvalue bracket sweep over eta, CSV");
  SweepConfig cfg;
  std::string w_etas = "0.1,0.05,0.025", w_out;
  sweep->add_option("--n", cfg.n, "Dimension")->default_val(2);
  sweep->add_option("--S", cfg.S, "Scalar curvature target")->default_val(4);
  sweep->add_option("--etas", w_etas, "Comma separated eta list");
  sweep->add_option("--grid", cfg.mode_grid, "Mode grid")->default_val(1024);
  sweep->add_option("--profile-grid", cfg.profile_grid, "Profile grid")->default_val(512);
  sweep->add_option("--modes", cfg.m_max, "Initial m_max")->default_val(2);
  sweep->add_option("--out", w_out, "Output path (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  bool v_quick = false, v_full = false;
  std::string v_mutate;
  verify->add_flag("--quick", v_quick, "Quick suite (default)");
  verify->add_flag("--full", v_full, "Full suite");
  verify->add_option("--mutate", v_mutate, "Inject a known defect")->check(CLI::IsMember({"kappa-sign"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return infeasible;
  }
  const ExecPolicy pol = serial ? ExecPolicy::serial : ExecPolicy::parallel;

  try {
    if (*build) {
      if (b_round) {
        io::write_profile(round_profile(b_n, b_grid), b_out);
      } else {
        const auto rep = feasibility(b_eta, b_S);
        if (!rep.ok) throw FeasibilityError(rep);
        io::write_profile(build_profile(b_n, b_eta, b_S, b_grid), b_out);
      }
      return ok;
    }
    if (*report) {
      auto p = load_valid(r_profile);
      const SurfaceGeometry g = surface(p, r_rescale, pol);
      if (r_kind == "curvature") {
        emit(r_out, io::curvature_csv(g));
      } else {
        const SpectrumResult spec = dirac_lambda1(g, r_modes, r_grid, pol);
        const RadialEigenspinor phi = eigenspinor_profile(g, spec);
        emit(r_out, io::bounds_csv(bounds_report(g, &spec, &phi)));
      }
      return ok;
    }
    if (*spectrum) {
      auto p = load_valid(s_profile);
      const SurfaceGeometry g = surface(p, s_rescale, pol);
      const SpectrumResult spec = dirac_lambda1(g, s_modes, s_grid, pol);
      std::cerr << fmt::format("lambda_1(D^2) = {:.12g} on the surface scaled by {:.12g} ({})\n", spec.lambda1_sq,
                               spec.scale, s_rescale);
      emit(s_out, io::spectrum_json(spec, p->dimension(), s_rescale));
      return ok;
    }
    if (*sweep) {
      cfg.etas = parse_etas(w_etas);
      emit(w_out, sweep_csv(run_sweep(cfg, pol)));
      return ok;
    }
    if (*verify) {
      VerifyOptions opts;
      opts.level = v_full && !v_quick ? VerifyLevel::full : VerifyLevel::quick;
      opts.policy = pol;
      if (v_mutate == "kappa-sign") opts.curvature_model = flipped_kappa_t;
      const auto results = run_verify(opts);
      std::vector<std::string> failed;
      for (const auto& r : results) {
        std::cout << fmt::format("{} {:<32} margin {:+.3e}  {}\n", r.pass ? "PASS" : "FAIL", r.id, r.margin, r.detail);
        if (!r.pass) failed.push_back(r.id);
      }
      if (!failed.empty()) {
        std::string ids;
        for (const auto& f : failed) ids += " " + f;
        std::cerr << "failed invariants:" << ids << "\n";
        return invariant;
      }
      return ok;
    }
  } catch (const FeasibilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& c : e.report().checks)
      if (!c.pass && c.name == "S>1") std::cerr << "note: the construction needs to assume S > 1\n";
    return infeasible;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return invariant;
  }
  return ok;
}
