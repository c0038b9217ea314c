#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <random>
#include <string>

#include <json.hpp>

#include "pinch/io.hpp"

using namespace pinch;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "pinch_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::domain;
}

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("profile round trip is bit-exact") {
  for (const auto& p : {build_profile(2, 0.1, 4, 512), build_profile(3, 0.04, 12, 256), round_profile(2, 128)}) {
    const auto path = scratch("roundtrip.json").string();
    io::write_profile(p, path);
    const auto q = io::read_profile(path);
    CHECK(q.dimension() == p.dimension());
    CHECK(q.eta() == p.eta());
    CHECK(q.S() == p.S());
    CHECK(q.grid_size() == p.grid_size());
    CHECK(q.blend_id() == p.blend_id());
    CHECK(q.t() == p.t());
    CHECK(q.r() == p.r());
    CHECK(q.rdot() == p.rdot());
    CHECK(q.rddot() == p.rddot());
    CHECK(validate_profile(q).empty());
    CHECK(io::profile_to_json(q) == io::profile_to_json(p));
  }
}

TEST_CASE("profile document layout") {
  const auto text = io::profile_to_json(build_profile(2, 0.1, 4, 64));
  const auto doc = nlohmann::json::parse(text);
  for (const char* k : {"format_version", "n", "eta", "S", "grid_size", "blend_id", "t", "r", "rdot", "rddot"})
    CHECK(doc.contains(k));
  CHECK(doc["format_version"] == io::kProfileFormatVersion);
  CHECK(doc["t"].size() == 63u);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.find("e-01") != std::string::npos);
}

TEST_CASE("corrupt documents") {
  const auto good = io::profile_to_json(build_profile(2, 0.1, 4, 64));
  CHECK(kind_of([] { io::profile_from_json("{ not json"); }) == ErrorKind::corrupt);
  CHECK(kind_of([] { io::profile_from_json("[1, 2, 3]"); }) == ErrorKind::corrupt);
  CHECK(kind_of([&] { io::profile_from_json(replace_once(good, "\"rddot\"", "\"rdd\"")); }) == ErrorKind::corrupt);
  CHECK(kind_of([&] { io::profile_from_json(replace_once(good, "\"format_version\": 1", "\"format_version\": 9")); }) ==
        ErrorKind::corrupt);
  CHECK(kind_of([&] { io::profile_from_json(replace_once(good, "\"n\": 2", "\"n\": \"two\"")); }) == ErrorKind::corrupt);
  auto doc = nlohmann::json::parse(good);
  doc["r"][3] = "x";
  CHECK(kind_of([&] { io::profile_from_json(doc.dump()); }) == ErrorKind::corrupt);
  doc = nlohmann::json::parse(good);
  doc["t"].erase(0);
  CHECK(kind_of([&] { io::profile_from_json(doc.dump()); }) == ErrorKind::corrupt);
}

TEST_CASE("file errors") {
  CHECK(kind_of([] { io::read_text("/nonexistent/dir/p.json"); }) == ErrorKind::io);
  CHECK(kind_of([] { io::write_text("/nonexistent/dir/p.json", "x"); }) == ErrorKind::io);
  CHECK(kind_of([] { io::read_profile("/nonexistent/p.json"); }) == ErrorKind::io);
}

TEST_CASE("curvature CSV") {
  const auto g = measure(std::make_shared<const WarpProfile>(round_profile(3, 128)), 3);
  const auto csv = io::curvature_csv(g);
  CHECK(csv.rfind("t,s,kappa_t,kappa_theta,scal,mean\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == g.curvature().samples.size() + 1);
}

TEST_CASE("bounds CSV") {
  const auto g = measure(std::make_shared<const WarpProfile>(round_profile(2, 128)), 2);
  const auto csv = io::bounds_csv(bounds_report(g));
  CHECK(csv.rfind("quantity,value\n", 0) == 0);
  CHECK(csv.find("\nfriedrich,") != std::string::npos);
  CHECK(csv.find("\nextrinsic,") != std::string::npos);
}

TEST_CASE("spectrum JSON") {
  const auto g = measure(std::make_shared<const WarpProfile>(round_profile(2, 256)), 2);
  const auto r = dirac_lambda1(g, 1, 512);
  const auto doc = nlohmann::json::parse(io::spectrum_json(r, 2, "none"));
  CHECK(doc["lambda1_sq"].get<double>() == r.lambda1_sq);
  CHECK(doc["per_mode"].size() == r.per_mode.size());
  CHECK(doc.contains("mode_cutoff_certificate"));
  CHECK(doc["richardson"].contains("order"));
  CHECK(doc["rescale"] == "none");
}

TEST_CASE("shortest round-trip reals") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(io::fmt_real(x)) == x);
  }
  CHECK(io::fmt_real(0.5) == "0.5");
}

}
