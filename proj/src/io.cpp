#include "pinch/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace pinch::io {

namespace {

using nlohmann::json;

std::string sci(double x) { return fmt::format("{:.16e}", x); }

void append_array(std::string& out, const char* key, const std::vector<double>& v, bool last) {
  out += fmt::format("  \"{}\": [", key);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i % 4 == 0) out += "\n    ";
    out += sci(v[i]);
    if (i + 1 < v.size()) out += ", ";
  }
  out += last ? "\n  ]\n" : "\n  ],\n";
}

std::vector<double> real_array(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) throw Error(ErrorKind::corrupt, fmt::format("missing array \"{}\"", key));
  std::vector<double> out;
  out.reserve(doc[key].size());
  for (const auto& v : doc[key]) {
    if (!v.is_number()) throw Error(ErrorKind::corrupt, fmt::format("non-numeric entry in \"{}\"", key));
    out.push_back(v.get<double>());
  }
  return out;
}

template <class T>
T field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorKind::corrupt, fmt::format("missing field \"{}\"", key));
  try {
    return doc[key].get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::corrupt, fmt::format("field \"{}\" has the wrong type", key));
  }
}

}  // namespace

std::string fmt_real(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  return fmt::format("{}", x);
}

std::string profile_to_json(const WarpProfile& p) {
  std::string out = "{\n";
  out += fmt::format("  \"format_version\": {},\n", kProfileFormatVersion);
  out += fmt::format("  \"n\": {},\n", p.dimension());
  out += fmt::format("  \"eta\": {},\n", sci(p.eta()));
  out += fmt::format("  \"S\": {},\n", sci(p.S()));
  out += fmt::format("  \"grid_size\": {},\n", p.grid_size());
  out += fmt::format("  \"blend_id\": \"{}\",\n", p.blend_id());
  append_array(out, "t", p.t(), false);
  append_array(out, "r", p.r(), false);
  append_array(out, "rdot", p.rdot(), false);
  append_array(out, "rddot", p.rddot(), true);
  out += "}\n";
  return out;
}

WarpProfile profile_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::corrupt, fmt::format("profile is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw Error(ErrorKind::corrupt, "profile document is not an object");
  const int version = field<int>(doc, "format_version");
  if (version != kProfileFormatVersion)
    throw Error(ErrorKind::corrupt, fmt::format("unsupported format_version {}", version));
  return WarpProfile::from_samples(field<int>(doc, "n"), field<double>(doc, "eta"), field<double>(doc, "S"),
                                   field<int>(doc, "grid_size"), field<std::string>(doc, "blend_id"),
                                   real_array(doc, "t"), real_array(doc, "r"), real_array(doc, "rdot"),
                                   real_array(doc, "rddot"));
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, fmt::format("cannot open {} for reading", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::io, fmt::format("error reading {}", path));
  return ss.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, fmt::format("cannot open {} for writing", path));
  out << content;
  out.flush();
  if (!out) throw Error(ErrorKind::io, fmt::format("error writing {}", path));
}

WarpProfile read_profile(const std::string& path) { return profile_from_json(read_text(path)); }

void write_profile(const WarpProfile& p, const std::string& path) { write_text(path, profile_to_json(p)); }

std::string curvature_csv(const SurfaceGeometry& g) {
  std::string out = "t,s,kappa_t,kappa_theta,scal,mean\n";
  for (const auto& c : g.curvature().samples)
    out += fmt::format("{},{},{},{},{},{}\n", sci(c.t), sci(c.s), sci(c.kappa_t), sci(c.kappa_theta), sci(c.scal),
                       sci(c.mean));
  return out;
}

std::string bounds_csv(const BoundsReport& b) {
  std::string out = "quantity,value\n";
  auto row = [&](const std::string& k, double v) { out += fmt::format("{},{}\n", k, sci(v)); };
  row("n", b.n);
  row("min_scal", b.min_scal);
  row("friedrich", b.friedrich);
  if (b.conjecture) row("conjecture", *b.conjecture);
  row("extrinsic", b.extrinsic);
  for (const auto& [k, v] : b.class_constants) row("class_constant_" + k, v);
  if (b.lambda1_sq) row("lambda1_sq", *b.lambda1_sq);
  if (b.cutoff) {
    const auto& c = *b.cutoff;
    row("cutoff_r", c.r);
    row("cutoff_r0", c.r0);
    row("cutoff_quotient_bound", c.quotient_bound);
    row("cutoff_volume_bound", c.volume_bound);
    row("cutoff_final_bound", c.final_bound);
    row("cutoff_C", c.C);
    row("cutoff_excess", c.excess);
  }
  return out;
}

std::string spectrum_json(const SpectrumResult& r, int n, const std::string& rescale_mode) {
  json doc;
  doc["n"] = n;
  doc["rescale"] = rescale_mode;
  doc["scale"] = r.scale;
  doc["lambda1_sq"] = r.lambda1_sq;
  doc["ground_mode"] = {{"mu", r.ground_mu}, {"epsilon_sign", r.ground_eps}};
  json modes = json::array();
  for (const auto& m : r.per_mode)
    modes.push_back({{"mu", m.mu}, {"epsilon_sign", m.eps}, {"lambda", m.lambda}, {"coarse", m.coarse}, {"fine", m.fine}});
  doc["per_mode"] = modes;
  doc["m_max"] = r.m_max;
  doc["m_max_requested"] = r.m_max_requested;
  doc["mode_cutoff_certificate"] = r.mode_cutoff_certificate;
  doc["richardson"] = {{"grid_coarse", r.richardson.grid_coarse}, {"grid_fine", r.richardson.grid_fine},
                       {"coarse", r.richardson.coarse},           {"fine", r.richardson.fine},
                       {"extrapolated", r.richardson.extrapolated}, {"order", r.richardson.order}};
  return doc.dump(2) + "\n";
}

}  // namespace pinch::io
