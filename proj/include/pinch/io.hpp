#pragma once

#include <string>

#include "pinch/bounds.hpp"
#include "pinch/geometry.hpp"
#include "pinch/profile.hpp"
#include "pinch/spectral.hpp"

namespace pinch::io {

inline constexpr int kProfileFormatVersion = 1;

std::string profile_to_json(const WarpProfile& p);

/// ErrorKind::corrupt for malformed documents or unusable sample arrays.
WarpProfile profile_from_json(const std::string& text);

/// ErrorKind::io when the file cannot be read or written.
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& content);

WarpProfile read_profile(const std::string& path);
void write_profile(const WarpProfile& p, const std::string& path);

/// Columns t,s,kappa_t,kappa_theta,scal,mean, one row per grid point.
std::string curvature_csv(const SurfaceGeometry& g);

/// Columns quantity,value.
std::string bounds_csv(const BoundsReport& b);

std::string spectrum_json(const SpectrumResult& r, int n, const std::string& rescale_mode);

/// Shortest text that reads back to the same double.
std::string fmt_real(double x);

}  // namespace pinch::io
