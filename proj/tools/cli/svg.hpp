#pragma once

#include <string>
#include <utility>
#include <vector>

#include "simplexdyn/simplexdyn.hpp"

namespace simplexdyn::cli {

inline constexpr double kSvgWidth = 800.0;
inline constexpr int kSvgHeight = 693;

// Barycentric projection x = p2 + p3/2, y = (sqrt 3 / 2) p3, in unit-side coordinates.
std::pair<double, double> ternary_xy(const Vector& p);
// Pixel coordinates inside the 800 x 693 viewport, y pointing down.
std::pair<double, double> ternary_pixel(const Vector& p);

std::string ternary_svg_trajectory(const Trajectory& tr, const std::string& comment);
std::string ternary_svg_portrait(const std::vector<PortraitSample>& samples,
                                 const std::string& comment);

}  // namespace simplexdyn::cli
