#include "svg.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace simplexdyn::cli {

namespace {

const double kTriangleHeight = kSvgWidth * std::numbers::sqrt3 / 2.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  // avoid "-0.000"
  if (std::string(buf) == "-0.000") return "0.000";
  return buf;
}

void require_three(const Vector& p) {
  if (p.size() != 3) throw Error(ErrorCode::WrongDimension, "ternary plots need n = 3");
}

std::string header(const std::string& comment) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"" << kSvgHeight
     << "\" viewBox=\"0 0 800 " << kSvgHeight << "\">\n"
     << "<!-- " << comment << " -->\n"
     << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"" << kSvgHeight << "\" fill=\"white\"/>\n"
     << "<polygon points=\"" << num(0) << ',' << num(kTriangleHeight) << ' ' << num(kSvgWidth)
     << ',' << num(kTriangleHeight) << ' ' << num(kSvgWidth / 2) << ',' << num(0)
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  return os.str();
}

}  // namespace

std::pair<double, double> ternary_xy(const Vector& p) {
  require_three(p);
  return {p[1] + 0.5 * p[2], 0.5 * std::numbers::sqrt3 * p[2]};
}

std::pair<double, double> ternary_pixel(const Vector& p) {
  const auto [x, y] = ternary_xy(p);
  return {kSvgWidth * x, kTriangleHeight - kSvgWidth * y};
}

std::string ternary_svg_trajectory(const Trajectory& tr, const std::string& comment) {
  std::ostringstream os;
  os << header(comment);
  os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1\" points=\"";
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const auto [x, y] = ternary_pixel(tr.states[k].entries());
    os << (k ? " " : "") << num(x) << ',' << num(y);
  }
  os << "\"/>\n";
  if (!tr.states.empty()) {
    const auto [x0, y0] = ternary_pixel(tr.states.front().entries());
    const auto [x1, y1] = ternary_pixel(tr.states.back().entries());
    os << "<circle cx=\"" << num(x0) << "\" cy=\"" << num(y0) << "\" r=\"4\" fill=\"#2a9d3a\"/>\n";
    os << "<circle cx=\"" << num(x1) << "\" cy=\"" << num(y1) << "\" r=\"4\" fill=\"#c0392b\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string ternary_svg_portrait(const std::vector<PortraitSample>& samples,
                                 const std::string& comment) {
  std::ostringstream os;
  os << header(comment);
  double longest = 0.0;
  std::vector<std::pair<double, double>> dirs;
  for (const auto& s : samples) {
    require_three(s.rhs);
    // the projection is linear, so tangent vectors map the same way (without the offset)
    const double dx = kSvgWidth * (s.rhs[1] + 0.5 * s.rhs[2]);
    const double dy = -kSvgWidth * 0.5 * std::numbers::sqrt3 * s.rhs[2];
    dirs.emplace_back(dx, dy);
    longest = std::max(longest, std::hypot(dx, dy));
  }
  const double max_len = 18.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto [x, y] = ternary_pixel(samples[k].point.entries());
    const auto [dx, dy] = dirs[k];
    const double len = std::hypot(dx, dy);
    if (longest <= 0.0 || len <= 1e-12 * longest) {
      os << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"1.5\" fill=\"black\"/>\n";
      continue;
    }
    const double scale = max_len * len / longest / len;
    const double ex = x + dx * scale, ey = y + dy * scale;
    const double ux = dx / len, uy = dy / len;
    const double head = 4.0;
    os << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(ex) << "\" y2=\""
       << num(ey) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    os << "<polygon points=\"" << num(ex) << ',' << num(ey) << ' '
       << num(ex - head * ux + 0.5 * head * uy) << ',' << num(ey - head * uy - 0.5 * head * ux)
       << ' ' << num(ex - head * ux - 0.5 * head * uy) << ','
       << num(ey - head * uy + 0.5 * head * ux) << "\" fill=\"black\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace simplexdyn::cli
