#include "simplexdyn/replicator.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace simplexdyn {

void OdeConfig::validate() const {
  if (!(t_end > 0.0) || !(dt > 0.0)) throw Error(ErrorCode::BadValue, "t_end and dt must be > 0");
  if (dt > t_end) throw Error(ErrorCode::BadValue, "dt exceeds t_end");
  if (t_end / dt > 1e8) throw Error(ErrorCode::BadValue, "more than 1e8 steps");
  if (record_every < 1) throw Error(ErrorCode::BadValue, "record_every must be >= 1");
}

long long step_count(double t_end, double dt) {
  return std::max(1LL, static_cast<long long>(std::ceil(t_end / dt - 1e-9)));
}

ChartDrift::ChartDrift(Vector c, Matrix m)
    : n_(static_cast<int>(m.cols())), zero_(false), c_(std::move(c)), m_(std::move(m)) {
  psi_t_ = contrast_matrix(n_).psi.transpose();
  z_.resize(n_);
  s_.resize(n_);
}

ChartDrift ChartDrift::replicator(const PayoffMatrix& a) {
  const ContrastMatrix c = contrast_matrix(a.n());
  return ChartDrift(Vector::Zero(a.n() - 1), c.psi * a.a());
}

ChartDrift ChartDrift::zero(int n) {
  ChartDrift d;
  d.n_ = n;
  d.zero_ = true;
  return d;
}

void ChartDrift::eval(const Vector& x, Vector& out) {
  if (zero_) {
    out.setZero(n_ - 1);
    return;
  }
  z_.noalias() = psi_t_ * x;
  sfm_into(z_, s_);
  out = c_;
  out.noalias() += m_ * s_;
}

Vector ChartDrift::operator()(const Vector& x) {
  Vector out(n_ - 1);
  eval(x, out);
  return out;
}

Vector replicator_rhs(const PayoffMatrix& a, const Composition& p) {
  if (a.n() != p.size()) throw Error(ErrorCode::DimensionMismatch, "replicator_rhs");
  const Vector& v = p.entries();
  const Vector ap = a.a() * v;
  return v.cwiseProduct((ap.array() - v.dot(ap)).matrix());
}

IlrPoint ilr_drift(const PayoffMatrix& a, const IlrPoint& x) {
  if (a.n() != x.size() + 1) throw Error(ErrorCode::DimensionMismatch, "ilr_drift");
  ChartDrift d = ChartDrift::replicator(a);
  return IlrPoint(d(x.coords()));
}

Trajectory integrate_replicator(const PayoffMatrix& a, const Composition& p0, const OdeConfig& cfg) {
  cfg.validate();
  if (a.n() != p0.size()) throw Error(ErrorCode::DimensionMismatch, "integrate_replicator");
  const ContrastMatrix c = contrast_matrix(a.n());
  ChartDrift f = ChartDrift::replicator(a);
  const long long steps = step_count(cfg.t_end, cfg.dt);
  const double h = cfg.t_end / static_cast<double>(steps);

  Trajectory tr;
  tr.scheme = "rk4-ilr";
  Vector x = ilr(p0, c).coords();
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.ilr.push_back(x);
    tr.states.push_back(ilr_inv(IlrPoint(x), c));
  };
  record(0.0);

  const int m = a.n() - 1;
  Vector k1(m), k2(m), k3(m), k4(m), tmp(m);
  auto guard = [&](const Vector& k) {
    if (h * k.norm() > 1e3) throw Error(ErrorCode::StepTooLarge, "RK4 stage moved more than 1e3");
  };
  for (long long s = 1; s <= steps; ++s) {
    f.eval(x, k1);
    guard(k1);
    tmp = x + 0.5 * h * k1;
    f.eval(tmp, k2);
    guard(k2);
    tmp = x + 0.5 * h * k2;
    f.eval(tmp, k3);
    guard(k3);
    tmp = x + h * k3;
    f.eval(tmp, k4);
    guard(k4);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (s % cfg.record_every == 0 || s == steps) record(static_cast<double>(s) * h);
  }
  return tr;
}

std::vector<PortraitSample> phase_portrait(const PayoffMatrix& a, int grid_per_side) {
  if (a.n() != 3) throw Error(ErrorCode::WrongDimension, "phase portraits need n = 3");
  if (grid_per_side < 2) throw Error(ErrorCode::BadValue, "grid_per_side must be >= 2");
  const int g = grid_per_side;
  std::vector<PortraitSample> out;
  for (int i = 1; i < g; ++i)
    for (int j = 1; i + j < g; ++j) {
      const int k = g - i - j;
      Composition p(Vector{{double(i) / g, double(j) / g, double(k) / g}});
      out.push_back({p, replicator_rhs(a, p)});
    }
  return out;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  if (tr.states.empty()) return;
  const int n = tr.states.front().size();
  const ContrastMatrix c = contrast_matrix(n);
  os << "t";
  for (int i = 1; i <= n; ++i) os << ",p_" << i;
  for (int i = 1; i < n; ++i) os << ",ilr_" << i;
  os << "\n";
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    os << format_double(tr.times[k]);
    for (int i = 0; i < n; ++i) os << ',' << format_double(tr.states[k][i]);
    const Vector x = k < tr.ilr.size() ? tr.ilr[k] : ilr(tr.states[k], c).coords();
    for (int i = 0; i < n - 1; ++i) os << ',' << format_double(x[i]);
    os << "\n";
  }
}

Trajectory read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::Io, "empty trajectory csv");
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
  }
  if (cols.empty() || cols[0] != "t") throw Error(ErrorCode::Io, "trajectory csv must start with t");
  int n = 0, m = 0;
  for (const auto& c : cols) {
    if (c.rfind("p_", 0) == 0) ++n;
    if (c.rfind("ilr_", 0) == 0) ++m;
  }
  if (n < 2) throw Error(ErrorCode::BadDimension, "trajectory csv has fewer than 2 p_ columns");
  Trajectory tr;
  tr.scheme = "csv";
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorCode::Io, "bad number on row " + std::to_string(row));
      }
    }
    if (static_cast<int>(vals.size()) != 1 + n + m)
      throw Error(ErrorCode::Io, "wrong column count on row " + std::to_string(row));
    Vector p(n);
    for (int i = 0; i < n; ++i) p[i] = vals[1 + i];
    tr.times.push_back(vals[0]);
    // the csv keeps 17 digits, so the sum may be off by a few ulps
    tr.states.push_back(Composition(p / p.sum()));
    if (m == n - 1) {
      Vector x(m);
      for (int i = 0; i < m; ++i) x[i] = vals[1 + n + i];
      tr.ilr.push_back(x);
    }
  }
  return tr;
}

}  // namespace simplexdyn
