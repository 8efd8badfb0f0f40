#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "simplexdyn/aitchison.hpp"
#include "simplexdyn/payoff.hpp"

namespace simplexdyn {

struct OdeConfig {
  double t_end = 1.0;
  double dt = 1e-3;
  int record_every = 1;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Composition> states;
  std::vector<Vector> ilr;  // chart coordinates when the integrator worked in the chart
  std::string scheme;
  std::optional<std::uint64_t> seed;

  std::size_t size() const { return states.size(); }
};

// Affine chart drift x -> c + M sfm(psi^T x). Replicator(A): c = 0, M = psi A.
// Holds scratch space, so give each thread its own copy.
class ChartDrift {
 public:
  ChartDrift() = default;
  ChartDrift(Vector c, Matrix m);

  static ChartDrift replicator(const PayoffMatrix& a);
  static ChartDrift zero(int n);

  int n() const { return n_; }
  bool is_zero() const { return zero_; }
  void eval(const Vector& x, Vector& out);
  Vector operator()(const Vector& x);

 private:
  int n_ = 0;
  bool zero_ = true;
  Vector c_;
  Matrix m_;
  Matrix psi_t_;
  Vector z_, s_;
};

Vector replicator_rhs(const PayoffMatrix& a, const Composition& p);
IlrPoint ilr_drift(const PayoffMatrix& a, const IlrPoint& x);
Trajectory integrate_replicator(const PayoffMatrix& a, const Composition& p0, const OdeConfig& cfg);

struct PortraitSample {
  Composition point;
  Vector rhs;
};

std::vector<PortraitSample> phase_portrait(const PayoffMatrix& a, int grid_per_side);

// Number of integration steps for (t_end, dt); the step actually used is t_end / steps.
long long step_count(double t_end, double dt);

void write_trajectory_csv(std::ostream& os, const Trajectory& tr);
Trajectory read_trajectory_csv(std::istream& is);

std::string format_double(double x);  // 17 significant digits

}  // namespace simplexdyn
