#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "simplexdyn/aitchison.hpp"
#include "simplexdyn/payoff.hpp"
#include "simplexdyn/replicator.hpp"
#include "simplexdyn/sde.hpp"

namespace simplexdyn {

enum class Direction { LessEqual, GreaterEqual };
const char* to_string(Direction d);

struct TestReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  Direction direction = Direction::LessEqual;
  bool pass = false;
  std::uint64_t seed = 0;
  std::vector<std::size_t> sizes;
  std::string detail;
};

TestReport make_report(std::string name, double statistic, double threshold, Direction direction,
                       std::uint64_t seed, std::vector<std::size_t> sizes);

double dircond_residual(const PayoffMatrix& a, const Vector& alpha, const Composition& p);

using GradientFn = std::function<Vector(const Composition&)>;
using HessianFn = std::function<Matrix(const Composition&)>;

// L'V - Gamma V - Z_A V + Lambda with L' = sum_i Z_i^2 and Z_i the rows of g^{-1}.
double hj_residual(const PayoffMatrix& a, const GradientFn& v_grad, const HessianFn& v_hess,
                   const Composition& p);

double normal_cdf(double x);
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
// Asymptotic one-sample critical value sqrt(-ln(level/2)/2) / sqrt(n).
double ks_critical_value(std::size_t n, double level = 0.01);
double chi_square_quantile(double prob, double dof);

// U-statistic 2E|X-Y| - E|X-X'| - E|Y-Y'|.
double energy_distance(const std::vector<Vector>& a, const std::vector<Vector>& b);
// Standard error from the spread over `blocks` disjoint block pairs.
double energy_standard_error(const std::vector<Vector>& a, const std::vector<Vector>& b,
                             int blocks = 10);

struct EnergyTest {
  double statistic = 0.0;
  double threshold = 0.0;  // permutation quantile at 1 - level
  bool reject = false;
};

EnergyTest two_sample_energy(const std::vector<Vector>& a, const std::vector<Vector>& b,
                             std::uint64_t seed, int permutations = 200, double level = 0.01);

TestReport dirichlet_moment_check(const Ensemble& ensemble, const Vector& alpha);

struct ContractionWitness {
  char check = 'a';
  std::size_t index = 0;
  double time = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ContractionReport {
  TestReport report;
  bool a_pass = true;
  bool b_pass = true;
  bool c_pass = true;
  double worst_a = 0.0;  // largest lhs / rhs per check
  double worst_b = 0.0;
  double worst_c = 0.0;
  std::optional<ContractionWitness> witness;  // first violation in time order
};

// (a) d_{k+1} <= d_k (1 + (1e-6 + 10 dt) h_k) with h_k the recorded spacing
// (b) |Y_t - Y'_t| <= exp(-lambda t) d_0 (1 + 10 dt), only when lambda > 0
// (c) d_t^2 + 2 lambda int_0^t |Y - Y'|^2 ds <= d_0^2 (1 + 10 dt), trapezoid rule
ContractionReport contraction_report(const Trajectory& y, const Trajectory& y2, double lambda,
                                     double dt);

double wasserstein_1d(std::vector<double> a, std::vector<double> b);

TestReport vertex_absorption_stats(const Ensemble& ensemble, double level = 0.01);

}  // namespace simplexdyn
