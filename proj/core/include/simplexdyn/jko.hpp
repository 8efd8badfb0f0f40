#pragma once

#include <iosfwd>
#include <vector>

#include "simplexdyn/aitchison.hpp"
#include "simplexdyn/stats.hpp"

namespace simplexdyn {

// Values of a 1-D quantile function at the levels (k - 1/2) / m, strictly increasing.
class QuantileDensity {
 public:
  explicit QuantileDensity(Vector q);

  static QuantileDensity gaussian(int m, double mean, double sd);

  int m() const { return static_cast<int>(q_.size()); }
  const Vector& values() const { return q_; }
  double mean() const;
  double variance() const;
  double excess_kurtosis() const;

 private:
  Vector q_;
};

// Standard normal quantiles at the levels (k - 1/2) / m.
Vector standard_normal_levels(int m);

// -(1/(m-1)) sum ln(m (q_{k+1} - q_k)), i.e. int rho ln rho of the implied density
// with the m-1 cells carrying unit total mass.
double entropy(const QuantileDensity& q);
double w2_quantile(const QuantileDensity& a, const QuantileDensity& b);

struct JkoStepInfo {
  int iterations = 0;
  double gradient_norm = 0.0;
};

// argmin over q of (sigma^2/2) S(q) + W2^2(q, q0) / (2 tau). sigma = 1 makes the
// variance grow at rate 1, matching ilr(X_t) ~ N(ilr(p), t) for the diffusion.
QuantileDensity jko_step(const QuantileDensity& q0, double tau, double sigma = 1.0,
                         JkoStepInfo* info = nullptr);

struct JkoRow {
  int step = 0;
  double t = 0.0;
  double entropy = 0.0;
  double variance = 0.0;
  double w2_error_vs_exact = 0.0;
};

struct JkoFlowResult {
  TestReport report;  // statistic: terminal W2 error, threshold 0.01
  std::vector<JkoRow> rows;
  double sigma = 1.0;
};

// Iterates jko_step n_steps times with tau = t_end / n_steps and compares against
// the exact Gaussian heat solution. q_init must be a Gaussian quantile grid.
JkoFlowResult jko_flow_vs_heat(const QuantileDensity& q_init, double t_end, int n_steps,
                               double sigma = 1.0);

void write_jko_csv(std::ostream& os, const JkoFlowResult& r);

}  // namespace simplexdyn
