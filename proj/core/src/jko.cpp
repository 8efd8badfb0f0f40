#include "simplexdyn/jko.hpp"

#include <cmath>
#include <ostream>

#include <boost/math/distributions/normal.hpp>

namespace simplexdyn {

namespace {

double objective(const Vector& q, const Vector& q0, double tau, double w) {
  const int m = static_cast<int>(q.size());
  double s = 0.0, t = 0.0;
  for (int k = 0; k + 1 < m; ++k) s += std::log(m * (q[k + 1] - q[k]));
  for (int k = 0; k < m; ++k) t += (q[k] - q0[k]) * (q[k] - q0[k]);
  return -w * s / m + t / (2.0 * tau * m);
}

bool increasing(const Vector& q) {
  for (int k = 0; k + 1 < q.size(); ++k)
    if (!(q[k + 1] > q[k])) return false;
  return true;
}

// Thomas algorithm for a symmetric tridiagonal system; sub = super = off.
void solve_tridiagonal(const Vector& diag, const Vector& off, const Vector& rhs, Vector& x) {
  const int m = static_cast<int>(diag.size());
  Vector c(m), d(m);
  c[0] = m > 1 ? off[0] / diag[0] : 0.0;
  d[0] = rhs[0] / diag[0];
  for (int k = 1; k < m; ++k) {
    const double den = diag[k] - off[k - 1] * c[k - 1];
    c[k] = k + 1 < m ? off[k] / den : 0.0;
    d[k] = (rhs[k] - off[k - 1] * d[k - 1]) / den;
  }
  x.resize(m);
  x[m - 1] = d[m - 1];
  for (int k = m - 2; k >= 0; --k) x[k] = d[k] - c[k] * x[k + 1];
}

}  // namespace

QuantileDensity::QuantileDensity(Vector q) : q_(std::move(q)) {
  if (q_.size() < 2) throw Error(ErrorCode::BadDimension, "need at least 2 quantile levels");
  if (!q_.allFinite()) throw Error(ErrorCode::BadValue, "non-finite quantile");
  if (!increasing(q_)) throw Error(ErrorCode::NonMonotone, "quantiles must be strictly increasing");
}

Vector standard_normal_levels(int m) {
  const boost::math::normal nd;
  Vector z(m);
  for (int k = 0; k < m; ++k) z[k] = boost::math::quantile(nd, (k + 0.5) / m);
  return z;
}

QuantileDensity QuantileDensity::gaussian(int m, double mean, double sd) {
  if (!(sd > 0.0)) throw Error(ErrorCode::BadValue, "sd must be > 0");
  return QuantileDensity((mean + sd * standard_normal_levels(m).array()).matrix());
}

double QuantileDensity::mean() const { return q_.mean(); }

double QuantileDensity::variance() const { return (q_.array() - q_.mean()).square().mean(); }

double QuantileDensity::excess_kurtosis() const {
  const Eigen::ArrayXd c = q_.array() - q_.mean();
  const double v = c.square().mean();
  return c.square().square().mean() / (v * v) - 3.0;
}

double entropy(const QuantileDensity& q) {
  const Vector& v = q.values();
  const int m = q.m();
  double s = 0.0;
  for (int k = 0; k + 1 < m; ++k) s += std::log(m * (v[k + 1] - v[k]));
  return -s / (m - 1);
}

double w2_quantile(const QuantileDensity& a, const QuantileDensity& b) {
  if (a.m() != b.m()) throw Error(ErrorCode::SizeMismatch, "quantile grids differ in size");
  return std::sqrt((a.values() - b.values()).squaredNorm() / a.m());
}

QuantileDensity jko_step(const QuantileDensity& q0, double tau, double sigma, JkoStepInfo* info) {
  if (!(tau > 0.0)) throw Error(ErrorCode::BadValue, "tau must be > 0");
  const int m = q0.m();
  const double w = 0.5 * sigma * sigma;
  const Vector& ref = q0.values();
  Vector q = ref, grad(m), diag(m), off(std::max(m - 1, 1)), step(m), trial(m), inv(m - 1);
  for (int it = 0; it < 200; ++it) {
    for (int k = 0; k + 1 < m; ++k) inv[k] = 1.0 / (q[k + 1] - q[k]);
    grad = (q - ref) / (tau * m);
    diag.setConstant(1.0 / (tau * m));
    for (int k = 0; k + 1 < m; ++k) {
      grad[k] += w * inv[k] / m;
      grad[k + 1] -= w * inv[k] / m;
      const double h = w * inv[k] * inv[k] / m;
      diag[k] += h;
      diag[k + 1] += h;
      off[k] = -h;
    }
    const double gnorm = grad.norm();
    if (gnorm <= 1e-10) {
      if (info) *info = {it, gnorm};
      return QuantileDensity(q);
    }
    solve_tridiagonal(diag, off, -grad, step);
    const double f0 = objective(q, ref, tau, w);
    double a = 1.0;
    for (;;) {
      trial = q + a * step;
      // relative slack: near the optimum f changes below the rounding of f itself
      if (increasing(trial) && objective(trial, ref, tau, w) <= f0 + 1e-13 * std::abs(f0)) break;
      a *= 0.5;
      if (a < 1e-20) throw Error(ErrorCode::NoConvergence, "line search failed");
    }
    q = trial;
  }
  throw Error(ErrorCode::NoConvergence, "Newton did not converge in 200 iterations");
}

JkoFlowResult jko_flow_vs_heat(const QuantileDensity& q_init, double t_end, int n_steps,
                               double sigma) {
  if (!(t_end >= 0.0)) throw Error(ErrorCode::BadValue, "t_end must be >= 0");
  if (n_steps < 1) throw Error(ErrorCode::BadValue, "n_steps must be >= 1");
  const int m = q_init.m();
  const Vector z = standard_normal_levels(m);
  // least-squares fit q = mu + s z, then insist the fit is exact
  const double zbar = z.mean(), qbar = q_init.mean();
  const double s0 = (z.array() - zbar).matrix().dot((q_init.values().array() - qbar).matrix()) /
                    (z.array() - zbar).square().sum();
  const double mu = qbar - s0 * zbar;
  const double resid = (q_init.values() - (mu + s0 * z.array()).matrix()).cwiseAbs().maxCoeff();
  if (!(s0 > 0.0) || resid > 1e-9 * (1.0 + std::abs(mu) + s0))
    throw Error(ErrorCode::NotGaussian, "q_init is not a Gaussian quantile grid");

  JkoFlowResult out;
  out.sigma = sigma;
  auto exact = [&](double t) {
    return QuantileDensity::gaussian(m, mu, std::sqrt(s0 * s0 + sigma * sigma * t));
  };
  QuantileDensity q = q_init;
  auto push = [&](int k, double t) {
    out.rows.push_back({k, t, entropy(q), q.variance(), w2_quantile(q, exact(t))});
  };
  push(0, 0.0);
  if (t_end > 0.0) {
    const double tau = t_end / n_steps;
    for (int k = 1; k <= n_steps; ++k) {
      q = jko_step(q, tau, sigma);
      push(k, k * tau);
    }
  }
  out.report = make_report("jko_w2_error", out.rows.back().w2_error_vs_exact, 0.01,
                           Direction::LessEqual, 0, {static_cast<std::size_t>(m),
                                                     static_cast<std::size_t>(n_steps)});
  out.report.detail = "sigma " + format_double(sigma) + ", variance growth rate sigma^2";
  return out;
}

void write_jko_csv(std::ostream& os, const JkoFlowResult& r) {
  os << "step,t,entropy,variance,w2_error_vs_exact\n";
  for (const auto& row : r.rows)
    os << row.step << ',' << format_double(row.t) << ',' << format_double(row.entropy) << ','
       << format_double(row.variance) << ',' << format_double(row.w2_error_vs_exact) << "\n";
}

}  // namespace simplexdyn
