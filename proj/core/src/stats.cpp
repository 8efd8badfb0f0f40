#include "simplexdyn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

namespace simplexdyn {

namespace {

void require_samples(std::size_t n) {
  if (n < 100) throw Error(ErrorCode::TooFewSamples, "need at least 100 samples");
}

double pair_sum_within(const std::vector<const Vector*>& pts) {
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) s += (*pts[i] - *pts[j]).norm();
  return 2.0 * s;
}

double pair_sum_cross(const std::vector<const Vector*>& a, const std::vector<const Vector*>& b) {
  double s = 0.0;
  for (const Vector* x : a)
    for (const Vector* y : b) s += (*x - *y).norm();
  return s;
}

std::vector<const Vector*> pointers(const std::vector<Vector>& v, std::size_t lo, std::size_t hi) {
  std::vector<const Vector*> out;
  for (std::size_t i = lo; i < hi; ++i) out.push_back(&v[i]);
  return out;
}

double energy_of(const std::vector<const Vector*>& a, const std::vector<const Vector*>& b) {
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  return 2.0 * pair_sum_cross(a, b) / (na * nb) - pair_sum_within(a) / (na * (na - 1.0)) -
         pair_sum_within(b) / (nb * (nb - 1.0));
}

}  // namespace

const char* to_string(Direction d) { return d == Direction::LessEqual ? "<=" : ">="; }

TestReport make_report(std::string name, double statistic, double threshold, Direction direction,
                       std::uint64_t seed, std::vector<std::size_t> sizes) {
  TestReport r;
  r.name = std::move(name);
  r.statistic = statistic;
  r.threshold = threshold;
  r.direction = direction;
  r.pass = direction == Direction::LessEqual ? statistic <= threshold : statistic >= threshold;
  r.seed = seed;
  r.sizes = std::move(sizes);
  return r;
}

double dircond_residual(const PayoffMatrix& a, const Vector& alpha, const Composition& p) {
  if (alpha.size() != p.size() || a.n() != p.size())
    throw Error(ErrorCode::DimensionMismatch, "dircond_residual");
  const Vector& v = p.entries();
  const double total = alpha.sum();
  const Vector w = alpha - total * v;
  return w.dot(a.a() * v) + potential_lambda(a, p) - w.squaredNorm() +
         total * (1.0 - v.squaredNorm());
}

double hj_residual(const PayoffMatrix& a, const GradientFn& v_grad, const HessianFn& v_hess,
                   const Composition& p) {
  if (a.n() != p.size()) throw Error(ErrorCode::DimensionMismatch, "hj_residual");
  const Vector& v = p.entries();
  const Matrix g = shahshahani_inv(p);
  const Vector grad = v_grad(p);
  const Matrix hess = v_hess(p);
  // sum_i Z_i^2 V = tr(g g H) + c . grad, c_k = sum_ij g^{ij} d_j g^{ik}
  const Vector c = g.diagonal() - g.trace() * v - g * v;
  const double lprime = (g * g).cwiseProduct(hess).sum() + c.dot(grad);
  const Vector sg = g * grad;
  const double gamma = sg.squaredNorm();
  const double za = (a.a() * v).dot(sg);
  return lprime - gamma - za + potential_lambda(a, p);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  require_samples(samples.size());
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_critical_value(std::size_t n, double level) {
  return std::sqrt(-0.5 * std::log(0.5 * level)) / std::sqrt(static_cast<double>(n));
}

double chi_square_quantile(double prob, double dof) {
  return boost::math::quantile(boost::math::chi_squared(dof), prob);
}

double energy_distance(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  require_samples(a.size());
  require_samples(b.size());
  return energy_of(pointers(a, 0, a.size()), pointers(b, 0, b.size()));
}

double energy_standard_error(const std::vector<Vector>& a, const std::vector<Vector>& b,
                             int blocks) {
  if (blocks < 2) throw Error(ErrorCode::BadValue, "need at least 2 blocks");
  const std::size_t ka = a.size() / blocks, kb = b.size() / blocks;
  if (ka < 2 || kb < 2) throw Error(ErrorCode::TooFewSamples, "blocks too small");
  std::vector<double> est;
  for (int k = 0; k < blocks; ++k)
    est.push_back(energy_of(pointers(a, k * ka, (k + 1) * ka), pointers(b, k * kb, (k + 1) * kb)));
  const double mean = std::accumulate(est.begin(), est.end(), 0.0) / blocks;
  double var = 0.0;
  for (double e : est) var += (e - mean) * (e - mean);
  var /= (blocks - 1);
  return std::sqrt(var / blocks);
}

EnergyTest two_sample_energy(const std::vector<Vector>& a, const std::vector<Vector>& b,
                             std::uint64_t seed, int permutations, double level) {
  require_samples(a.size());
  require_samples(b.size());
  std::vector<const Vector*> pooled = pointers(a, 0, a.size());
  for (const Vector& y : b) pooled.push_back(&y);
  const std::size_t na = a.size(), n = pooled.size();
  const double total = pair_sum_within(pooled);
  auto stat_for = [&](const std::vector<const Vector*>& order) {
    const std::vector<const Vector*> pa(order.begin(), order.begin() + na);
    const std::vector<const Vector*> pb(order.begin() + na, order.end());
    const double saa = pair_sum_within(pa), sbb = pair_sum_within(pb);
    const double cross = 0.5 * (total - saa - sbb);
    const double ma = static_cast<double>(na), mb = static_cast<double>(n - na);
    return 2.0 * cross / (ma * mb) - saa / (ma * (ma - 1.0)) - sbb / (mb * (mb - 1.0));
  };
  EnergyTest t;
  t.statistic = stat_for(pooled);
  Rng rng(seed);
  std::vector<double> perm;
  std::vector<const Vector*> order = pooled;
  for (int k = 0; k < permutations; ++k) {
    std::shuffle(order.begin(), order.end(), rng);
    perm.push_back(stat_for(order));
  }
  std::sort(perm.begin(), perm.end());
  const std::size_t idx = std::min<std::size_t>(
      perm.size() - 1,
      static_cast<std::size_t>(std::ceil((1.0 - level) * permutations)) - 1);
  t.threshold = perm[idx];
  t.reject = t.statistic > t.threshold;
  return t;
}

TestReport dirichlet_moment_check(const Ensemble& ensemble, const Vector& alpha) {
  if (ensemble.terminal_states.empty()) throw Error(ErrorCode::Empty, "empty ensemble");
  const int n = ensemble.terminal_states.front().size();
  if (alpha.size() != n) throw Error(ErrorCode::DimensionMismatch, "alpha vs ensemble");
  const double a0 = alpha.sum();
  const double count = static_cast<double>(ensemble.size());
  double worst = 0.0;
  std::string detail;
  for (int i = 0; i < n; ++i) {
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (const auto& p : ensemble.terminal_states) {
      const double x = p[i], x2 = x * x;
      s1 += x;
      s2 += x2;
      s4 += x2 * x2;
    }
    const double m1 = s1 / count, m2 = s2 / count;
    const double se1 = std::sqrt(std::max(0.0, m2 - m1 * m1) / count);
    const double se2 = std::sqrt(std::max(0.0, s4 / count - m2 * m2) / count);
    const double t1 = alpha[i] / a0, t2 = alpha[i] * (alpha[i] + 1.0) / (a0 * (a0 + 1.0));
    const double z1 = std::abs(m1 - t1) / se1, z2 = std::abs(m2 - t2) / se2;
    worst = std::max({worst, z1, z2});
    detail += "p_" + std::to_string(i + 1) + ": mean " + format_double(m1) + " (z " +
              format_double(z1) + "), second " + format_double(m2) + " (z " + format_double(z2) +
              "); ";
  }
  TestReport r = make_report("dirichlet_moments", worst, 3.0, Direction::LessEqual,
                             ensemble.config.master_seed, {ensemble.size()});
  r.detail = detail;
  return r;
}

ContractionReport contraction_report(const Trajectory& y, const Trajectory& y2, double lambda,
                                     double dt) {
  if (y.size() != y2.size() || y.times.size() != y.size() || y2.times.size() != y2.size())
    throw Error(ErrorCode::GridMismatch, "trajectories differ in length");
  for (std::size_t k = 0; k < y.size(); ++k)
    if (std::abs(y.times[k] - y2.times[k]) > 1e-12)
      throw Error(ErrorCode::GridMismatch, "time grids differ");
  if (y.size() < 2) throw Error(ErrorCode::GridMismatch, "need at least two recorded times");

  const bool chart = y.ilr.size() == y.size() && y2.ilr.size() == y2.size();
  std::vector<double> da(y.size()), de(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) {
    da[k] = chart ? (y.ilr[k] - y2.ilr[k]).norm() : dist(y.states[k], y2.states[k]);
    de[k] = (y.states[k].entries() - y2.states[k].entries()).norm();
  }

  ContractionReport out;
  auto ratio = [](double lhs, double rhs) {
    if (rhs > 0.0) return lhs / rhs;
    return lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  auto note = [&](char check, std::size_t k, double lhs, double rhs, bool& flag, double& worst) {
    worst = std::max(worst, ratio(lhs, rhs));
    if (lhs > rhs) {
      flag = false;
      if (!out.witness) out.witness = ContractionWitness{check, k, y.times[k], lhs, rhs};
    }
  };
  const double grow = 1.0 + 10.0 * dt;
  double integral = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (k > 0) {
      const double h = y.times[k] - y.times[k - 1];
      note('a', k, da[k], da[k - 1] * (1.0 + (1e-6 + 10.0 * dt) * h), out.a_pass, out.worst_a);
      integral += 0.5 * h * (de[k - 1] * de[k - 1] + de[k] * de[k]);
    }
    if (lambda > 0.0)
      note('b', k, de[k], std::exp(-lambda * y.times[k]) * da[0] * grow, out.b_pass, out.worst_b);
    note('c', k, da[k] * da[k] + 2.0 * lambda * integral, da[0] * da[0] * grow, out.c_pass,
         out.worst_c);
  }
  const double worst = std::max({out.worst_a, out.worst_b, out.worst_c});
  out.report = make_report("contraction", worst, 1.0, Direction::LessEqual,
                           y.seed.value_or(0), {y.size()});
  out.report.detail = std::string("a ") + (out.a_pass ? "pass" : "fail") + ", b " +
                      (lambda > 0.0 ? (out.b_pass ? "pass" : "fail") : "n/a") + ", c " +
                      (out.c_pass ? "pass" : "fail");
  return out;
}

double wasserstein_1d(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::Empty, "wasserstein_1d needs samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double s = 0.0;
  if (a.size() == b.size()) {
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s / static_cast<double>(a.size()));
  }
  // piecewise-constant quantile functions integrated over the merged level grid
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double u = 0.0;
  while (i < a.size() && j < b.size()) {
    const double ua = (i + 1) / na, ub = (j + 1) / nb;
    const double next = std::min(ua, ub);
    s += (next - u) * (a[i] - b[j]) * (a[i] - b[j]);
    u = next;
    if (ua <= next) ++i;
    if (ub <= next) ++j;
  }
  return std::sqrt(s);
}

TestReport vertex_absorption_stats(const Ensemble& ensemble, double level) {
  if (ensemble.terminal_states.empty()) throw Error(ErrorCode::Empty, "empty ensemble");
  const int n = ensemble.terminal_states.front().size();
  std::vector<double> counts(n, 0.0);
  for (const auto& p : ensemble.terminal_states) {
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (p[i] > p[best]) best = i;
    counts[best] += 1.0;
  }
  const double expected = static_cast<double>(ensemble.size()) / n;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  TestReport r = make_report("vertex_uniformity", chi2, chi_square_quantile(1.0 - level, n - 1),
                             Direction::LessEqual, ensemble.config.master_seed, {ensemble.size()});
  for (int i = 0; i < n; ++i)
    r.detail += "vertex " + std::to_string(i + 1) + ": " + std::to_string(int(counts[i])) + "; ";
  return r;
}

}  // namespace simplexdyn
