#include "simplexdyn/sde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <thread>

namespace simplexdyn {

namespace {

struct Steps {
  long long count;
  double h;
};

Steps steps_of(const SdeConfig& cfg) {
  const long long n = step_count(cfg.t_end, cfg.dt);
  return {n, cfg.t_end / static_cast<double>(n)};
}

void fill_normal(Rng& rng, std::normal_distribution<double>& nd, Vector& xi) {
  for (int i = 0; i < xi.size(); ++i) xi[i] = nd(rng);
}

template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body body) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

void SdeConfig::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::BadValue, "sigma must be >= 0");
  if (!(dt > 0.0)) throw Error(ErrorCode::BadValue, "dt must be > 0");
  if (!(t_end >= dt)) throw Error(ErrorCode::BadValue, "t_end must be >= dt");
  if (t_end / dt > 1e8) throw Error(ErrorCode::BadValue, "more than 1e8 steps");
  if (record_every < 1) throw Error(ErrorCode::BadValue, "record_every must be >= 1");
}

ChartDrift make_chart_drift(const DriftKind& drift, int n) {
  return std::visit(
      [n](const auto& d) -> ChartDrift {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, NoDrift>) {
          return ChartDrift::zero(n);
        } else if constexpr (std::is_same_v<T, ReplicatorDrift>) {
          if (d.a.n() != n) throw Error(ErrorCode::DimensionMismatch, "payoff matrix vs state");
          return ChartDrift::replicator(d.a);
        } else {
          if (d.alpha.size() != n) throw Error(ErrorCode::DimensionMismatch, "alpha vs state");
          if (!(d.alpha.minCoeff() > 0.0)) throw Error(ErrorCode::NonPositiveEntry, "alpha");
          const ContrastMatrix c = contrast_matrix(n);
          return ChartDrift(c.psi * d.alpha, -d.alpha.sum() * c.psi);
        }
      },
      drift);
}

Composition bm_exact(const Composition& p0, double t, double sigma, std::uint64_t seed) {
  if (!(t >= 0.0)) throw Error(ErrorCode::BadValue, "t must be >= 0");
  Rng rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const double s = sigma * std::sqrt(t);
  Vector x = p0.entries().array().log().matrix();
  for (int i = 0; i < x.size(); ++i) x[i] += s * nd(rng);
  // p0 (+) sfm(B) computed as sfm(log p0 + B), which cannot underflow to zero
  return sfm(x);
}

Trajectory bm_path(const Composition& p0, const SdeConfig& cfg) {
  Trajectory tr = sde_path(NoDrift{}, p0, cfg);
  tr.scheme = "bm-exact-increments";
  return tr;
}

double heat_kernel_log_density(const Composition& p, const Composition& q, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveTime, "t must be > 0");
  const double d = dist(p, q);
  const double k = p.size() - 1;
  return -0.5 * k * std::log(2.0 * std::numbers::pi * t) - d * d / (2.0 * t);
}

double heat_kernel_density(const Composition& p, const Composition& q, double t) {
  return std::exp(heat_kernel_log_density(p, q, t));
}

Trajectory sde_path(const DriftKind& drift, const Composition& p0, const SdeConfig& cfg) {
  cfg.validate();
  const int n = p0.size();
  const ContrastMatrix c = contrast_matrix(n);
  ChartDrift f = make_chart_drift(drift, n);
  const Steps st = steps_of(cfg);
  const double noise = cfg.sigma * std::sqrt(st.h);

  Trajectory tr;
  tr.scheme = std::holds_alternative<NoDrift>(drift) ? "euler-maruyama-ilr-driftless"
                                                     : "euler-maruyama-ilr";
  tr.seed = cfg.master_seed;
  Rng rng(cfg.master_seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Vector x = ilr(p0, c).coords(), b(n - 1), xi(n - 1);
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.ilr.push_back(x);
    tr.states.push_back(ilr_inv(IlrPoint(x), c));
  };
  record(0.0);
  for (long long k = 1; k <= st.count; ++k) {
    f.eval(x, b);
    fill_normal(rng, nd, xi);
    x += st.h * b + noise * xi;
    if (k % cfg.record_every == 0 || k == st.count) record(static_cast<double>(k) * st.h);
  }
  return tr;
}

Vector sde_terminal_ilr(const DriftKind& drift, const Composition& p0, const SdeConfig& cfg) {
  cfg.validate();
  const int n = p0.size();
  ChartDrift f = make_chart_drift(drift, n);
  const Steps st = steps_of(cfg);
  const double noise = cfg.sigma * std::sqrt(st.h);
  Rng rng(cfg.master_seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Vector x = ilr(p0).coords(), b(n - 1), xi(n - 1);
  for (long long k = 1; k <= st.count; ++k) {
    f.eval(x, b);
    fill_normal(rng, nd, xi);
    x += st.h * b + noise * xi;
  }
  return x;
}

std::pair<Trajectory, Trajectory> coupled_pair(const DriftKind& drift, const Composition& p0,
                                               const Composition& q0, const SdeConfig& cfg) {
  cfg.validate();
  if (p0.size() != q0.size()) throw Error(ErrorCode::DimensionMismatch, "coupled_pair");
  const int n = p0.size();
  const ContrastMatrix c = contrast_matrix(n);
  ChartDrift f = make_chart_drift(drift, n);
  ChartDrift g = f;
  const Steps st = steps_of(cfg);
  const double noise = cfg.sigma * std::sqrt(st.h);

  std::pair<Trajectory, Trajectory> out;
  out.first.scheme = out.second.scheme = "euler-maruyama-ilr-synchronous";
  out.first.seed = out.second.seed = cfg.master_seed;
  Rng rng(cfg.master_seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Vector x = ilr(p0, c).coords(), y = ilr(q0, c).coords();
  Vector bx(n - 1), by(n - 1), xi(n - 1);
  auto record = [&](double t) {
    out.first.times.push_back(t);
    out.second.times.push_back(t);
    out.first.ilr.push_back(x);
    out.second.ilr.push_back(y);
    out.first.states.push_back(ilr_inv(IlrPoint(x), c));
    out.second.states.push_back(ilr_inv(IlrPoint(y), c));
  };
  record(0.0);
  for (long long k = 1; k <= st.count; ++k) {
    f.eval(x, bx);
    g.eval(y, by);
    fill_normal(rng, nd, xi);
    x += st.h * bx + noise * xi;
    y += st.h * by + noise * xi;
    if (k % cfg.record_every == 0 || k == st.count) record(static_cast<double>(k) * st.h);
  }
  return out;
}

Matrix ou_fitness_path(double lambda_corr, int n, const SdeConfig& cfg, std::uint64_t seed) {
  if (!(lambda_corr > 0.0)) throw Error(ErrorCode::BadValue, "lambda_corr must be > 0");
  if (n < 1) throw Error(ErrorCode::BadDimension, "n must be >= 1");
  cfg.validate();
  const Steps st = steps_of(cfg);
  const double a = std::exp(-st.h / (lambda_corr * lambda_corr));
  const double b = std::sqrt(-std::expm1(-2.0 * st.h / (lambda_corr * lambda_corr)));
  Rng rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix y(st.count + 1, n);
  for (int i = 0; i < n; ++i) y(0, i) = nd(rng);
  for (long long k = 1; k <= st.count; ++k)
    for (int i = 0; i < n; ++i) y(k, i) = a * y(k - 1, i) + b * nd(rng);
  return y;
}

Trajectory wong_zakai_path(double lambda_corr, const Composition& p0, const SdeConfig& cfg) {
  cfg.validate();
  if (!(lambda_corr > 0.0)) throw Error(ErrorCode::BadValue, "lambda_corr must be > 0");
  if (cfg.dt > lambda_corr * lambda_corr / 10.0 * (1.0 + 1e-12))
    throw Error(ErrorCode::StepVsCorrelation, "dt must be <= lambda^2 / 10");
  const int n = p0.size();
  const ContrastMatrix c = contrast_matrix(n);
  const Steps st = steps_of(cfg);
  SdeConfig half = cfg;
  half.dt = 0.5 * st.h;
  const Matrix y = ou_fitness_path(lambda_corr, n, half, cfg.master_seed);
  const double kappa = cfg.sigma / (std::numbers::sqrt2 * lambda_corr);
  auto g = [&](long long row) -> Vector { return kappa * (c.psi * y.row(row).transpose()); };

  Trajectory tr;
  tr.scheme = "rk4-ilr-ou-fitness";
  tr.seed = cfg.master_seed;
  Vector x = ilr(p0, c).coords();
  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.ilr.push_back(x);
    tr.states.push_back(ilr_inv(IlrPoint(x), c));
  };
  record(0.0);
  for (long long k = 1; k <= st.count; ++k) {
    // the drift does not depend on x, so stages 2 and 3 coincide
    const Vector k1 = g(2 * (k - 1)), k2 = g(2 * k - 1), k4 = g(2 * k);
    x += (st.h / 6.0) * (k1 + 4.0 * k2 + k4);
    if (k % cfg.record_every == 0 || k == st.count) record(static_cast<double>(k) * st.h);
  }
  return tr;
}

Vector ito_corrector(const Composition& p) {
  const Vector& v = p.entries();
  return -v.cwiseProduct((v.array() - v.squaredNorm()).matrix());
}

Vector ito_drift(const DriftKind& drift, const Composition& p, double sigma) {
  const Matrix g = shahshahani_inv(p);
  const Vector& v = p.entries();
  Vector b = sigma * sigma * ito_corrector(p);
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ReplicatorDrift>) {
          b += g * (d.a.a() * v);
        } else if constexpr (std::is_same_v<T, DirichletLangevinDrift>) {
          b += g * (d.alpha - d.alpha.sum() * v);
        }
      },
      drift);
  return b;
}

RandomWalk::RandomWalk(int n) : n_(n) {
  if (n < 2) throw Error(ErrorCode::BadDimension, "walk needs n >= 2");
  sampler_ = [m = n - 1](Rng& rng) {
    Vector xi(m);
    for (int i = 0; i < m; ++i) xi[i] = (rng() >> 63) ? 1.0 : -1.0;
    return xi;
  };
}

RandomWalk::RandomWalk(int n, StepSampler sampler, std::uint64_t check_seed)
    : n_(n), sampler_(std::move(sampler)) {
  if (n < 2) throw Error(ErrorCode::BadDimension, "walk needs n >= 2");
  const int m = n - 1, draws = 10000;
  Rng rng(check_seed);
  Matrix xs(draws, m);
  for (int k = 0; k < draws; ++k) {
    const Vector xi = sampler_(rng);
    if (xi.size() != m) throw Error(ErrorCode::BadStepLaw, "sampler returned wrong dimension");
    xs.row(k) = xi.transpose();
  }
  const double root = std::sqrt(static_cast<double>(draws));
  for (int i = 0; i < m; ++i) {
    const Eigen::ArrayXd c = xs.col(i).array();
    const double mean = c.mean();
    const double sd = std::sqrt((c - mean).square().mean());
    if (std::abs(mean) > 5.0 * sd / root + 1e-12)
      throw Error(ErrorCode::BadStepLaw, "step mean is not zero");
    for (int j = i; j < m; ++j) {
      const Eigen::ArrayXd prod = c * xs.col(j).array();
      const double pm = prod.mean();
      const double psd = std::sqrt((prod - pm).square().mean());
      const double target = i == j ? 1.0 : 0.0;
      if (std::abs(pm - target) > 5.0 * psd / root + 1e-12)
        throw Error(ErrorCode::BadStepLaw, "step covariance is not the identity");
    }
  }
}

std::vector<Vector> RandomWalk::walk_ilr(const Composition& p0, int steps, std::uint64_t seed) const {
  if (steps < 0) throw Error(ErrorCode::BadValue, "steps must be >= 0");
  if (p0.size() != n_) throw Error(ErrorCode::DimensionMismatch, "walk start");
  Rng rng(seed);
  std::vector<Vector> xs;
  xs.reserve(steps + 1);
  xs.push_back(ilr(p0).coords());
  for (int k = 0; k < steps; ++k) xs.push_back(xs.back() + sampler_(rng));
  return xs;
}

std::vector<Composition> RandomWalk::walk(const Composition& p0, int steps, std::uint64_t seed) const {
  const ContrastMatrix c = contrast_matrix(n_);
  std::vector<Composition> out;
  for (const Vector& x : walk_ilr(p0, steps, seed)) out.push_back(ilr_inv(IlrPoint(x), c));
  return out;
}

std::vector<Composition> simplex_random_walk(const Composition& p0, int steps, std::uint64_t seed) {
  return RandomWalk(p0.size()).walk(p0, steps, seed);
}

Trajectory donsker_rescaled(const std::vector<Composition>& walk, int n_steps,
                            const std::vector<double>& t_grid) {
  if (walk.empty()) throw Error(ErrorCode::WalkTooShort, "empty walk");
  if (n_steps < 1) throw Error(ErrorCode::BadValue, "n_steps must be >= 1");
  const int n = walk.front().size();
  const ContrastMatrix c = contrast_matrix(n);
  const long long last = static_cast<long long>(walk.size()) - 1;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_steps));
  Trajectory tr;
  tr.scheme = "donsker-increment-interpolation";
  for (double t : t_grid) {
    if (!(t >= 0.0)) throw Error(ErrorCode::BadValue, "t_grid entries must be >= 0");
    const double s = n_steps * t;
    const long long i = static_cast<long long>(std::floor(s));
    const double frac = s - static_cast<double>(i);
    if (i > last || (i == last && frac > 0.0))
      throw Error(ErrorCode::WalkTooShort, "walk has " + std::to_string(last) + " steps");
    Vector x = ilr(walk[i], c).coords();
    if (frac > 0.0) x += frac * (ilr(walk[i + 1], c).coords() - x);
    x *= scale;
    tr.times.push_back(t);
    tr.ilr.push_back(x);
    tr.states.push_back(ilr_inv(IlrPoint(x), c));
  }
  return tr;
}

Composition sample_dirichlet(const Vector& alpha, Rng& rng) {
  Vector g(alpha.size());
  for (int i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0)) throw Error(ErrorCode::NonPositiveEntry, "alpha");
    std::gamma_distribution<double> gd(alpha[i], 1.0);
    do {
      g[i] = gd(rng);
    } while (g[i] <= 0.0);
  }
  return closure(g);
}

Ensemble run_ensemble(std::size_t count, std::uint64_t master_seed,
                      const std::function<Composition(std::uint64_t)>& fn, unsigned workers) {
  if (count < 1) throw Error(ErrorCode::BadValue, "ensemble needs count >= 1");
  std::vector<std::optional<Composition>> slots(count);
  Ensemble e;
  e.seeds.resize(count);
  for (std::size_t i = 0; i < count; ++i) e.seeds[i] = derive_seed(master_seed, i);
  parallel_for(count, workers, [&](std::size_t i) { slots[i] = fn(e.seeds[i]); });
  e.terminal_states.reserve(count);
  for (auto& s : slots) e.terminal_states.push_back(std::move(*s));
  e.config.master_seed = master_seed;
  return e;
}

std::vector<Vector> run_ensemble_ilr(std::size_t count, std::uint64_t master_seed,
                                     const std::function<Vector(std::uint64_t)>& fn,
                                     unsigned workers) {
  std::vector<Vector> out(count);
  parallel_for(count, workers,
               [&](std::size_t i) { out[i] = fn(derive_seed(master_seed, i)); });
  return out;
}

void write_ensemble_csv(std::ostream& os, const Ensemble& e) {
  if (e.terminal_states.empty()) return;
  const int n = e.terminal_states.front().size();
  os << "trajectory_id,seed";
  for (int i = 1; i <= n; ++i) os << ",p_" << i;
  os << "\n";
  for (std::size_t k = 0; k < e.terminal_states.size(); ++k) {
    os << k << ',' << e.seeds[k];
    for (int i = 0; i < n; ++i) os << ',' << format_double(e.terminal_states[k][i]);
    os << "\n";
  }
}

}  // namespace simplexdyn
