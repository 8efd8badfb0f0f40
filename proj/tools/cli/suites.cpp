#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace simplexdyn::cli {

namespace {

Composition random_composition(int n, Rng& rng, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  Vector x(n - 1);
  for (int i = 0; i < n - 1; ++i) x[i] = nd(rng);
  return ilr_inv(IlrPoint(x));
}

TestReport gate(std::string name, double stat, double thr, Direction dir, std::uint64_t seed,
                std::vector<std::size_t> sizes, std::string detail = {}) {
  TestReport r = make_report(std::move(name), stat, thr, dir, seed, std::move(sizes));
  r.detail = std::move(detail);
  return r;
}

std::vector<Composition> interior_grid(int g) {
  std::vector<Composition> out;
  for (int i = 1; i < g; ++i)
    for (int j = 1; i + j < g; ++j)
      out.emplace_back(Vector{{double(i) / g, double(j) / g, double(g - i - j) / g}});
  return out;
}

double lambda_of(const PayoffMatrix& a) {
  if (const auto d = decompose(a)) return d->lambda;
  const DefinitenessReport r = definiteness(a);
  return r.classification == Definiteness::NegativeDefinite ? r.rayleigh_lambda : 0.0;
}

}  // namespace

bool SuiteResult::pass() const {
  return std::all_of(gates.begin(), gates.end(), [](const TestReport& r) { return r.pass; });
}

Matrix telema() { return Matrix{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}; }

ContractionOptions::ContractionOptions()
    : a(telema() - 10.0 * Matrix::Identity(3, 3)), negative_control(Matrix{{1, 0}, {0, -1}}) {}

SuiteResult run_geometry(const GeometryOptions& o) {
  SuiteResult out{"geometry", {}, {}};
  Rng rng(o.seed);
  std::uniform_real_distribution<double> ua(-2.0, 2.0);
  double rule = 0.0, contrast = 0.0, round_clr = 0.0, round_ilr = 0.0, iso = 0.0, dist_iso = 0.0;
  double lip = -1.0;
  for (int n = 2; n <= 8; ++n) {
    const ContrastMatrix c = contrast_matrix(n);
    const Matrix id = Matrix::Identity(n - 1, n - 1);
    const Matrix proj = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / n);
    contrast = std::max({contrast, (c.psi * c.psi.transpose() - id).cwiseAbs().maxCoeff(),
                         (c.psi.transpose() * c.psi - proj).cwiseAbs().maxCoeff()});
  }
  for (int k = 0; k < o.instances; ++k) {
    const int n = 2 + k % 7;
    const Composition p = random_composition(n, rng, 1.0);
    const Composition q = random_composition(n, rng, 1.0);
    const double alpha = ua(rng);
    const Vector lhs = clr(perturb(power(alpha, p), q)).entries();
    const Vector rhs = alpha * clr(p).entries() + clr(q).entries();
    rule = std::max(rule, (lhs - rhs).cwiseAbs().maxCoeff());
    round_clr = std::max(round_clr, (sfm(clr(p)).entries() - p.entries()).cwiseAbs().maxCoeff());
    round_ilr = std::max(round_ilr, (ilr_inv(ilr(p)).entries() - p.entries()).cwiseAbs().maxCoeff());
    const double ip = inner(p, q);
    iso = std::max({iso, std::abs(ip - clr(p).entries().dot(clr(q).entries())),
                    std::abs(ip - ilr(p).coords().dot(ilr(q).coords()))});
    dist_iso = std::max(dist_iso, std::abs((ilr(p).coords() - ilr(q).coords()).norm() - dist(p, q)));
    lip = std::max(lip, (p.entries() - q.entries()).norm() - dist(p, q));
  }
  const std::vector<std::size_t> sz{static_cast<std::size_t>(o.instances)};
  out.gates.push_back(gate("transformation_rule", rule, 1e-12, Direction::LessEqual, o.seed, sz));
  out.gates.push_back(gate("contrast_identities", contrast, 1e-12, Direction::LessEqual, o.seed, {7}));
  out.gates.push_back(gate("clr_round_trip", round_clr, 1e-12, Direction::LessEqual, o.seed, sz));
  out.gates.push_back(gate("ilr_round_trip", round_ilr, 1e-12, Direction::LessEqual, o.seed, sz));
  out.gates.push_back(gate("inner_isometry", iso, 1e-12, Direction::LessEqual, o.seed, sz));
  out.gates.push_back(gate("dist_isometry", dist_iso, 1e-12, Direction::LessEqual, o.seed, sz));
  out.gates.push_back(gate("dist_dominates_euclidean", lip, 1e-12, Direction::LessEqual, o.seed, sz,
                           "max of |p-q| - dist(p,q)"));
  return out;
}

SuiteResult run_dirichlet(const DirichletOptions& o) {
  SuiteResult out{"dirichlet", {}, {}};
  const PayoffMatrix a(o.a);
  const int n = a.n();
  if (o.alpha.size() != n) throw Error(ErrorCode::DimensionMismatch, "alpha vs matrix");

  if (n == 3) {
    double worst = 0.0;
    const auto grid = interior_grid(47);
    for (const auto& p : grid) worst = std::max(worst, std::abs(dircond_residual(a, o.alpha, p)));
    out.gates.push_back(gate("dircond_residual_grid", worst, 1e-12, Direction::LessEqual, 0,
                             {grid.size()}));
  }

  SdeConfig cfg;
  cfg.sigma = std::numbers::sqrt2;
  cfg.dt = o.dt;
  const DriftKind drift = ReplicatorDrift{a};

  cfg.t_end = o.t_end;
  Ensemble from_dir = run_ensemble(
      o.paths, o.seed,
      [&](std::uint64_t s) {
        Rng start(derive_seed(s, 0xd1));
        SdeConfig c = cfg;
        c.master_seed = s;
        return ilr_inv(IlrPoint(sde_terminal_ilr(drift, sample_dirichlet(o.alpha, start), c)));
      },
      o.workers);
  from_dir.config = cfg;
  from_dir.config.master_seed = o.seed;
  TestReport r1 = dirichlet_moment_check(from_dir, o.alpha);
  r1.name = "moments_from_dirichlet_start";
  out.gates.push_back(r1);

  cfg.t_end = o.mixing_t_end;
  const Composition start(o.mixing_start);
  Ensemble from_point = run_ensemble(
      o.paths, o.seed + 1,
      [&](std::uint64_t s) {
        SdeConfig c = cfg;
        c.master_seed = s;
        return ilr_inv(IlrPoint(sde_terminal_ilr(drift, start, c)));
      },
      o.workers);
  from_point.config = cfg;
  from_point.config.master_seed = o.seed + 1;
  TestReport r2 = dirichlet_moment_check(from_point, o.alpha);
  r2.name = "moments_from_point_start";
  out.gates.push_back(r2);
  return out;
}

SuiteResult run_contraction(const ContractionOptions& o) {
  SuiteResult out{"contraction", {}, {}};
  const PayoffMatrix a(o.a);
  const double lambda = lambda_of(a);
  SdeConfig cfg;
  cfg.sigma = o.sigma;
  cfg.t_end = o.t_end;
  cfg.dt = o.dt;

  double wa = 0.0, wb = 0.0, wc = 0.0;
  int fa = 0, fb = 0, fc = 0;
  std::string first_b;
  for (int i = 0; i < o.pairs; ++i) {
    Rng rng(derive_seed(o.seed, 1000 + i));
    const Composition p = random_composition(a.n(), rng, 1.0);
    const Composition q = random_composition(a.n(), rng, 1.0);
    cfg.master_seed = derive_seed(o.seed, i);
    const auto pair = coupled_pair(ReplicatorDrift{a}, p, q, cfg);
    const ContractionReport r = contraction_report(pair.first, pair.second, lambda, cfg.dt);
    wa = std::max(wa, r.worst_a);
    wb = std::max(wb, r.worst_b);
    wc = std::max(wc, r.worst_c);
    fa += !r.a_pass;
    fb += !r.b_pass;
    fc += !r.c_pass;
    if (!r.b_pass && first_b.empty()) {
      for (std::size_t k = 0; k < pair.first.size(); ++k) {
        const double de = (pair.first.states[k].entries() - pair.second.states[k].entries()).norm();
        const double d0 = (pair.first.ilr[0] - pair.second.ilr[0]).norm();
        if (de > std::exp(-lambda * pair.first.times[k]) * d0 * (1.0 + 10.0 * cfg.dt)) {
          first_b = "pair " + std::to_string(i) + " first violates (b) at t = " +
                    format_double(pair.first.times[k]);
          break;
        }
      }
    }
  }
  const std::vector<std::size_t> sz{static_cast<std::size_t>(o.pairs)};
  out.gates.push_back(gate("nonexpansion_a", wa, 1.0, Direction::LessEqual, o.seed, sz,
                           std::to_string(fa) + " pairs violate"));
  if (lambda > 0.0)
    out.gates.push_back(gate("exponential_bound_b", wb, 1.0, Direction::LessEqual, o.seed, sz,
                             std::to_string(fb) + " pairs violate" +
                                 (first_b.empty() ? "" : "; " + first_b)));
  out.gates.push_back(gate("integral_estimate_c", wc, 1.0, Direction::LessEqual, o.seed, sz,
                           std::to_string(fc) + " pairs violate"));
  out.notes.push_back("lambda = " + format_double(lambda));

  const PayoffMatrix ctrl(o.negative_control);
  int witnesses = 0;
  std::string first;
  for (int s = 0; s < o.control_seeds; ++s) {
    Rng rng(derive_seed(o.seed ^ 0xc0ffee, 1000 + s));
    const Composition p = random_composition(ctrl.n(), rng, 1.0);
    const Composition q = random_composition(ctrl.n(), rng, 1.0);
    cfg.master_seed = derive_seed(o.seed ^ 0xc0ffee, s);
    const auto pair = coupled_pair(ReplicatorDrift{ctrl}, p, q, cfg);
    const ContractionReport r = contraction_report(pair.first, pair.second, 0.0, cfg.dt);
    if (!r.a_pass) {
      ++witnesses;
      if (first.empty() && r.witness)
        first = "seed index " + std::to_string(s) + ", t = " + format_double(r.witness->time) +
                ", d = " + format_double(r.witness->lhs) + " > " + format_double(r.witness->rhs);
    }
  }
  out.gates.push_back(gate("negative_control_witness", witnesses, 1.0, Direction::GreaterEqual,
                           o.seed ^ 0xc0ffee, {static_cast<std::size_t>(o.control_seeds)},
                           first.empty() ? "no expansion witness found" : first));
  return out;
}

SuiteResult run_wongzakai(const WongZakaiOptions& o) {
  SuiteResult out{"wongzakai", {}, {}};
  const Composition p0 = Composition::barycenter(o.n);
  const auto exact = run_ensemble_ilr(
      o.paths, o.seed,
      [&](std::uint64_t s) { return ilr(bm_exact(p0, o.t_end, o.sigma, s)).coords(); }, o.workers);
  std::vector<double> ed, se;
  for (std::size_t k = 0; k < o.lambdas.size(); ++k) {
    const double lam = o.lambdas[k];
    SdeConfig cfg;
    cfg.sigma = o.sigma;
    cfg.t_end = o.t_end;
    cfg.dt = std::min(1e-3, lam * lam / 10.0);
    const auto wz = run_ensemble_ilr(
        o.paths, derive_seed(o.seed, 100 + k),
        [&](std::uint64_t s) {
          SdeConfig c = cfg;
          c.master_seed = s;
          const Trajectory tr = [&] {
            SdeConfig cc = c;
            cc.record_every = static_cast<int>(step_count(cc.t_end, cc.dt));
            return wong_zakai_path(lam, p0, cc);
          }();
          return tr.ilr.back();
        },
        o.workers);
    ed.push_back(energy_distance(wz, exact));
    se.push_back(energy_standard_error(wz, exact, 10));
    out.notes.push_back("lambda " + format_double(lam) + ": energy " + format_double(ed.back()) +
                        " (se " + format_double(se.back()) + ")");
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < ed.size(); ++k) {
    const double tol = 2.0 * std::sqrt(se[k] * se[k] + se[k + 1] * se[k + 1]);
    worst = std::max(worst, (ed[k + 1] - ed[k]) / tol);
  }
  std::string detail;
  for (const auto& nline : out.notes) detail += nline + "; ";
  out.gates.push_back(gate("energy_monotone_in_lambda", worst, 1.0, Direction::LessEqual, o.seed,
                           {o.paths, o.lambdas.size()},
                           "max (E_next - E_prev) / (2 se); " + detail));
  return out;
}

SuiteResult run_donsker(const DonskerOptions& o) {
  SuiteResult out{"donsker", {}, {}};
  const Composition p0 = Composition::barycenter(o.n);
  const RandomWalk rw(o.n);
  std::vector<double> ks;
  for (std::size_t k = 0; k < o.n_steps.size(); ++k) {
    const int ns = o.n_steps[k];
    std::vector<std::vector<double>> coords(o.n - 1);
    for (std::size_t w = 0; w < o.walks; ++w) {
      const auto walk = rw.walk(p0, ns, derive_seed(o.seed, w));
      const Trajectory tr = donsker_rescaled(walk, ns, {1.0});
      for (int i = 0; i < o.n - 1; ++i) coords[i].push_back(tr.ilr.back()[i]);
    }
    double worst = 0.0;
    for (auto& c : coords) worst = std::max(worst, ks_statistic(c, normal_cdf));
    ks.push_back(worst);
    out.notes.push_back("n_steps " + std::to_string(ns) + ": KS " + format_double(worst));
  }
  double rise = -1.0;
  for (std::size_t k = 0; k + 1 < ks.size(); ++k) rise = std::max(rise, ks[k + 1] - ks[k]);
  std::string detail;
  for (const auto& nline : out.notes) detail += nline + "; ";
  out.gates.push_back(gate("ks_decreasing", rise, 0.0, Direction::LessEqual, o.seed,
                           {o.walks, o.n_steps.size()}, "max KS increase; " + detail));
  out.gates.push_back(gate("ks_final", ks.back(), 0.05, Direction::LessEqual, o.seed, {o.walks}));
  return out;
}

SuiteResult run_transience(const TransienceOptions& o) {
  SuiteResult out{"transience", {}, {}};
  const Composition p0 = Composition::barycenter(o.n);
  Ensemble e = run_ensemble(o.paths, o.seed,
                            [&](std::uint64_t s) { return bm_exact(p0, o.t, 1.0, s); });
  e.config.master_seed = o.seed;
  out.gates.push_back(vertex_absorption_stats(e, 0.01));
  return out;
}

SuiteResult run_jko(const JkoOptions& o) {
  SuiteResult out{"jko", {}, {}};
  const QuantileDensity q0 = QuantileDensity::gaussian(o.m, 0.0, o.sd0);
  std::vector<double> err;
  for (int ns : o.n_steps) {
    const JkoFlowResult r = jko_flow_vs_heat(q0, o.t_end, ns, o.sigma);
    err.push_back(r.rows.back().w2_error_vs_exact);
    out.notes.push_back("n_steps " + std::to_string(ns) + ": W2 error " + format_double(err.back()));
  }
  const std::vector<std::size_t> sz{static_cast<std::size_t>(o.m)};
  for (std::size_t k = 0; k + 1 < err.size(); ++k) {
    const double ratio = err[k + 1] / err[k];
    const std::string tag =
        std::to_string(o.n_steps[k]) + "_" + std::to_string(o.n_steps[k + 1]);
    out.gates.push_back(gate("error_ratio_upper_" + tag, ratio, 0.65, Direction::LessEqual, 0, sz));
    out.gates.push_back(gate("error_ratio_lower_" + tag, ratio, 0.35, Direction::GreaterEqual, 0, sz));
  }
  out.gates.push_back(gate("terminal_error", err.back(), 0.01, Direction::LessEqual, 0, sz));
  return out;
}

}  // namespace simplexdyn::cli
