#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <utility>
#include <variant>
#include <vector>

#include "simplexdyn/aitchison.hpp"
#include "simplexdyn/payoff.hpp"
#include "simplexdyn/replicator.hpp"
#include "simplexdyn/seeding.hpp"

namespace simplexdyn {

struct NoDrift {};
struct ReplicatorDrift {
  PayoffMatrix a;
};
struct DirichletLangevinDrift {
  Vector alpha;
};
using DriftKind = std::variant<NoDrift, ReplicatorDrift, DirichletLangevinDrift>;

// Chart drift for a DriftKind: None -> 0, Replicator(A) -> psi A sfm,
// DirichletLangevin(alpha) -> psi (alpha - |alpha| sfm).
ChartDrift make_chart_drift(const DriftKind& drift, int n);

struct SdeConfig {
  double sigma = 1.0;
  double t_end = 1.0;
  double dt = 1e-3;
  int record_every = 1;
  std::uint64_t master_seed = 0;

  void validate() const;
};

struct Ensemble {
  std::vector<Composition> terminal_states;
  std::vector<std::uint64_t> seeds;
  SdeConfig config;
  std::string scheme;

  std::size_t size() const { return terminal_states.size(); }
};

Composition bm_exact(const Composition& p0, double t, double sigma, std::uint64_t seed);
Trajectory bm_path(const Composition& p0, const SdeConfig& cfg);
double heat_kernel_density(const Composition& p, const Composition& q, double t);
// ln of the density; finite where the density itself underflows (short times).
double heat_kernel_log_density(const Composition& p, const Composition& q, double t);

// Euler-Maruyama in the chart: x += drift(x) dt + sigma sqrt(dt) xi.
Trajectory sde_path(const DriftKind& drift, const Composition& p0, const SdeConfig& cfg);
// Same stream and scheme as sde_path, keeping only the chart point at t_end.
Vector sde_terminal_ilr(const DriftKind& drift, const Composition& p0, const SdeConfig& cfg);
std::pair<Trajectory, Trajectory> coupled_pair(const DriftKind& drift, const Composition& p0,
                                               const Composition& q0, const SdeConfig& cfg);

// Unit-variance OU samples at spacing cfg.dt on [0, t_end]; row k is y(k dt).
// Correlation exp(-|s-t| / lambda^2).
Matrix ou_fitness_path(double lambda_corr, int n, const SdeConfig& cfg, std::uint64_t seed);
// RK4 on x' = (sigma / sqrt 2) lambda^{-1} psi y(t). The limit as lambda -> 0 is
// the Aitchison diffusion with amplitude sigma.
Trajectory wong_zakai_path(double lambda_corr, const Composition& p0, const SdeConfig& cfg);

// -g^{-1}(p) p: drift of the sigma = 1 diffusion in simplex coordinates per unit sigma^2.
Vector ito_corrector(const Composition& p);
// Simplex-coordinate Ito drift g^{-1}(p) A p + sigma^2 ito_corrector(p) (A = 0 for None).
Vector ito_drift(const DriftKind& drift, const Composition& p, double sigma);

using StepSampler = std::function<Vector(Rng&)>;

// Random walk with i.i.d. chart steps. A custom sampler must have mean 0 and
// identity covariance; this is checked on 1e4 draws at a 5 SE gate.
class RandomWalk {
 public:
  explicit RandomWalk(int n);  // Rademacher steps
  RandomWalk(int n, StepSampler sampler, std::uint64_t check_seed = 0x5eed);

  std::vector<Composition> walk(const Composition& p0, int steps, std::uint64_t seed) const;
  std::vector<Vector> walk_ilr(const Composition& p0, int steps, std::uint64_t seed) const;
  Vector draw(Rng& rng) const { return sampler_(rng); }
  int n() const { return n_; }

 private:
  int n_;
  StepSampler sampler_;
};

std::vector<Composition> simplex_random_walk(const Composition& p0, int steps, std::uint64_t seed);
Trajectory donsker_rescaled(const std::vector<Composition>& walk, int n_steps,
                            const std::vector<double>& t_grid);

Composition sample_dirichlet(const Vector& alpha, Rng& rng);

// Runs fn(seed_i) for i < count with seed_i = derive_seed(master, i).
// workers = 0 picks the hardware concurrency.
Ensemble run_ensemble(std::size_t count, std::uint64_t master_seed,
                      const std::function<Composition(std::uint64_t)>& fn, unsigned workers = 0);
std::vector<Vector> run_ensemble_ilr(std::size_t count, std::uint64_t master_seed,
                                     const std::function<Vector(std::uint64_t)>& fn,
                                     unsigned workers = 0);

void write_ensemble_csv(std::ostream& os, const Ensemble& e);

}  // namespace simplexdyn
