#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simplexdyn/aitchison.hpp"

namespace simplexdyn {

class PayoffMatrix {
 public:
  explicit PayoffMatrix(Matrix a);

  int n() const { return static_cast<int>(a_.rows()); }
  const Matrix& a() const { return a_; }
  double operator()(int i, int j) const { return a_(i, j); }

 private:
  Matrix a_;
};

// A = -lambda*id + u (x) 1 + 1 (x) v with the gauge u_0 = 0.
struct Decomposition {
  double lambda = 0.0;
  Vector u;
  Vector v;
  double residual = 0.0;
};

Matrix reconstruct(const Decomposition& d);

enum class Definiteness { NegativeDefinite, NegativeSemiDefinite, Indefinite };

struct DefinitenessReport {
  Definiteness classification = Definiteness::Indefinite;
  double rayleigh_lambda = 0.0;
};

enum class EssFlag { Certified, SufficientConditionOnly, False };

const char* to_string(Definiteness d);
const char* to_string(EssFlag f);

struct NashPoint {
  Vector point;              // closed simplex
  std::vector<int> support;  // zero-based
};

struct EssPoint {
  Vector point;
  EssFlag flag = EssFlag::False;
};

struct EquilibriumReport {
  std::optional<Composition> interior_ne;
  std::vector<NashPoint> boundary_ne;
  std::optional<EssPoint> ess;
  std::vector<std::string> diagnostics;
};

struct MonotonicityWitness {
  Vector x;
  Vector y;
  double value = 0.0;
  bool infinitesimal = false;  // true: (p, h) form with x = ilr(p), y = h
};

struct MonotonicityResult {
  bool monotone_on_samples = true;
  std::optional<MonotonicityWitness> violation;
};

inline constexpr double kMatrixTolerance = 1e-9;

double potential_lambda(const PayoffMatrix& a, const Composition& p);
DefinitenessReport definiteness(const PayoffMatrix& a);
std::optional<double> sum_condition(const PayoffMatrix& a);
std::optional<Decomposition> decompose(const PayoffMatrix& a);
std::optional<Composition> interior_ne_decomposed(const Decomposition& d, int n);
std::vector<int> nash_set_zero_lambda(const Decomposition& d);
bool is_nash(const PayoffMatrix& a, const Vector& p, double tol = kMatrixTolerance);
EssFlag is_ess(const PayoffMatrix& a, const Vector& p, double tol = kMatrixTolerance);
EquilibriumReport enumerate_nash(const PayoffMatrix& a);
MonotonicityResult monotonicity_probe(const PayoffMatrix& a, int samples, std::uint64_t rng_seed);

}  // namespace simplexdyn
