#include "simplexdyn/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

namespace simplexdyn {

namespace {

void require_n(const PayoffMatrix& a, int n) {
  if (a.n() != n)
    throw Error(ErrorCode::DimensionMismatch,
                "matrix is " + std::to_string(a.n()) + "x" + std::to_string(a.n()) +
                    ", point has " + std::to_string(n) + " entries");
}

void require_closed_simplex(const Vector& p) {
  if (p.size() < 2) throw Error(ErrorCode::BadDimension, "point needs n >= 2");
  for (int i = 0; i < p.size(); ++i)
    if (!std::isfinite(p[i]) || p[i] < -1e-12)
      throw Error(ErrorCode::NonPositiveEntry, "negative entry in closed-simplex point");
  if (std::abs(p.sum() - 1.0) > kMatrixTolerance)
    throw Error(ErrorCode::BadValue, "closed-simplex point does not sum to 1");
}

// All points of the closed simplex with coordinates k/g.
void lattice(int n, int g, std::vector<Vector>& out) {
  std::vector<int> k(n, 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == n - 1) {
      k[i] = left;
      Vector p(n);
      for (int j = 0; j < n; ++j) p[j] = static_cast<double>(k[j]) / g;
      out.push_back(std::move(p));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      k[i] = c;
      self(self, i + 1, left - c);
    }
  };
  rec(rec, 0, g);
}

double lattice_size(int n, int g) {
  // binomial(g + n - 1, n - 1)
  double c = 1.0;
  for (int i = 1; i < n; ++i) c = c * (g + i) / i;
  return c;
}

bool essentially_equal(const Vector& a, const Vector& b, double tol) {
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

PayoffMatrix::PayoffMatrix(Matrix a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols())
    throw Error(ErrorCode::DimensionMismatch, "payoff matrix must be square");
  if (a_.rows() < 2) throw Error(ErrorCode::BadDimension, "payoff matrix needs n >= 2");
  if (!a_.allFinite()) throw Error(ErrorCode::BadValue, "non-finite payoff entry");
}

const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::NegativeDefinite: return "NegativeDefinite";
    case Definiteness::NegativeSemiDefinite: return "NegativeSemiDefinite";
    case Definiteness::Indefinite: return "Indefinite";
  }
  return "Unknown";
}

const char* to_string(EssFlag f) {
  switch (f) {
    case EssFlag::Certified: return "certified";
    case EssFlag::SufficientConditionOnly: return "sufficient-condition-only";
    case EssFlag::False: return "false";
  }
  return "unknown";
}

Matrix reconstruct(const Decomposition& d) {
  const int n = static_cast<int>(d.u.size());
  Matrix a = d.u * Vector::Ones(n).transpose() + Vector::Ones(n) * d.v.transpose();
  a.diagonal().array() -= d.lambda;
  return a;
}

double potential_lambda(const PayoffMatrix& a, const Composition& p) {
  require_n(a, p.size());
  const Vector& v = p.entries();
  return a.a().diagonal().dot(v) - v.dot(a.a() * v);
}

DefinitenessReport definiteness(const PayoffMatrix& a) {
  const ContrastMatrix c = contrast_matrix(a.n());
  const Matrix sym = 0.5 * (a.a() + a.a().transpose());
  const Matrix b = c.psi * sym * c.psi.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(b, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  DefinitenessReport r;
  if (top < -kMatrixTolerance) {
    r.classification = Definiteness::NegativeDefinite;
    r.rayleigh_lambda = -top;
  } else if (top <= kMatrixTolerance) {
    r.classification = Definiteness::NegativeSemiDefinite;
    r.rayleigh_lambda = 0.0;
  } else {
    r.classification = Definiteness::Indefinite;
    r.rayleigh_lambda = -top;
  }
  return r;
}

std::optional<double> sum_condition(const PayoffMatrix& a) {
  const int n = a.n();
  const double c = a(0, 1) + a(1, 0) - a(0, 0) - a(1, 1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(a(i, j) + a(j, i) - a(i, i) - a(j, j) - c) > kMatrixTolerance)
        return std::nullopt;
  return c;
}

std::optional<Decomposition> decompose(const PayoffMatrix& a) {
  const int n = a.n();
  Decomposition d;
  d.lambda = 0.5 * (a(0, 1) + a(1, 0) - a(0, 0) - a(1, 1));
  d.u = Vector::Zero(n);
  d.v = Vector::Zero(n);
  for (int j = 1; j < n; ++j) d.v[j] = a(0, j);
  d.v[0] = a(0, 0) + d.lambda;
  for (int i = 1; i < n; ++i) d.u[i] = a(i, 0) - d.v[0];
  d.residual = (a.a() - reconstruct(d)).cwiseAbs().maxCoeff();
  if (d.residual > kMatrixTolerance || d.lambda < -1e-12) return std::nullopt;
  if (d.lambda < 0.0) {
    // clamp, then refit v_0 so the reconstruction stays consistent
    d.lambda = 0.0;
    d.v[0] = a(0, 0);
    for (int i = 1; i < n; ++i) d.u[i] = a(i, 0) - d.v[0];
    d.residual = (a.a() - reconstruct(d)).cwiseAbs().maxCoeff();
  }
  return d;
}

std::optional<Composition> interior_ne_decomposed(const Decomposition& d, int n) {
  if (static_cast<int>(d.u.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "decomposition size differs from n");
  if (d.lambda <= 0.0) throw Error(ErrorCode::LambdaZero, "use nash_set_zero_lambda");
  // shift so the smallest entry is zero; p* is invariant under u -> u + c1
  const Vector ut = d.u.array() - d.u.minCoeff();
  const double total = ut.sum();
  if (!(d.lambda > total)) return std::nullopt;
  const double delta = (1.0 - total / d.lambda) / n;
  return Composition(Vector((ut / d.lambda).array() + delta));
}

std::vector<int> nash_set_zero_lambda(const Decomposition& d) {
  if (std::abs(d.lambda) > 1e-12) throw Error(ErrorCode::LambdaNonzero, "lambda must be 0");
  const double top = d.u.maxCoeff();
  std::vector<int> idx;
  for (int i = 0; i < d.u.size(); ++i)
    if (d.u[i] >= top - kMatrixTolerance) idx.push_back(i);
  return idx;
}

bool is_nash(const PayoffMatrix& a, const Vector& p, double tol) {
  require_n(a, static_cast<int>(p.size()));
  require_closed_simplex(p);
  const Vector ap = a.a() * p;
  return ap.maxCoeff() <= p.dot(ap) + tol;
}

EssFlag is_ess(const PayoffMatrix& a, const Vector& p, double tol) {
  if (!is_nash(a, p, tol)) throw Error(ErrorCode::NotNash, "is_ess needs a Nash equilibrium");
  const int n = a.n();
  const bool interior = p.minCoeff() > 1e-12;

  if (const auto d = decompose(a)) {
    if (d->lambda > 0.0) {
      if (const auto ps = interior_ne_decomposed(*d, n))
        if (essentially_equal(ps->entries(), p, kMatrixTolerance)) return EssFlag::Certified;
    } else {
      const auto ties = nash_set_zero_lambda(*d);
      if (ties.size() == 1) {
        Vector vertex = Vector::Zero(n);
        vertex[ties[0]] = 1.0;
        if (essentially_equal(vertex, p, kMatrixTolerance)) return EssFlag::Certified;
      }
    }
  }
  if (interior && definiteness(a).classification == Definiteness::NegativeDefinite)
    return EssFlag::Certified;

  int g = 1;
  while (lattice_size(n, g) < 1e4) ++g;
  std::vector<Vector> grid;
  lattice(n, g, grid);
  const Vector ap = a.a() * p;
  const double pap = p.dot(ap);
  for (const Vector& q : grid) {
    if (essentially_equal(q, p, 1e-12)) continue;
    const double qap = q.dot(ap);
    if (qap > pap + tol) return EssFlag::False;
    if (qap >= pap - tol) {
      // alternative best reply: needs p.Aq > q.Aq
      const Vector aq = a.a() * q;
      if (p.dot(aq) - q.dot(aq) <= 1e-12) return EssFlag::False;
    }
  }
  return EssFlag::SufficientConditionOnly;
}

EquilibriumReport enumerate_nash(const PayoffMatrix& a) {
  const int n = a.n();
  if (n > 5) throw Error(ErrorCode::TooLarge, "support enumeration is limited to n <= 5");
  EquilibriumReport report;
  std::vector<NashPoint> found;

  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    const int k = static_cast<int>(s.size());
    // [A_SS  -1] [p_S]   [0]
    // [1^T    0] [ c ] = [1]
    Matrix m = Matrix::Zero(k + 1, k + 1);
    Vector rhs = Vector::Zero(k + 1);
    for (int r = 0; r < k; ++r) {
      for (int c = 0; c < k; ++c) m(r, c) = a(s[r], s[c]);
      m(r, k) = -1.0;
      m(k, r) = 1.0;
    }
    rhs[k] = 1.0;
    Eigen::FullPivLU<Matrix> lu(m);
    lu.setThreshold(1e-10);
    if (lu.rank() < k + 1) {
      std::string label = "singular support {";
      for (int r = 0; r < k; ++r) label += (r ? "," : "") + std::to_string(s[r] + 1);
      report.diagnostics.push_back(label + "} skipped");
      continue;
    }
    const Vector sol = lu.solve(rhs);
    Vector p = Vector::Zero(n);
    bool ok = true;
    for (int r = 0; r < k; ++r) {
      if (sol[r] < -1e-12) ok = false;
      p[s[r]] = std::max(0.0, sol[r]);
    }
    if (!ok) continue;
    p /= p.sum();
    if (!is_nash(a, p, kMatrixTolerance)) continue;
    bool dup = false;
    for (const auto& f : found)
      if (essentially_equal(f.point, p, kMatrixTolerance)) dup = true;
    if (dup) continue;
    NashPoint np{p, {}};
    for (int i = 0; i < n; ++i)
      if (p[i] > 1e-12) np.support.push_back(i);
    found.push_back(std::move(np));
  }

  for (auto& f : found) {
    if (static_cast<int>(f.support.size()) == n && !report.interior_ne)
      report.interior_ne = Composition(f.point);
    else
      report.boundary_ne.push_back(f);
  }
  // prefer the interior equilibrium when looking for an ESS
  std::vector<Vector> order;
  if (report.interior_ne) order.push_back(report.interior_ne->entries());
  for (const auto& b : report.boundary_ne) order.push_back(b.point);
  for (const auto& p : order) {
    const EssFlag flag = is_ess(a, p, kMatrixTolerance);
    if (flag != EssFlag::False) {
      report.ess = EssPoint{p, flag};
      break;
    }
  }
  return report;
}

MonotonicityResult monotonicity_probe(const PayoffMatrix& a, int samples, std::uint64_t rng_seed) {
  if (samples < 1) throw Error(ErrorCode::BadValue, "samples must be >= 1");
  const int n = a.n();
  const ContrastMatrix c = contrast_matrix(n);
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](double scale) {
    Vector x(n - 1);
    for (int i = 0; i < n - 1; ++i) x[i] = scale * normal(rng);
    return x;
  };
  MonotonicityResult result;
  Vector sx, sy;
  for (int s = 0; s < samples; ++s) {
    const Vector x = draw(2.0), y = draw(2.0);
    sfm_into(Vector(c.psi.transpose() * x), sx);
    sfm_into(Vector(c.psi.transpose() * y), sy);
    const double pair = (a.a() * (sx - sy)).dot(c.psi.transpose() * (x - y));
    if (pair > 1e-12) {
      result.monotone_on_samples = false;
      result.violation = MonotonicityWitness{x, y, pair, false};
      return result;
    }
    const Vector h = c.psi.transpose() * draw(1.0);
    const Composition p(sx);
    const double inf = h.dot(a.a() * (shahshahani_inv(p) * h));
    if (inf > 1e-12) {
      result.monotone_on_samples = false;
      result.violation = MonotonicityWitness{x, h, inf, true};
      return result;
    }
  }
  return result;
}

}  // namespace simplexdyn
