#include <gtest/gtest.h>

#include <algorithm>

#include "test_util.hpp"

using namespace simplexdyn;
using simplexdyn::testing::max_abs;
using simplexdyn::testing::random_comp;
using simplexdyn::testing::random_vec;
using simplexdyn::testing::rps;
using simplexdyn::testing::telema;

namespace {

Matrix rank_structured(double lambda, const Vector& u, const Vector& v) {
  const int n = static_cast<int>(u.size());
  return -lambda * Matrix::Identity(n, n) + u * Vector::Ones(n).transpose() +
         Vector::Ones(n) * v.transpose();
}

bool contains_point(const EquilibriumReport& r, const Vector& p, double tol) {
  if (r.interior_ne && max_abs(r.interior_ne->entries() - p) <= tol) return true;
  return std::any_of(r.boundary_ne.begin(), r.boundary_ne.end(),
                     [&](const NashPoint& q) { return max_abs(q.point - p) <= tol; });
}

std::size_t count_points(const EquilibriumReport& r) {
  return r.boundary_ne.size() + (r.interior_ne ? 1 : 0);
}

}  // namespace

TEST(PayoffMatrix, Validation) {
  EXPECT_THROW(PayoffMatrix(Matrix::Zero(1, 1)), Error);
  EXPECT_THROW(PayoffMatrix(Matrix::Zero(2, 3)), Error);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(PayoffMatrix{bad}, Error);
}

TEST(PotentialLambda, MinusThreeIdentityAtBarycenter) {
  EXPECT_NEAR(potential_lambda(PayoffMatrix(-3 * Matrix::Identity(3, 3)), Composition::barycenter(3)),
              -2.0, 1e-15);
  EXPECT_THROW(potential_lambda(PayoffMatrix(telema()), Composition::barycenter(2)), Error);
}

TEST(PotentialLambda, VanishesForZeroSumAndRankStructured) {
  Rng rng(1);
  const Matrix b = Matrix::Random(4, 4);
  const PayoffMatrix zero_sum(b - b.transpose());
  const PayoffMatrix ranked(rank_structured(0.0, random_vec(4, rng), random_vec(4, rng)));
  for (int k = 0; k < 100; ++k) {
    const Composition p = random_comp(4, rng);
    EXPECT_NEAR(potential_lambda(zero_sum, p), 0.0, 1e-13);
    EXPECT_NEAR(potential_lambda(ranked, p), 0.0, 1e-13);
  }
}

TEST(Definiteness, Examples) {
  const auto r1 = definiteness(PayoffMatrix(-3 * Matrix::Identity(3, 3)));
  EXPECT_EQ(r1.classification, Definiteness::NegativeDefinite);
  EXPECT_NEAR(r1.rayleigh_lambda, 3.0, 1e-12);
  EXPECT_EQ(definiteness(PayoffMatrix(Matrix::Identity(3, 3))).classification, Definiteness::Indefinite);
  EXPECT_EQ(definiteness(PayoffMatrix(telema())).classification, Definiteness::NegativeSemiDefinite);
  EXPECT_LE(definiteness(PayoffMatrix(telema())).rayleigh_lambda, 0.0);
}

TEST(Definiteness, RankStructuredGivesLambda) {
  Rng rng(2);
  std::uniform_real_distribution<double> ul(0.5, 10.0);
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 5;
    const double lambda = ul(rng);
    const auto r = definiteness(PayoffMatrix(rank_structured(lambda, random_vec(n, rng), random_vec(n, rng))));
    EXPECT_EQ(r.classification, Definiteness::NegativeDefinite);
    EXPECT_NEAR(r.rayleigh_lambda, lambda, 1e-9);
  }
}

TEST(SumCondition, Examples) {
  EXPECT_NEAR(*sum_condition(PayoffMatrix(rps())), 0.0, 1e-15);
  EXPECT_NEAR(*sum_condition(PayoffMatrix(-3 * Matrix::Identity(3, 3))), 6.0, 1e-15);
  EXPECT_NEAR(*sum_condition(PayoffMatrix(telema())), 0.0, 1e-15);
  Matrix m = telema();
  m(0, 1) += 1.0;
  EXPECT_FALSE(sum_condition(PayoffMatrix(m)).has_value());
}

TEST(Decompose, Telema) {
  const auto d = decompose(PayoffMatrix(telema()));
  ASSERT_TRUE(d);
  EXPECT_NEAR(d->lambda, 0.0, 1e-15);
  EXPECT_LT(max_abs(d->u - Vector{{0, 3, 6}}), 1e-15);
  EXPECT_LT(max_abs(d->v - Vector{{1, 2, 3}}), 1e-15);
  EXPECT_LE(d->residual, 1e-12);
}

TEST(Decompose, TelemaShifted) {
  const auto d = decompose(PayoffMatrix(telema() - 10 * Matrix::Identity(3, 3)));
  ASSERT_TRUE(d);
  EXPECT_NEAR(d->lambda, 10.0, 1e-14);
  EXPECT_LT(max_abs(d->u - Vector{{0, 3, 6}}), 1e-14);
  EXPECT_LT(max_abs(d->v - Vector{{1, 2, 3}}), 1e-14);
}

TEST(Decompose, RockPaperScissorsIsAbsent) {
  EXPECT_FALSE(decompose(PayoffMatrix(rps())).has_value());
}

TEST(Decompose, DiagonalOneMinusOneIsDecomposable) {
  const auto d = decompose(PayoffMatrix(Matrix{{1, 0}, {0, -1}}));
  ASSERT_TRUE(d);
  EXPECT_NEAR(d->lambda, 0.0, 1e-15);
  EXPECT_LE(d->residual, 1e-15);
}

TEST(Decompose, RoundTripProperty) {
  Rng rng(3);
  std::uniform_real_distribution<double> ul(0.0, 10.0);
  for (int k = 0; k < 200; ++k) {
    const int n = 2 + k % 5;
    Vector u = random_vec(n, rng);
    u[0] = 0.0;
    const Vector v = random_vec(n, rng);
    const double lambda = ul(rng);
    const auto d = decompose(PayoffMatrix(rank_structured(lambda, u, v)));
    ASSERT_TRUE(d);
    EXPECT_NEAR(d->lambda, lambda, 1e-12);
    EXPECT_LT(max_abs(d->u - u), 1e-12);
    EXPECT_LT(max_abs(d->v - v), 1e-12);
    EXPECT_LT((reconstruct(*d) - rank_structured(lambda, u, v)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(InteriorNe, Examples) {
  Decomposition d{10.0, Vector{{0, 3, 6}}, Vector{{1, 2, 3}}, 0.0};
  const auto p = interior_ne_decomposed(d, 3);
  ASSERT_TRUE(p);
  EXPECT_LT(max_abs(p->entries() - Vector{{1.0 / 30, 1.0 / 3, 19.0 / 30}}), 1e-12);
  d.lambda = 5.0;
  EXPECT_FALSE(interior_ne_decomposed(d, 3).has_value());
  const Decomposition flat{0.7, Vector::Constant(4, 2.5), Vector::Zero(4), 0.0};
  EXPECT_LT(max_abs(interior_ne_decomposed(flat, 4)->entries() - Vector::Constant(4, 0.25)), 1e-15);
  d.lambda = 0.0;
  try {
    interior_ne_decomposed(d, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LambdaZero);
  }
}

TEST(InteriorNe, AllPositiveUUsesMinShift) {
  // u = (1,2,3), lambda = 4: shifted u = (0,1,2) gives (1/12+0, ...) and solves the equal-payoff system.
  const Matrix a = rank_structured(4.0, Vector{{1, 2, 3}}, Vector::Zero(3));
  const auto d = decompose(PayoffMatrix(a));
  ASSERT_TRUE(d);
  const auto p = interior_ne_decomposed(*d, 3);
  ASSERT_TRUE(p);
  const Vector ap = a * p->entries();
  EXPECT_LT(ap.maxCoeff() - ap.minCoeff(), 1e-12);
}

TEST(NashSetZeroLambda, Examples) {
  Decomposition d{0.0, Vector{{0, 3, 6}}, Vector::Zero(3), 0.0};
  EXPECT_EQ(nash_set_zero_lambda(d), (std::vector<int>{2}));
  d.u = Vector{{1, 1, 1}};
  EXPECT_EQ(nash_set_zero_lambda(d), (std::vector<int>{0, 1, 2}));
  d.u = Vector{{2, 2, 0}};
  EXPECT_EQ(nash_set_zero_lambda(d), (std::vector<int>{0, 1}));
  d.lambda = 1.0;
  EXPECT_THROW(nash_set_zero_lambda(d), Error);
}

TEST(IsNash, Examples) {
  EXPECT_TRUE(is_nash(PayoffMatrix(telema()), Vector{{0, 0, 1}}));
  EXPECT_TRUE(is_nash(PayoffMatrix(telema() - 10 * Matrix::Identity(3, 3)),
                      Vector{{1.0 / 30, 1.0 / 3, 19.0 / 30}}));
  EXPECT_FALSE(is_nash(PayoffMatrix(telema()), Vector::Constant(3, 1.0 / 3)));
}

TEST(IsEss, Examples) {
  EXPECT_EQ(is_ess(PayoffMatrix(telema()), Vector{{0, 0, 1}}), EssFlag::Certified);
  EXPECT_EQ(is_ess(PayoffMatrix(telema() - 10 * Matrix::Identity(3, 3)),
                   Vector{{1.0 / 30, 1.0 / 3, 19.0 / 30}}),
            EssFlag::Certified);
  EXPECT_EQ(is_ess(PayoffMatrix(Matrix{{0, 6}, {8, 4}}), Vector{{0.2, 0.8}}), EssFlag::Certified);
  try {
    is_ess(PayoffMatrix(telema()), Vector::Constant(3, 1.0 / 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNash);
  }
}

TEST(IsEss, GridFallback) {
  // Boundary ESS of telema - 5 id is not covered by a certificate.
  const Vector face{{0.0, 0.2, 0.8}};
  EXPECT_EQ(is_ess(PayoffMatrix(telema() - 5 * Matrix::Identity(3, 3)), face),
            EssFlag::SufficientConditionOnly);
  // The center of rock-paper-scissors is neutrally stable, not an ESS.
  EXPECT_EQ(is_ess(PayoffMatrix(rps()), Vector::Constant(3, 1.0 / 3)), EssFlag::False);
}

TEST(EnumerateNash, Examples) {
  const auto r1 = enumerate_nash(PayoffMatrix(telema()));
  EXPECT_EQ(count_points(r1), 1u);
  EXPECT_TRUE(contains_point(r1, Vector{{0, 0, 1}}, 1e-12));
  ASSERT_TRUE(r1.ess);
  EXPECT_LT(max_abs(r1.ess->point - Vector{{0, 0, 1}}), 1e-12);

  const auto r2 = enumerate_nash(PayoffMatrix(telema() - 5 * Matrix::Identity(3, 3)));
  EXPECT_TRUE(contains_point(r2, Vector{{0, 0.2, 0.8}}, 1e-9));

  const auto r3 = enumerate_nash(PayoffMatrix(rps()));
  EXPECT_EQ(count_points(r3), 1u);
  EXPECT_TRUE(contains_point(r3, Vector::Constant(3, 1.0 / 3), 1e-12));

  EXPECT_THROW(enumerate_nash(PayoffMatrix(Matrix::Zero(6, 6))), Error);
}

TEST(EnumerateNash, EveryPointIsNash) {
  Rng rng(4);
  for (int k = 0; k < 30; ++k) {
    const int n = 2 + k % 4;
    const PayoffMatrix a(Matrix::Random(n, n) * 5);
    const auto r = enumerate_nash(a);
    EXPECT_GE(count_points(r), 1u);
    if (r.interior_ne) EXPECT_TRUE(is_nash(a, r.interior_ne->entries()));
    for (const auto& q : r.boundary_ne) EXPECT_TRUE(is_nash(a, q.point));
  }
}

TEST(EnumerateNash, AgreesWithInteriorFormula) {
  Rng rng(5);
  std::uniform_real_distribution<double> ul(0.0, 12.0);
  int found = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 4;
    const Vector u = random_vec(n, rng), v = random_vec(n, rng);
    const double lambda = ul(rng);
    const PayoffMatrix a(rank_structured(lambda, u, v));
    const auto d = decompose(a);
    ASSERT_TRUE(d);
    if (d->lambda <= 0) continue;
    const auto p = interior_ne_decomposed(*d, n);
    if (!p) continue;
    ++found;
    EXPECT_TRUE(is_nash(a, p->entries()));
    EXPECT_TRUE(contains_point(enumerate_nash(a), p->entries(), 1e-8));
  }
  EXPECT_GT(found, 10);
}

TEST(LambdaConsistency, SumConditionMatrices) {
  Rng rng(6);
  const Matrix base = rank_structured(2.5, random_vec(4, rng), random_vec(4, rng));
  const Matrix skew = Matrix::Random(4, 4);
  const PayoffMatrix a(base + skew - skew.transpose());
  const auto c = sum_condition(a);
  ASSERT_TRUE(c);
  EXPECT_NEAR(*c, 5.0, 1e-12);
  for (int k = 0; k < 50; ++k) {
    const Composition p = random_comp(4, rng);
    EXPECT_NEAR(potential_lambda(a, p), -(*c / 2) * (1 - p.entries().squaredNorm()), 1e-12);
  }
}

TEST(MonotonicityProbe, DecomposableMatricesPass) {
  EXPECT_TRUE(monotonicity_probe(PayoffMatrix(-3 * Matrix::Identity(3, 3)), 10000, 1).monotone_on_samples);
  EXPECT_TRUE(monotonicity_probe(PayoffMatrix(telema()), 10000, 2).monotone_on_samples);
  Rng rng(7);
  for (int k = 0; k < 10; ++k) {
    const int n = 2 + k % 4;
    const PayoffMatrix a(rank_structured(0.1 * k, random_vec(n, rng), random_vec(n, rng)));
    EXPECT_TRUE(monotonicity_probe(a, 2000, 100 + k).monotone_on_samples);
  }
}

TEST(MonotonicityProbe, IdentityOnTwoPartsHasWitness) {
  const auto r = monotonicity_probe(PayoffMatrix(Matrix::Identity(2, 2)), 1000, 3);
  EXPECT_FALSE(r.monotone_on_samples);
  ASSERT_TRUE(r.violation);
  EXPECT_GT(r.violation->value, 1e-12);
}

TEST(MonotonicityProbe, PerturbedRockPaperScissorsHasWitness) {
  Matrix a = rps();
  a(0, 0) += 0.5;
  ASSERT_FALSE(decompose(PayoffMatrix(a)).has_value());
  const auto r = monotonicity_probe(PayoffMatrix(a), 100000, 4);
  EXPECT_FALSE(r.monotone_on_samples);
  ASSERT_TRUE(r.violation);
  EXPECT_GT(r.violation->value, 1e-12);
}

TEST(EssFlag, Strings) {
  EXPECT_STREQ(to_string(EssFlag::Certified), "certified");
  EXPECT_STREQ(to_string(EssFlag::SufficientConditionOnly), "sufficient-condition-only");
}
