#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "test_util.hpp"

using namespace simplexdyn;
using simplexdyn::testing::max_abs;
using simplexdyn::testing::random_comp;
using simplexdyn::testing::random_vec;
using simplexdyn::testing::telema;

namespace {

OdeConfig ode(double t_end, double dt, int record_every = 1) {
  OdeConfig c;
  c.t_end = t_end;
  c.dt = dt;
  c.record_every = record_every;
  return c;
}

}  // namespace

TEST(ReplicatorRhs, RestPointsAndTangency) {
  const PayoffMatrix a(telema());
  for (int i = 0; i < 3; ++i) {
    Vector p = Vector::Constant(3, 0.5e-6);
    p[i] = 1 - 1e-6;
    EXPECT_LT(max_abs(replicator_rhs(a, Composition(p))), 1e-5);
  }
  EXPECT_LT(max_abs(replicator_rhs(PayoffMatrix(-3 * Matrix::Identity(3, 3)), Composition::barycenter(3))),
            1e-16);
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 5;
    const PayoffMatrix b(Matrix::Random(n, n) * 3);
    EXPECT_NEAR(replicator_rhs(b, random_comp(n, rng)).sum(), 0.0, 1e-14);
  }
  EXPECT_THROW(replicator_rhs(a, Composition::barycenter(2)), Error);
}

TEST(IlrDrift, ZeroMatrix) {
  EXPECT_LT(max_abs(ilr_drift(PayoffMatrix(Matrix::Zero(3, 3)), IlrPoint(Vector{{0.3, -2}})).coords()),
            1e-18);
}

TEST(IlrDrift, PushforwardOfReplicatorRhs) {
  Rng rng(2);
  const PayoffMatrix a(telema() - 10 * Matrix::Identity(3, 3));
  const double eps = 1e-6;
  for (int k = 0; k < 20; ++k) {
    const Composition p = random_comp(3, rng);
    const Vector rhs = replicator_rhs(a, p);
    const Composition plus = closure(p.entries() + eps * rhs), minus = closure(p.entries() - eps * rhs);
    const Vector fd = (ilr(plus).coords() - ilr(minus).coords()) / (2 * eps);
    EXPECT_LT(max_abs(fd - ilr_drift(a, ilr(p)).coords()), 1e-6);
  }
}

TEST(IlrDrift, DirichletTypeMatrix) {
  const Vector alpha{{0.5, 1.0, 1.5}};
  const Matrix am = -3 * Matrix::Identity(3, 3) + alpha * Vector::Ones(3).transpose();
  const PayoffMatrix a(am);
  ASSERT_NEAR(*sum_condition(a), 6.0, 1e-12);
  const Matrix psi = contrast_matrix(3).psi;
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const Composition p = random_comp(3, rng);
    EXPECT_LT(max_abs(ilr_drift(a, ilr(p)).coords() - psi * (alpha - alpha.sum() * p.entries())), 1e-13);
  }
}

TEST(IlrDrift, Bounded) {
  Rng rng(4);
  const PayoffMatrix a(telema());
  const double bound = contrast_matrix(3).psi.norm() * telema().norm();
  for (int k = 0; k < 100; ++k) {
    EXPECT_LE(ilr_drift(a, IlrPoint(random_vec(2, rng, 30.0))).coords().norm(), bound);
  }
}

TEST(Integrate, ZeroMatrixIsConstant) {
  Rng rng(5);
  const Composition p0 = random_comp(4, rng);
  const Trajectory tr = integrate_replicator(PayoffMatrix(Matrix::Zero(4, 4)), p0, ode(2.0, 0.01));
  for (const auto& s : tr.states) EXPECT_LT(max_abs(s.entries() - p0.entries()), 1e-15);
}

TEST(Integrate, ReachesInteriorEss) {
  const Trajectory tr = integrate_replicator(PayoffMatrix(telema() - 10 * Matrix::Identity(3, 3)),
                                             Composition::barycenter(3), ode(50.0, 0.01, 100));
  EXPECT_LT(max_abs(tr.states.back().entries() - Vector{{1.0 / 30, 1.0 / 3, 19.0 / 30}}), 1e-6);
  EXPECT_DOUBLE_EQ(tr.times.back(), 50.0);
}

TEST(Integrate, ReachesVertexEss) {
  const Trajectory tr =
      integrate_replicator(PayoffMatrix(telema()), Composition::barycenter(3), ode(50.0, 0.01, 100));
  EXPECT_LT((tr.states.back().entries() - Vector{{0, 0, 1}}).norm(), 1e-4);
}

TEST(Integrate, ConservationAndMonotoneTimes) {
  Rng rng(6);
  const Trajectory tr = integrate_replicator(PayoffMatrix(Matrix::Random(5, 5) * 4), random_comp(5, rng),
                                             ode(10.0, 0.01, 7));
  for (std::size_t k = 0; k < tr.size(); ++k) {
    EXPECT_NEAR(tr.states[k].entries().sum(), 1.0, 1e-12);
    EXPECT_GT(tr.states[k].entries().minCoeff(), 0.0);
    if (k > 0) EXPECT_GT(tr.times[k], tr.times[k - 1]);
  }
}

TEST(Integrate, ConfigErrors) {
  const PayoffMatrix a(telema());
  EXPECT_THROW(integrate_replicator(a, Composition::barycenter(3), ode(1.0, 2.0)), Error);
  EXPECT_THROW(integrate_replicator(a, Composition::barycenter(3), ode(-1.0, 0.1)), Error);
  EXPECT_THROW(integrate_replicator(a, Composition::barycenter(3), ode(1.0, 0.1, 0)), Error);
  try {
    integrate_replicator(PayoffMatrix(telema() * 1e6), Composition::barycenter(3), ode(1.0, 0.1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StepTooLarge);
  }
}

TEST(Integrate, Rk4FourthOrder) {
  const PayoffMatrix a(telema() - 10 * Matrix::Identity(3, 3));
  const Composition p0(Vector{{0.8, 0.15, 0.05}});
  auto terminal = [&](double dt) { return ilr(integrate_replicator(a, p0, ode(1.0, dt)).states.back()).coords(); };
  const Vector ref = terminal(0.02 / 16);
  const double e1 = (terminal(0.04) - ref).norm();
  const double e2 = (terminal(0.02) - ref).norm();
  const double ratio = e1 / e2;
  EXPECT_GT(ratio, 16.0 / 3);
  EXPECT_LT(ratio, 16.0 * 3);
}

TEST(Integrate, NonExpansionInAitchisonDistance) {
  Rng rng(7);
  for (const Matrix& m : {Matrix(telema()), Matrix(telema() - 10 * Matrix::Identity(3, 3)),
                          Matrix(-3 * Matrix::Identity(3, 3))}) {
    const PayoffMatrix a(m);
    for (int k = 0; k < 10; ++k) {
      const Composition p = random_comp(3, rng), q = random_comp(3, rng);
      const auto tp = integrate_replicator(a, p, ode(5.0, 0.01));
      const auto tq = integrate_replicator(a, q, ode(5.0, 0.01));
      double prev = dist(p, q);
      for (std::size_t i = 1; i < tp.size(); ++i) {
        const double d = dist(tp.states[i], tq.states[i]);
        EXPECT_LE(d, prev + 1e-6 * (tp.times[i] - tp.times[i - 1]));
        prev = d;
      }
    }
  }
}

TEST(Integrate, IntegratedContractionEstimate) {
  // d_A(t)^2 + 2 lambda int_0^t |p - q|^2 ds <= d_A(0)^2
  Rng rng(8);
  const PayoffMatrix a(telema() - 10 * Matrix::Identity(3, 3));
  const double dt = 0.001;
  for (int k = 0; k < 10; ++k) {
    const Composition p = random_comp(3, rng), q = random_comp(3, rng);
    const auto tp = integrate_replicator(a, p, ode(2.0, dt));
    const auto tq = integrate_replicator(a, q, ode(2.0, dt));
    const double d0 = dist(p, q);
    double integral = 0.0;
    for (std::size_t i = 1; i < tp.size(); ++i) {
      const double f0 = (tp.states[i - 1].entries() - tq.states[i - 1].entries()).squaredNorm();
      const double f1 = (tp.states[i].entries() - tq.states[i].entries()).squaredNorm();
      integral += 0.5 * (f0 + f1) * (tp.times[i] - tp.times[i - 1]);
      const double d = dist(tp.states[i], tq.states[i]);
      EXPECT_LE(d * d + 2 * 10 * integral, d0 * d0 * (1 + 10 * dt));
    }
  }
}

TEST(Integrate, PointwiseExponentialBoundDoesNotHold) {
  // Counterexample: |p(t) - q(t)| decays at the slow rate of the linearized flow, not at lambda.
  const PayoffMatrix a(telema() - 10 * Matrix::Identity(3, 3));
  const Composition p(Vector{{0.2, 0.3, 0.5}}), q(Vector{{0.5, 0.3, 0.2}});
  const double dt = 0.001;
  const auto tp = integrate_replicator(a, p, ode(2.0, dt));
  const auto tq = integrate_replicator(a, q, ode(2.0, dt));
  const double d0 = dist(p, q);
  const double lhs = (tp.states.back().entries() - tq.states.back().entries()).norm();
  EXPECT_GT(lhs, std::exp(-10 * 2.0) * d0 * (1 + 10 * dt));
}

TEST(PhasePortrait, Examples) {
  for (const auto& s : phase_portrait(PayoffMatrix(Matrix::Zero(3, 3)), 10)) EXPECT_LT(max_abs(s.rhs), 1e-18);
  for (int g : {2, 3, 5, 10, 21}) {
    EXPECT_EQ(phase_portrait(PayoffMatrix(telema()), g).size(), std::size_t((g - 1) * (g - 2) / 2));
  }
  const Vector at_e = replicator_rhs(PayoffMatrix(telema() - 10 * Matrix::Identity(3, 3)), Composition::barycenter(3));
  EXPECT_GT(at_e.dot(Vector{{1.0 / 30, 1.0 / 3, 19.0 / 30}} - Vector::Constant(3, 1.0 / 3)), 0.0);
  EXPECT_THROW(phase_portrait(PayoffMatrix(Matrix::Zero(4, 4)), 5), Error);
  EXPECT_THROW(phase_portrait(PayoffMatrix(Matrix::Zero(3, 3)), 1), Error);
}

TEST(TrajectoryCsv, RoundTripAtFullPrecision) {
  Rng rng(9);
  const Trajectory tr = integrate_replicator(PayoffMatrix(telema()), random_comp(3, rng), ode(1.0, 0.1));
  std::stringstream ss;
  write_trajectory_csv(ss, tr);
  std::string header;
  std::getline(std::stringstream(ss.str()), header);
  EXPECT_EQ(header, "t,p_1,p_2,p_3,ilr_1,ilr_2");
  const Trajectory back = read_trajectory_csv(ss);
  ASSERT_EQ(back.size(), tr.size());
  for (std::size_t k = 0; k < tr.size(); ++k) {
    EXPECT_EQ(back.times[k], tr.times[k]);
    EXPECT_LT(max_abs(back.states[k].entries() - tr.states[k].entries()), 1e-16);
  }
}

TEST(StepCount, HitsFinalTime) {
  EXPECT_EQ(step_count(1.0, 0.1), 10);
  EXPECT_EQ(step_count(1.0, 0.3), 4);
  EXPECT_EQ(step_count(50.0, 0.01), 5000);
}
