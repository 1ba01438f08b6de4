#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <skewflow/driving.hpp>
#include <skewflow/systems.hpp>

#include "support/generators.hpp"

using namespace skewflow;
using skewflow::testing::circle_diff;
using skewflow::testing::Gen;

namespace {

const double kSqrt2 = std::numbers::sqrt2;

void expect_matrix_near(const Mat2& m, const Mat2& n, double tol) {
  EXPECT_NEAR(m.a, n.a, tol);
  EXPECT_NEAR(m.b, n.b, tol);
  EXPECT_NEAR(m.c, n.c, tol);
  EXPECT_NEAR(m.d, n.d, tol);
}

// Simpson oracle, independent of the library quadrature.
template <class F>
double simpson(F f, double a, double b, int n = 4000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST(AdvanceBase, UnitTimeMovesByFrequencies) {
  const Frequencies w({1.0, kSqrt2});
  const auto q = advance_base(TorusPoint::origin(2), w, 1.0);
  EXPECT_NEAR(q[0], 1.0, 1e-15);
  EXPECT_NEAR(q[1], kSqrt2, 1e-15);
}

TEST(AdvanceBase, FullTurnReturnsFirstPhase) {
  const Frequencies w({1.0, kSqrt2});
  const auto q = advance_base(TorusPoint::origin(2), w, kTwoPi);
  EXPECT_NEAR(circle_diff(q[0], 0.0), 0.0, 1e-12);
  EXPECT_NEAR(q[1], std::fmod(kTwoPi * kSqrt2, kTwoPi), 1e-12);
  for (double ph : q.phases()) {
    EXPECT_GE(ph, 0.0);
    EXPECT_LT(ph, kTwoPi);
  }
}

TEST(AdvanceBase, ZeroTimeIsIdentity) {
  Gen gen(11);
  const Frequencies w({0.7, 1.3, 2.9});
  const auto p = gen.torus(3);
  const auto q = advance_base(p, w, 0.0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(q[i], p[i]);
}

TEST(AdvanceBase, DimensionMismatchThrows) {
  EXPECT_THROW(advance_base(TorusPoint::origin(2), Frequencies({1.0}), 1.0), std::invalid_argument);
}

TEST(TorusPoint, PhasesReducedOnConstruction) {
  const TorusPoint p({-0.5, 7.0, kTwoPi});
  EXPECT_NEAR(p[0], kTwoPi - 0.5, 1e-15);
  EXPECT_NEAR(p[1], 7.0 - kTwoPi, 1e-15);
  EXPECT_GE(p[2], 0.0);
  EXPECT_LT(p[2], kTwoPi);
}

TEST(EvalMatrix, QuasiperiodicAtOrigin) {
  const auto fam = systems::quasiperiodic(0.5);
  expect_matrix_near(eval_matrix(fam, TorusPoint::origin(2)), {0.5, 1.0, -1.0, 0.5}, 1e-15);
}

TEST(EvalMatrix, ZeroCoefficients) {
  const auto fam = systems::constant({0, 0, 0, 0});
  expect_matrix_near(eval_matrix(fam, TorusPoint::origin(1)), {0, 0, 0, 0}, 0.0);
}

TEST(EvalMatrix, RotatingQuasiperiodicAtOrigin) {
  const auto fam = systems::quasiperiodic_rotating(0.0);
  expect_matrix_near(eval_matrix(fam, TorusPoint::origin(2)), {0.0, 1.5, -1.5, 0.0}, 1e-15);
}

TEST(EvalMatrix, QuasiperiodicMatchesClosedFormAtRandomPoints) {
  Gen gen(12);
  for (int i = 0; i < 100; ++i) {
    const double eps = gen.uniform(-1, 1);
    const auto p = gen.torus(2);
    const double b = std::cos(p[0]) + std::sin(p[1]);
    expect_matrix_near(eval_matrix(systems::quasiperiodic(eps), p), {eps, b, -b, eps}, 1e-14);
  }
}

TEST(EvalE, QuasiperiodicIsEpsilonWithAntisymmetricTilde) {
  Gen gen(13);
  const auto fam = systems::quasiperiodic(0.3);
  for (int i = 0; i < 50; ++i) {
    const auto p = gen.torus(2);
    const double b = std::cos(p[0]) + std::sin(p[1]);
    EXPECT_NEAR(eval_e(fam, p), 0.3, 1e-15);
    expect_matrix_near(eval_tilde(fam, p), {0.0, b, -b, 0.0}, 1e-15);
  }
}

TEST(EvalE, DiagonalFamilySplitsIntoTraceAndTraceless) {
  Gen gen(14);
  const auto trace = systems::limit_periodic_trace(4);
  const auto fam = systems::diagonal_weakly_elliptic(trace);
  for (int i = 0; i < 50; ++i) {
    const auto p = gen.torus(4);
    double e = 0.0;
    for (int k = 1; k <= 4; ++k) e += std::pow(2.0, -k) * std::cos(p[k - 1]);
    EXPECT_NEAR(eval_e(fam, p), e, 1e-14);
    expect_matrix_near(eval_tilde(fam, p), {0.5 * e, 0.0, 0.0, -0.5 * e}, 1e-14);
  }
}

TEST(EvalE, ConstantDiagonal) {
  const auto fam = systems::constant({3, 0, 0, 1});
  const auto p = TorusPoint::origin(1);
  EXPECT_DOUBLE_EQ(eval_e(fam, p), 2.0);
  expect_matrix_near(eval_tilde(fam, p), {1, 0, 0, -1}, 0.0);
}

TEST(TrigPoly, MeanIsConstantOverTorusGrid) {
  Gen gen(15);
  for (int i = 0; i < 20; ++i) {
    const auto P = gen.trig(2, 4);
    // a 12x12 grid integrates harmonics with |k_i| <= 2 exactly
    double s = 0.0;
    for (int a = 0; a < 12; ++a)
      for (int b = 0; b < 12; ++b) {
        const double ph[2] = {kTwoPi * a / 12.0, kTwoPi * b / 12.0};
        s += P.eval(ph);
      }
    EXPECT_NEAR(s / 144.0, P.mean(), 1e-13);
  }
}

TEST(TrigPoly, OrbitPrimitiveMatchesSimpson) {
  Gen gen(16);
  const double w[2] = {1.0, kSqrt2};
  for (int i = 0; i < 20; ++i) {
    const auto P = gen.trig(2, 3);
    const double ph[2] = {gen.angle(), gen.angle()};
    const double t = gen.uniform(-15.0, 15.0);
    const double oracle = simpson(
        [&](double s) {
          const double x[2] = {ph[0] + w[0] * s, ph[1] + w[1] * s};
          return P.eval(x);
        },
        0.0, t);
    EXPECT_NEAR(P.orbit_primitive(ph, w, t), oracle, 1e-9) << "case " << i;
  }
}

TEST(TrigPoly, ZeroIndexFoldsIntoConstant) {
  const TrigPoly P(1.0, {{{0, 0}, 2.0, 5.0}, {{1, 0}, 1.0, 0.0}});
  EXPECT_DOUBLE_EQ(P.constant(), 3.0);
  EXPECT_EQ(P.terms().size(), 1u);
}

TEST(TrigPoly, BoundsDominateSamples) {
  Gen gen(17);
  for (int i = 0; i < 20; ++i) {
    const auto P = gen.trig(2, 3);
    for (int j = 0; j < 50; ++j) {
      const double x[2] = {gen.angle(), gen.angle()};
      EXPECT_LE(P.eval(x), P.upper_bound() + 1e-14);
      EXPECT_LE(std::abs(P.eval(x)), P.abs_bound() + 1e-14);
    }
  }
}

TEST(SystemFamily, RhoOutsideUnitIntervalRejected) {
  EXPECT_THROW(systems::quasiperiodic(0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(systems::quasiperiodic(0.0, 1.5), std::invalid_argument);
  EXPECT_NO_THROW(systems::quasiperiodic(0.0, 1.0));
}

TEST(Frequencies, EmptyOrNonFiniteRejected) {
  EXPECT_THROW(Frequencies({}), std::invalid_argument);
  EXPECT_THROW(Frequencies({1.0, NAN}), std::invalid_argument);
}

TEST(Frequencies, RatioDiagnosticsFlagRationalPairsOnly) {
  const auto rational = frequency_ratio_diagnostics(Frequencies({1.0, 1.5}));
  ASSERT_EQ(rational.size(), 1u);
  EXPECT_TRUE(rational[0].near_rational);
  EXPECT_EQ(rational[0].numerator * 2, rational[0].denominator * 3);

  const auto irrational = frequency_ratio_diagnostics(Frequencies({1.0, kSqrt2}));
  ASSERT_EQ(irrational.size(), 1u);
  EXPECT_FALSE(irrational[0].near_rational);
}

TEST(OrbitCoefficients, AgreesWithPointwiseEvaluation) {
  Gen gen(18);
  for (int i = 0; i < 10; ++i) {
    const auto fam = gen.family(1.0, gen.uniform(-1, 1));
    const auto p = gen.torus(2);
    const OrbitCoefficients orbit(fam, p);
    for (int j = 0; j < 20; ++j) {
      const double t = gen.uniform(-100, 100);
      expect_matrix_near(orbit.at(t), eval_matrix(fam, advance_base(p, fam.frequencies(), t)), 1e-11);
    }
  }
}

// ---- properties

TEST(DrivingProperty, FlowGroupLaw) {
  Gen gen(101);
  const Frequencies w({1.0, kSqrt2, 0.3});
  for (int i = 0; i < 1000; ++i) {
    const auto p = gen.torus(3);
    const double t1 = gen.uniform(-10, 10), t2 = gen.uniform(-10, 10);
    const auto a = advance_base(advance_base(p, w, t1), w, t2);
    const auto b = advance_base(p, w, t1 + t2);
    for (std::size_t k = 0; k < 3; ++k) ASSERT_NEAR(circle_diff(a[k], b[k]), 0.0, 1e-10) << "case " << i;
  }
}

TEST(DrivingProperty, TracelessDecompositionIsExact) {
  Gen gen(102);
  for (int i = 0; i < 500; ++i) {
    const auto fam = gen.family(2.0, gen.uniform(-1, 1));
    const auto p = gen.torus(2);
    const Mat2 A = eval_matrix(fam, p);
    const Mat2 sum = Mat2::scalar(eval_e(fam, p)) + eval_tilde(fam, p);
    const double tol = 1e-14 * std::max(1.0, A.max_abs_entry());
    ASSERT_NEAR(sum.a, A.a, tol);
    ASSERT_NEAR(sum.b, A.b, tol);
    ASSERT_NEAR(sum.c, A.c, tol);
    ASSERT_NEAR(sum.d, A.d, tol);
    ASSERT_NEAR(eval_tilde(fam, p).trace(), 0.0, tol);
  }
}

TEST(DrivingProperty, PeriodicInEveryPhase) {
  Gen gen(103);
  for (int i = 0; i < 300; ++i) {
    const auto fam = gen.family();
    std::vector<double> ph = {gen.angle(), gen.angle()};
    const Mat2 A = eval_matrix(fam, TorusPoint(ph));
    ph[i % 2] += kTwoPi * gen.integer(1, 3);
    const Mat2 B = eval_matrix(fam, TorusPoint(ph));
    ASSERT_NEAR(A.a, B.a, 1e-13);
    ASSERT_NEAR(A.b, B.b, 1e-13);
    ASSERT_NEAR(A.c, B.c, 1e-13);
    ASSERT_NEAR(A.d, B.d, 1e-13);
  }
}
