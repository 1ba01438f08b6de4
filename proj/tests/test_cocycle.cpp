#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include <skewflow/cocycle.hpp>
#include <skewflow/systems.hpp>

#include "support/generators.hpp"

using namespace skewflow;
using skewflow::testing::circle_diff;
using skewflow::testing::Gen;

namespace {

const double kSqrt2 = std::numbers::sqrt2;

double rel_diff(const Mat2& m, const Mat2& n) {
  return (m - n).operator_norm() / std::max(n.operator_norm(), 1e-300);
}

// Exact int_0^t tr A^eps along the orbit of p.
double trace_integral(const SystemFamily& fam, const TorusPoint& p, double t) {
  const TrigPoly tr = fam.matrix().a + fam.matrix().d;
  return tr.orbit_primitive(p.phases(), fam.frequencies().values(), t) + 2.0 * fam.epsilon() * t;
}

}  // namespace

TEST(FAngular, AutonomousIsOne) {
  const auto fam = systems::autonomous_hopf(0.4);
  for (double th : {0.0, 0.3, 1.0, 2.5, 5.9}) {
    EXPECT_NEAR(f_angular(fam, TorusPoint::origin(1), th), 1.0, 1e-15);
  }
}

TEST(FAngular, QuasiperiodicIsForcingIndependentOfAngle) {
  Gen gen(21);
  const auto fam = systems::quasiperiodic(0.5);
  for (int i = 0; i < 50; ++i) {
    const auto p = gen.torus(2);
    const double b = std::cos(p[0]) + std::sin(p[1]);
    EXPECT_NEAR(f_angular(fam, p, gen.angle()), b, 1e-14);
  }
}

TEST(FAngular, MatchesDisplayedFormula) {
  Gen gen(22);
  for (int i = 0; i < 100; ++i) {
    const Mat2 A = gen.matrix(2.0);
    const double th = gen.angle(), s = std::sin(th), c = std::cos(th);
    EXPECT_NEAR(f_angular(A, th), -A.c * s * s + A.b * c * c + (A.a - A.d) * s * c, 1e-14);
    EXPECT_NEAR(g_radial(A, th), A.a * s * s + A.d * c * c + (A.b + A.c) * s * c, 1e-14);
  }
}

TEST(GRadial, AutonomousAndQuasiperiodicAreEpsilon) {
  Gen gen(23);
  for (int i = 0; i < 50; ++i) {
    const double eps = gen.uniform(-1, 1), th = gen.angle();
    EXPECT_NEAR(g_radial(systems::autonomous_hopf(eps), TorusPoint::origin(1), th), eps, 1e-15);
    EXPECT_NEAR(g_radial(systems::quasiperiodic(eps), gen.torus(2), th), eps, 1e-14);
  }
}

TEST(DfDtheta, AutonomousVanishes) {
  for (double th : {0.0, 0.7, 2.0}) {
    EXPECT_NEAR(df_dtheta(systems::autonomous_hopf(0.2), TorusPoint::origin(1), th), 0.0, 1e-15);
  }
}

TEST(DfDtheta, AtZeroIsDiagonalDifference) {
  Gen gen(24);
  for (int i = 0; i < 50; ++i) {
    const Mat2 A = gen.matrix();
    EXPECT_NEAR(df_dtheta(A, 0.0), A.a - A.d, 1e-15);
  }
}

TEST(DfDtheta, AgreesWithCentralDifference) {
  Gen gen(25);
  const double h = 1e-5;
  for (int i = 0; i < 200; ++i) {
    const Mat2 A = gen.matrix();
    const double th = gen.angle();
    const double fd = (f_angular(A, th + h) - f_angular(A, th - h)) / (2 * h);
    const double an = df_dtheta(A, th);
    EXPECT_NEAR(fd, an, 1e-6 * std::max(1.0, std::abs(an)));
  }
}

TEST(PolarRates, MatchesScalarForms) {
  Gen gen(26);
  for (int i = 0; i < 100; ++i) {
    const Mat2 A = gen.matrix(3.0);
    const double th = gen.angle();
    const auto r = polar_rates(A, th);
    EXPECT_NEAR(r.f, f_angular(A, th), 1e-13);
    EXPECT_NEAR(r.g, g_radial(A, th), 1e-13);
    EXPECT_NEAR(r.df, df_dtheta(A, th), 1e-13);
  }
}

TEST(IntegratePolar, QuasiperiodicClosedFormAngle) {
  const auto fam = systems::quasiperiodic(0.0);
  const double th0 = 0.4;
  TrajectoryOptions opt;
  opt.output_dt = 1.0;
  const auto traj = integrate_polar_linear(fam, TorusPoint::origin(2), th0, 0.0, 60.0, opt);
  ASSERT_TRUE(traj.ok());
  ASSERT_EQ(traj.samples.size(), 61u);
  for (const auto& s : traj.samples) {
    const double exact = th0 + std::sin(s.t) + (1.0 - std::cos(kSqrt2 * s.t)) / kSqrt2;
    EXPECT_NEAR(s.lift, exact, 1e-8) << "t=" << s.t;
    EXPECT_NEAR(s.log_r, 0.0, 1e-10);
  }
}

TEST(IntegratePolar, AutonomousRotatesUniformly) {
  const auto fam = systems::autonomous_hopf(0.3);
  const auto traj = integrate_polar_linear(fam, TorusPoint::origin(1), 1.0, 0.0, 40.0);
  ASSERT_TRUE(traj.ok());
  EXPECT_NEAR(traj.back().lift, 41.0, 1e-8);
  EXPECT_NEAR(traj.back().log_r, 0.3 * 40.0, 1e-8);
  EXPECT_NEAR(traj.back().theta, std::fmod(41.0, kTwoPi), 1e-8);
}

TEST(IntegratePolar, ZeroSpanReturnsInitialState) {
  const auto traj = integrate_polar_linear(systems::quasiperiodic(0.2), TorusPoint::origin(2), 0.5, 0.25, 0.0);
  ASSERT_EQ(traj.samples.size(), 1u);
  EXPECT_EQ(traj.back().lift, 0.5);
  EXPECT_EQ(traj.back().log_r, 0.25);
}

TEST(IntegratePolar, BackwardTimeRunsAutonomousInReverse) {
  const auto traj = integrate_polar_linear(systems::autonomous_hopf(-0.2), TorusPoint::origin(1), 0.0, 0.0, -10.0);
  ASSERT_TRUE(traj.ok());
  EXPECT_NEAR(traj.back().lift, -10.0, 1e-8);
  EXPECT_NEAR(traj.back().log_r, 2.0, 1e-8);
}

TEST(PropagateCocycle, ZeroTimeIsIdentity) {
  const auto res = propagate_cocycle(systems::quasiperiodic(0.1), TorusPoint::origin(2), 0.0);
  EXPECT_EQ(res.state.matrix, Mat2::identity());
  EXPECT_EQ(res.state.log_scale, 0.0);
}

TEST(PropagateCocycle, AutonomousIsRotation) {
  const auto fam = systems::autonomous_hopf(0.0);
  for (double t : {0.5, 3.0, 17.0, -8.0}) {
    const auto res = propagate_cocycle(fam, TorusPoint::origin(1), t);
    ASSERT_TRUE(res.report.ok());
    const Mat2 rot{std::cos(t), std::sin(t), -std::sin(t), std::cos(t)};
    EXPECT_LT(rel_diff(res.state.value(), rot), 1e-8) << "t=" << t;
  }
}

TEST(PropagateCocycle, DiagonalFamilyFundamentalMatrix) {
  const auto trace = systems::limit_periodic_trace(5);
  const auto fam = systems::diagonal_weakly_elliptic(trace);
  Gen gen(27);
  for (int i = 0; i < 5; ++i) {
    const auto p = gen.torus(5);
    const double t = gen.uniform(-200, 200);
    const double H = trace.e.orbit_primitive(p.phases(), trace.freqs.values(), t);
    const auto res = propagate_cocycle(fam, p, t);
    ASSERT_TRUE(res.report.ok());
    const Mat2 U = res.state.value();
    EXPECT_NEAR(std::log(U.a), 1.5 * H, 1e-7);
    EXPECT_NEAR(std::log(U.d), 0.5 * H, 1e-7);
    EXPECT_NEAR(U.b, 0.0, 1e-9 * std::abs(U.a));
    EXPECT_NEAR(U.c, 0.0, 1e-9 * std::abs(U.a));
  }
}

TEST(PropagateCocycle, RenormalizationKeepsColumnsBounded) {
  const auto res = propagate_cocycle(systems::constant({2.0, 0.0, 0.0, -1.0}), TorusPoint::origin(1), 50.0);
  ASSERT_TRUE(res.report.ok());
  EXPECT_GT(res.renormalizations, 0u);
  EXPECT_GE(res.state.matrix.max_column_norm(), 0.5);
  EXPECT_LE(res.state.matrix.max_column_norm(), 2.0);
  EXPECT_NEAR(res.state.log_operator_norm(), 100.0, 1e-7);
  EXPECT_NEAR(res.state.log_det(), 50.0, 1e-7);
}

TEST(ReconstructCartesian, PointValues) {
  PolarTrajectory traj;
  traj.samples.push_back({0.0, 0.0, 0.0, 0.0});
  traj.samples.push_back({1.0, std::numbers::pi / 2, std::numbers::pi / 2, std::log(2.0)});
  const auto pts = reconstruct_cartesian(traj);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_NEAR(pts[0].y.x, 0.0, 1e-15);
  EXPECT_NEAR(pts[0].y.y, 1.0, 1e-15);
  EXPECT_NEAR(pts[1].y.x, 2.0, 1e-15);
  EXPECT_NEAR(pts[1].y.y, 0.0, 1e-15);
}

TEST(ReconstructCartesian, MatchesCartesianIntegration) {
  const auto fam = systems::quasiperiodic(0.5);
  TrajectoryOptions opt;
  opt.output_dt = 0.5;
  const double th0 = 0.9;
  const Vec2 y0{std::sin(th0), std::cos(th0)};
  const auto polar = reconstruct_cartesian(integrate_polar_linear(fam, TorusPoint::origin(2), th0, 0.0, 50.0, opt));
  const auto cart = integrate_linear_cartesian(fam, TorusPoint::origin(2), y0, 50.0, opt);
  ASSERT_EQ(polar.size(), cart.size());
  for (std::size_t i = 0; i < cart.size(); ++i) {
    ASSERT_NEAR(polar[i].t, cart[i].t, 1e-12);
    EXPECT_LE((polar[i].y - cart[i].y).norm(), 1e-6 * cart[i].y.norm()) << "t=" << cart[i].t;
  }
}

TEST(TrajectoryCsv, HeaderAndMetadata) {
  const auto traj = integrate_polar_linear(systems::autonomous_hopf(0.0), TorusPoint::origin(1), 0.0, 0.0, 1.0,
                                           {StepControl{}, 0.5});
  std::ostringstream os;
  write_trajectory_csv(os, traj, "hash=abc");
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# hash=abc");
  std::getline(in, line);
  EXPECT_EQ(line, "t,theta_reduced,lift,log_r,y1,y2");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

// ---- properties

TEST(CocycleProperty, AngularAndRadialRatesArePiPeriodic) {
  Gen gen(201);
  for (int i = 0; i < 1000; ++i) {
    const auto fam = gen.family(1.5, gen.uniform(-1, 1));
    const auto p = gen.torus(2);
    const double th = gen.angle();
    ASSERT_NEAR(f_angular(fam, p, th + std::numbers::pi), f_angular(fam, p, th), 1e-13);
    ASSERT_NEAR(g_radial(fam, p, th + std::numbers::pi), g_radial(fam, p, th), 1e-13);
  }
}

TEST(CocycleProperty, RadialMinusTraceIsHalfAngularDerivative) {
  Gen gen(202);
  for (int i = 0; i < 10000; ++i) {
    const auto fam = gen.family(1.0, gen.uniform(-1, 1));
    const auto p = gen.torus(2);
    const double th = gen.angle();
    const double lhs = g_radial(fam, p, th) - eval_e(fam, p) + 0.5 * df_dtheta(fam, p, th);
    ASSERT_LE(std::abs(lhs), 1e-12) << "case " << i;
  }
}

TEST(CocycleProperty, PiShiftEquivariance) {
  Gen gen(203);
  for (int i = 0; i < 20; ++i) {
    const auto fam = gen.family(0.5, gen.uniform(-0.3, 0.3));
    const auto p = gen.torus(2);
    const double th = gen.angle(), t = gen.uniform(-100, 100);
    const auto a = integrate_polar_linear(fam, p, th, 0.0, t);
    const auto b = integrate_polar_linear(fam, p, th + std::numbers::pi, 0.0, t);
    ASSERT_TRUE(a.ok() && b.ok());
    EXPECT_NEAR(b.back().lift - a.back().lift, std::numbers::pi, 1e-8) << "case " << i;
    EXPECT_NEAR(b.back().log_r, a.back().log_r, 1e-8) << "case " << i;
  }
}

TEST(CocycleProperty, ReducedAngleConsistentWithLift) {
  Gen gen(204);
  for (int i = 0; i < 10; ++i) {
    const auto fam = gen.family();
    const auto traj = integrate_polar_linear(fam, gen.torus(2), gen.angle(), 0.0, 80.0, {StepControl{}, 0.5});
    for (const auto& s : traj.samples) {
      ASSERT_GE(s.theta, 0.0);
      ASSERT_LT(s.theta, kTwoPi);
      ASSERT_NEAR(circle_diff(s.theta, s.lift), 0.0, 1e-9);
    }
  }
}

TEST(CocycleProperty, DeterminantIdentity) {
  Gen gen(205);
  for (int i = 0; i < 30; ++i) {
    const auto fam = gen.family(0.5, gen.uniform(-0.5, 0.5));
    const auto p = gen.torus(2);
    const double t = gen.uniform(-300, 300);
    const auto res = propagate_cocycle(fam, p, t);
    ASSERT_TRUE(res.report.ok());
    EXPECT_LE(std::abs(res.state.log_det() - trace_integral(fam, p, t)), 1e-6 * (1.0 + std::abs(t)))
        << "case " << i << " t=" << t;
  }
}

TEST(CocycleProperty, CocycleComposition) {
  Gen gen(206);
  for (int i = 0; i < 30; ++i) {
    const auto fam = gen.family(0.3);
    const auto p = gen.torus(2);
    const double t = gen.uniform(-20, 20), s = gen.uniform(-20, 20);
    const Mat2 whole = propagate_cocycle(fam, p, t + s).state.value();
    const Mat2 first = propagate_cocycle(fam, p, s).state.value();
    const Mat2 second = propagate_cocycle(fam, advance_base(p, fam.frequencies(), s), t).state.value();
    EXPECT_LT(rel_diff(second * first, whole), 1e-6) << "case " << i;
  }
}

TEST(CocycleProperty, ScalarRadiusMatchesMatrixAction) {
  Gen gen(207);
  for (int i = 0; i < 30; ++i) {
    const auto fam = gen.family(0.5, gen.uniform(-0.5, 0.5));
    const auto p = gen.torus(2);
    const double th = gen.angle(), t = gen.uniform(-50, 50);
    const auto polar = integrate_polar_linear(fam, p, th, 0.0, t);
    const auto cocycle = propagate_cocycle(fam, p, t);
    const double lr = cocycle.state.log_norm_applied({std::sin(th), std::cos(th)});
    EXPECT_NEAR(polar.back().log_r, lr, 1e-6) << "case " << i;
  }
}

TEST(CocycleProperty, TraceDecompositionOfRadius) {
  Gen gen(208);
  for (int i = 0; i < 30; ++i) {
    const auto fam = gen.family(0.5, gen.uniform(-0.5, 0.5));
    const auto p = gen.torus(2);
    const double th = gen.angle(), t = gen.uniform(-60, 60);
    const auto full = integrate_polar_linear(fam, p, th, 0.0, t, {}, RadialRate::Full);
    const auto tl = integrate_polar_linear(fam, p, th, 0.0, t, {}, RadialRate::Traceless);
    EXPECT_NEAR(full.back().log_r, tl.back().log_r + 0.5 * trace_integral(fam, p, t), 1e-6) << "case " << i;
  }
}

TEST(CocycleProperty, PolarAgreesWithCartesianOnRandomFamilies) {
  Gen gen(209);
  for (int i = 0; i < 15; ++i) {
    const auto fam = gen.family(0.4, gen.uniform(-0.2, 0.2));
    const auto p = gen.torus(2);
    const double th = gen.angle();
    TrajectoryOptions opt;
    opt.output_dt = 2.0;
    const auto polar = reconstruct_cartesian(integrate_polar_linear(fam, p, th, 0.0, 100.0, opt));
    TrajectoryOptions oracle = opt;
    oracle.control = StepControl{1e-30, 1e-11};  // relative control only, y decays by orders of magnitude
    const auto cart = integrate_linear_cartesian(fam, p, {std::sin(th), std::cos(th)}, 100.0, oracle);
    ASSERT_EQ(polar.size(), cart.size());
    for (std::size_t k = 0; k < cart.size(); ++k) {
      ASSERT_LE((polar[k].y - cart[k].y).norm(), 1e-6 * cart[k].y.norm()) << "case " << i << " t=" << cart[k].t;
    }
  }
}
