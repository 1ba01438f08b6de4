#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include <skewflow/chaos.hpp>
#include <skewflow/cocycle.hpp>
#include <skewflow/systems.hpp>

#include "support/generators.hpp"

using namespace skewflow;
using skewflow::testing::Gen;

namespace {

const double kPi = std::numbers::pi;

const TorusPoint& chaos_base() {
  static const TorusPoint p({4.3716, 0.8096, 5.691, 0.6478, 0.5822, 2.0832, 5.8934, 0.2075});
  return p;
}

DissipativeConfig quasi(double eps) { return make_dissipative(systems::quasiperiodic(eps), 0.1); }

}  // namespace

TEST(ClassifyPair, ThresholdRules) {
  const PairThresholds th{1e-3, 5e-2};
  EXPECT_EQ(classify_pair(1e-4, 0.1, th), PairVerdict::LiYorkeCandidate);
  EXPECT_EQ(classify_pair(1e-5, 5e-4, th), PairVerdict::AsymptoticCandidate);
  EXPECT_EQ(classify_pair(1e-3, 0.01, th), PairVerdict::DistalCandidate);
  EXPECT_EQ(classify_pair(1e-4, 0.01, th), PairVerdict::Unresolved);
  const auto t = PairThresholds::from_r_rho(2.0);
  EXPECT_DOUBLE_EQ(t.delta_low, 2e-3);
  EXPECT_DOUBLE_EQ(t.delta_high, 0.1);
}

TEST(PairTrack, NegativeCaseIsAsymptotic) {
  const auto d = pair_distance_track(quasi(-0.15), TorusPoint::origin(2), {0.3, 0.4}, {2.0, 0.1});
  EXPECT_EQ(d.verdict, PairVerdict::AsymptoticCandidate);
  EXPECT_DOUBLE_EQ(d.window_start, 1000.0);
  EXPECT_DOUBLE_EQ(d.window_end, 2000.0);
  EXPECT_LE(d.d_min, d.d_max);
}

TEST(PairTrack, AutonomousLimitCircleIsDistal) {
  const double eps = 0.5, r = 0.5 + std::sqrt(eps);
  const double dtheta = 0.8;
  const auto d = pair_distance_track(make_dissipative(systems::autonomous_hopf(eps), 0.1),
                                     TorusPoint::origin(1), {0.0, r}, {dtheta, r});
  EXPECT_EQ(d.verdict, PairVerdict::DistalCandidate);
  // rigid rotation keeps the chord length
  const double chord = 2.0 * r * std::sin(dtheta / 2.0);
  EXPECT_NEAR(d.d_min, chord, 1e-6);
  EXPECT_NEAR(d.d_max, chord, 1e-6);
}

TEST(PairTrack, DiagonalSameRayMatchesClosedFormAndIsLiYorke) {
  const auto trace = systems::limit_periodic_trace(8);
  const auto fam = systems::diagonal_weakly_elliptic(trace);
  const auto cfg = make_dissipative(fam, 0.1);
  const double t0 = 1000.0, T = 2000.0;
  const auto q = advance_base(chaos_base(), fam.frequencies(), t0);
  auto H = [&](double t) { return trace.e.orbit_primitive(q.phases(), trace.freqs.values(), t); };
  double h_max = 0.0;
  for (double t = 0.0; t <= T; t += 0.25) h_max = std::max(h_max, H(t));
  // on the first axis r(t) = r0 exp(1.5 H(t)) while r stays below rho
  const double r2 = 0.9 * fam.rho() * std::exp(-1.5 * h_max), r1 = 0.5 * r2;
  PairOptions opt;
  opt.horizon = T;
  opt.record_track = true;
  const auto d = pair_distance_track(cfg, q, {kPi / 2, r1}, {kPi / 2, r2}, opt);
  ASSERT_TRUE(d.report.ok());
  double lo = INFINITY, hi = 0.0;
  for (const auto& [t, dist] : d.track) {
    const double oracle = (r2 - r1) * std::exp(1.5 * H(t));
    ASSERT_NEAR(dist, oracle, 1e-6 * oracle) << "t=" << t;
    if (t >= T / 2) lo = std::min(lo, oracle), hi = std::max(hi, oracle);
  }
  EXPECT_EQ(classify_pair(lo, hi, d.thresholds), PairVerdict::LiYorkeCandidate);
  EXPECT_EQ(d.verdict, PairVerdict::LiYorkeCandidate);
}

TEST(PairTrack, InvalidPairsRejected) {
  const auto cfg = quasi(0.5);
  EXPECT_THROW(pair_distance_track(cfg, TorusPoint::origin(2), {0.3, 1.0}, {0.3, 1.0}), std::invalid_argument);
  EXPECT_THROW(pair_distance_track(cfg, TorusPoint::origin(2), {0.3, 0.0}, {0.3, 1.0}), std::invalid_argument);
}

TEST(Scramble, NegativeCaseAllAsymptotic) {
  ScrambleOptions opt;
  opt.n_pairs = 20;
  opt.section_angles = 8;
  opt.pullback.schedule = {250, 500};
  const auto res = scrambled_sample(quasi(-0.15), TorusPoint::origin(2), opt);
  ASSERT_FALSE(res.empty_sample);
  EXPECT_EQ(res.histogram[static_cast<std::size_t>(PairVerdict::AsymptoticCandidate)], 20u);
  EXPECT_DOUBLE_EQ(res.fraction(PairVerdict::AsymptoticCandidate), 1.0);
}

TEST(Scramble, PositiveCaseHasNoLiYorkePairs) {
  ScrambleOptions opt;
  opt.n_pairs = 20;
  opt.section_angles = 8;
  const auto res = scrambled_sample(quasi(0.5), TorusPoint::origin(2), opt);
  EXPECT_EQ(res.li_yorke_fraction(), 0.0);
  EXPECT_EQ(res.pairs.size(), 20u);
}

TEST(Scramble, DegenerateSectionGivesEmptySample) {
  ScrambleOptions opt;
  opt.n_pairs = 5;
  opt.section_angles = 4;
  opt.degenerate_beta = 1e-3;
  opt.pullback.schedule = {250, 500};
  const auto res = scrambled_sample(quasi(-0.15), TorusPoint::origin(2), opt);
  EXPECT_TRUE(res.empty_sample);
  EXPECT_TRUE(res.pairs.empty());
  EXPECT_NE(scramble_summary_json(res).find("empty_sample"), std::string::npos);
}

TEST(Scramble, SeedDeterminesSample) {
  ScrambleOptions opt;
  opt.n_pairs = 4;
  opt.section_angles = 4;
  opt.pair.horizon = 100.0;
  const auto a = scrambled_sample(quasi(0.5), TorusPoint::origin(2), opt);
  const auto b = scrambled_sample(quasi(0.5), TorusPoint::origin(2), opt);
  opt.seed = 2;
  const auto c = scrambled_sample(quasi(0.5), TorusPoint::origin(2), opt);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(a.pairs[i].ic1.r, b.pairs[i].ic1.r);
    EXPECT_EQ(a.pairs[i].ic2.theta, b.pairs[i].ic2.theta);
  }
  EXPECT_NE(a.pairs[0].ic1.r, c.pairs[0].ic1.r);
}

TEST(Scramble, UnitInterval) {
  EXPECT_GT(unit_interval(0), 0.0);
  EXPECT_EQ(unit_interval(~std::uint64_t{0}), 1.0);
}

TEST(Density, RigidRotationIsOne) {
  const auto fam = systems::autonomous_hopf(0.5);
  for (double th : {0.0, 0.7, 2.0}) EXPECT_NEAR(density_point(fam, TorusPoint::origin(1), th, 100.0), 1.0, 1e-9);
  const auto est = density_pt(systems::quasiperiodic(0.0), torus_grid(2, 4), projective_angles(8), 500.0);
  EXPECT_NEAR(est.mass, 1.0, 0.05);
}

TEST(Density, EllipticCircleFlowInvariantDensity) {
  // theta' = f(theta) > 0 on the circle; p = omega / f with omega the mean speed
  const auto fam = systems::constant({0, 2, -1, 0});
  const auto A = eval_matrix(fam, TorusPoint::origin(1));
  const std::size_t n = 64;
  double inv = 0.0;
  for (std::size_t k = 0; k < 4096; ++k) inv += 1.0 / f_angular(A, kPi * (k + 0.5) / 4096);
  const double omega = 4096 / inv;
  const auto angles = projective_angles(n);
  const std::vector<TorusPoint> base = {TorusPoint::origin(1)};
  const auto est = density_pt(fam, base, angles, 500.0);
  EXPECT_NEAR(est.mass, 1.0, 0.05);
  for (std::size_t k = 0; k < n; ++k) {
    const double oracle = omega / f_angular(A, angles[k]);
    EXPECT_NEAR(est.at(0, k), oracle, 1e-2 * oracle) << "theta " << angles[k];
  }
}

TEST(Density, NonPositiveTimeRejected) {
  EXPECT_THROW(density_point(systems::quasiperiodic(0.0), TorusPoint::origin(2), 0.0, 0.0),
               std::invalid_argument);
}

TEST(PrimitiveOscillation, SingleHarmonicStaysBounded) {
  const TrigPoly e(0.0, {{{1}, 1.0, 0.0}});
  const Frequencies w({1.0});
  for (double T : {10.0, 100.0, 1000.0}) {
    const auto o = primitive_oscillation(e, w, TorusPoint::origin(1), T);
    EXPECT_LE(o.sup_fwd, 1.0 + 1e-12);
    EXPECT_GE(o.inf_fwd, -1.0 - 1e-12);
    EXPECT_LE(o.sup_bwd, 1.0 + 1e-12);
    EXPECT_GE(o.inf_bwd, -1.0 - 1e-12);
  }
  EXPECT_NEAR(primitive_oscillation(e, w, TorusPoint::origin(1), 1000.0).sup_fwd, 1.0, 1e-3);
}

TEST(PrimitiveOscillation, ZeroFunction) {
  const auto o = primitive_oscillation([](double) { return 0.0; }, TorusPoint::origin(1), 50.0);
  EXPECT_EQ(o.sup_fwd, 0.0);
  EXPECT_EQ(o.inf_fwd, 0.0);
  EXPECT_EQ(o.sup_bwd, 0.0);
  EXPECT_EQ(o.inf_bwd, 0.0);
}

TEST(PrimitiveOscillation, LimitPeriodicInfDecreases) {
  const auto trace = systems::limit_periodic_trace(8);
  const double step = 0.25;
  double prev = 0.0;
  for (double T : {100.0, 1000.0, 10000.0, 100000.0}) {
    const auto o = primitive_oscillation(trace.e, trace.freqs, TorusPoint::origin(8), T, step);
    // closed form H(t) = sum (3/2)^k sin(3^-k t)
    double inf = 0.0;
    for (double t = 0.0; t <= T + 1e-9; t += step) {
      double h = 0.0;
      for (int k = 1; k <= 8; ++k) h += std::pow(1.5, k) * std::sin(std::pow(3.0, -k) * t);
      inf = std::min(inf, h);
    }
    EXPECT_NEAR(o.inf_fwd, inf, 1e-8) << T;
    EXPECT_LE(o.inf_fwd, prev);
    prev = o.inf_fwd;
  }
  EXPECT_LT(prev, -20.0);
}

TEST(ChaosOutput, CsvColumns) {
  PairOptions opt;
  opt.horizon = 20.0;
  opt.record_track = true;
  const auto d = pair_distance_track(quasi(0.5), TorusPoint::origin(2), {0.1, 1.0}, {0.2, 1.0}, opt);
  std::ostringstream os;
  write_pair_csv(os, d);
  EXPECT_EQ(os.str().rfind("t,d\n", 0), 0u);

  DensityEstimate est;
  est.base_points = {TorusPoint::origin(2)};
  est.angles = {0.0};
  est.values = {1.0};
  std::ostringstream ds;
  write_density_csv(ds, est);
  EXPECT_EQ(ds.str().rfind("phase1,phase2,theta,p_t\n", 0), 0u);
}

// ---- properties

TEST(ChaosProperty, WindowEnlargementWidensRange) {
  Gen gen(701);
  for (int i = 0; i < 10; ++i) {
    const auto cfg = make_dissipative(gen.family(0.8, gen.uniform(-0.3, 0.3)), 0.1);
    const auto p = gen.torus(2);
    const PolarPoint a{gen.angle(), gen.uniform(0.1, 1.0)}, b{gen.angle(), gen.uniform(0.1, 1.0)};
    PairOptions narrow, wide;
    narrow.horizon = wide.horizon = 200.0;
    wide.window_start = 50.0;
    const auto dn = pair_distance_track(cfg, p, a, b, narrow);
    const auto dw = pair_distance_track(cfg, p, a, b, wide);
    ASSERT_LE(dw.d_min, dn.d_min) << "case " << i;
    ASSERT_GE(dw.d_max, dn.d_max) << "case " << i;
    ASSERT_LE(dn.d_min, dn.d_max);
    const bool ly = dn.d_min < dn.thresholds.delta_low && dn.d_max > dn.thresholds.delta_high;
    ASSERT_EQ(dn.verdict == PairVerdict::LiYorkeCandidate, ly);
  }
}

TEST(ChaosProperty, DensityPositiveAndProjective) {
  Gen gen(702);
  for (int i = 0; i < 20; ++i) {
    const auto fam = gen.family(1.0, gen.uniform(-0.5, 0.5));
    const auto p = gen.torus(2);
    const double th = gen.angle();
    const double ths[2] = {th, th + kPi};
    const auto v = density_fiber(fam, p, ths, 50.0);
    ASSERT_GT(v[0], 0.0);
    ASSERT_NEAR(v[0], v[1], 1e-6 * v[0]) << "case " << i;
  }
}
