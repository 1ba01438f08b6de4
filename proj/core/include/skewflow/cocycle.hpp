#pragma once

// Linear cocycle y' = A^eps(w.t) y and its polar decomposition.
//
// Coordinates follow y = r (sin theta, cos theta). The angle obeys
// theta' = f(w.t, theta) and the radius r' = r g(w.t, theta); both f and g are
// pi-periodic in theta. Radii are carried as log r so that growing and
// decaying solutions never overflow.

#include <cmath>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "skewflow/driving.hpp"
#include "skewflow/linalg.hpp"
#include "skewflow/ode.hpp"

namespace skewflow {

/// f(A, theta) = -c sin^2 + b cos^2 + (a - d) sin cos.
double f_angular(const Mat2& A, double theta);
/// g(A, theta) = a sin^2 + d cos^2 + (b + c) sin cos.
double g_radial(const Mat2& A, double theta);
/// d f / d theta = -(b + c) sin 2theta + (a - d) cos 2theta.
double df_dtheta(const Mat2& A, double theta);

double f_angular(const SystemFamily& fam, const TorusPoint& p, double theta);
double g_radial(const SystemFamily& fam, const TorusPoint& p, double theta);
double df_dtheta(const SystemFamily& fam, const TorusPoint& p, double theta);

/// f, g and df/dtheta from cos 2theta and sin 2theta; the integrators' hot path.
struct PolarRates {
  double f;
  double g;
  double df;
};

inline PolarRates polar_rates(const Mat2& A, double cos2, double sin2) {
  const double bpc = 0.5 * (A.b + A.c);
  const double amd = 0.5 * (A.a - A.d);
  return {0.5 * (A.b - A.c) + bpc * cos2 + amd * sin2,
          0.5 * (A.a + A.d) - amd * cos2 + bpc * sin2,
          -2.0 * bpc * sin2 + 2.0 * amd * cos2};
}

inline PolarRates polar_rates(const Mat2& A, double theta) {
  return polar_rates(A, std::cos(2.0 * theta), std::sin(2.0 * theta));
}

struct PolarState {
  double t{0.0};
  double theta{0.0};  ///< lift reduced into [0, 2pi)
  double lift{0.0};   ///< unreduced angle
  double log_r{0.0};

  double radius() const { return std::exp(log_r); }
};

/// Which radial rate drives log r.
enum class RadialRate {
  Full,       ///< g
  Traceless,  ///< g - e = -(1/2) df/dtheta, the traceless part of A
};

struct TrajectoryOptions {
  StepControl control{};
  /// Sample spacing for the recorded trajectory; 0 records every accepted step.
  double output_dt{0.0};
};

struct PolarTrajectory {
  std::vector<PolarState> samples;
  IntegrationReport report;

  bool ok() const { return report.ok(); }
  const PolarState& back() const { return samples.back(); }
};

/// Integrates (theta, log r) from time 0 at base point p0 to t_end (either sign).
/// On integration failure the last good state closes the trajectory.
PolarTrajectory integrate_polar_linear(const SystemFamily& fam, const TorusPoint& p0,
                                       double theta0, double log_r0, double t_end,
                                       const TrajectoryOptions& options = {},
                                       RadialRate rate = RadialRate::Full);

/// U(t, w) = exp(log_scale) * matrix, renormalized so the largest column norm
/// of `matrix` stays within [0.5, 2].
///
/// log |det U| is accumulated separately: once the exponents separate, the
/// small singular value of `matrix` is lost to rounding.
struct CocycleState {
  Mat2 matrix{Mat2::identity()};
  double log_scale{0.0};
  double log_abs_det{0.0};

  double log_det() const { return log_abs_det; }
  /// exp(log_scale) * matrix; overflows for large log_scale.
  Mat2 value() const { return std::exp(log_scale) * matrix; }
  /// log |U v| without forming U.
  double log_norm_applied(Vec2 v) const { return log_scale + std::log((matrix * v).norm()); }
  double log_operator_norm() const { return log_scale + std::log(matrix.operator_norm()); }
};

struct CocycleResult {
  CocycleState state;
  IntegrationReport report;
  std::size_t renormalizations{0};
};

CocycleResult propagate_cocycle(const SystemFamily& fam, const TorusPoint& p0, double t_end,
                                const StepControl& control = {});

struct PlanarSample {
  double t{0.0};
  Vec2 y{};
};

/// y(t) = exp(log r) (sin lift, cos lift).
std::vector<PlanarSample> reconstruct_cartesian(const PolarTrajectory& traj);

/// Direct Cartesian integration of the linear system.
std::vector<PlanarSample> integrate_linear_cartesian(const SystemFamily& fam, const TorusPoint& p0,
                                                     Vec2 y0, double t_end,
                                                     const TrajectoryOptions& options = {});

/// CSV with columns t, theta_reduced, lift, log_r, y1, y2.
void write_trajectory_csv(std::ostream& os, const PolarTrajectory& traj,
                          std::string_view metadata = {});

}  // namespace skewflow
