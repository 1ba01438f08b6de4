#pragma once

// Dissipative family y' = A^eps(w.t) y - k_rho(|y|) y and its radial form
// r' = r (g(w.t, theta) - k_rho(r)).

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skewflow/cocycle.hpp"
#include "skewflow/driving.hpp"

namespace skewflow {

/// 0 on [0, rho], (r - rho)^2 above. Throws std::domain_error for r < 0.
double k_rho(double rho, double r);
double k_rho_derivative(double rho, double r);

struct RadiusSampling {
  std::size_t points_per_dim{64};
  std::size_t refine{4};
  /// Full torus grids larger than this fall back to the coefficient bound.
  std::size_t max_grid_points{1u << 18};
};

struct DissipativeConfig {
  SystemFamily family;
  double delta{0.1};
  double r_rho{0.0};
  double g_max{0.0};        ///< max of g used for r_rho (grid maxima polished by local search)
  bool grid_based{true};    ///< false when the analytic coefficient bound was used
  bool verified{false};     ///< refinement re-check passed
  double verify_margin{0};  ///< max over the fine grid of g - k_rho(r_rho) + delta (<= 0 when verified)
};

/// Maximum of g over the torus sample, maximized exactly over theta (the
/// largest eigenvalue of the symmetric part of A^eps).
double max_g_on_grid(const SystemFamily& fam, std::size_t points_per_dim);

/// Upper bound on sup g from trigonometric coefficient magnitudes.
double g_upper_bound(const SystemFamily& fam);

/// rho + sqrt(max(G + delta, 0)) with G = max g, located on the sampling grid
/// and refined by a local search around the best grid points.
double compute_r_rho(const SystemFamily& fam, double delta, const RadiusSampling& sampling = {});

/// compute_r_rho plus the refinement re-check. Throws std::invalid_argument for
/// delta <= 0 and std::runtime_error for non-finite g samples.
DissipativeConfig make_dissipative(const SystemFamily& fam, double delta = 0.1,
                                   const RadiusSampling& sampling = {});

struct RadialSample {
  double t{0.0};
  double lift{0.0};
  double r{0.0};
};

struct NonlinearOptions {
  TrajectoryOptions trajectory{};
  /// Stop once the radius exceeds this. A step underflow beyond sqrt(escape_radius)
  /// also counts as escape (finite-time blow-up).
  double escape_radius{1e12};
  /// When set, the run reports the time after which r stays below it.
  std::optional<double> absorb_radius{};
};

struct RadialTrajectory {
  std::vector<RadialSample> samples;
  IntegrationReport report;
  bool escaped{false};
  double escape_time{0.0};
  std::optional<double> absorption_time{};

  const RadialSample& back() const { return samples.back(); }
};

RadialTrajectory integrate_radial_nonlinear(const SystemFamily& fam, const TorusPoint& p0,
                                            double theta0, double r0, double t_end,
                                            const NonlinearOptions& options = {});

/// r(t_end, p0, theta0, r0_i) for several initial radii on one common
/// angular trajectory (one integration, shared step sequence).
std::vector<double> radial_flow(const SystemFamily& fam, const TorusPoint& p0, double theta0,
                                std::span<const double> r0, double t_end,
                                const StepControl& control = {});

struct PlanarTrajectory {
  std::vector<PlanarSample> samples;
  IntegrationReport report;
  bool escaped{false};
  double escape_time{0.0};
  std::optional<double> absorption_time{};

  const PlanarSample& back() const { return samples.back(); }
};

PlanarTrajectory integrate_full(const SystemFamily& fam, const TorusPoint& p0, Vec2 y0,
                                double t_end, const NonlinearOptions& options = {});

/// CSV with the trajectory columns t, theta_reduced, lift, log_r, y1, y2.
void write_trajectory_csv(std::ostream& os, const PlanarTrajectory& traj,
                          std::string_view metadata = {});

/// JSON run record: status, escape flag and time, absorption time.
std::string run_summary_json(const IntegrationReport& report, bool escaped, double escape_time,
                             std::optional<double> absorption_time);

}  // namespace skewflow
