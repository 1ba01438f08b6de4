#pragma once

// Boundary of the global attractor.
//
// The attractor fibre over (w, theta) is the segment [0, beta(w, theta)] along
// the ray of angle theta, with beta obtained as the pullback limit
//   beta(w, theta) = lim_{t->inf} r(t, sigma(-t, w, theta), r_rho),
// i.e. the radial flow started at the absorbing radius from ever earlier base
// points. Angles live on the projective line [0, pi).

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "skewflow/cocycle.hpp"
#include "skewflow/driving.hpp"
#include "skewflow/nonlinear.hpp"

namespace skewflow {

struct PullbackSettings {
  /// Strictly increasing pullback horizons; iteration stops at the first
  /// horizon whose decrement falls below `convergence_tol`.
  std::vector<double> schedule{50, 100, 200, 400, 800, 1600, 3200, 6400};
  double convergence_tol{1e-4};
  double monotone_slack{1e-8};
  /// Node spacing of the stored backward angle path.
  double path_spacing{0.05};
  StepControl control{1e-8, 1e-8};
};

struct BetaEstimate {
  double value{0.0};
  /// max(|last decrement|, integration floor); the floor is
  /// 10 (abs_tol + rel_tol r_rho), below which decrements are noise.
  double residual{0.0};
  double horizon{0.0};
  bool converged{false};
  bool non_monotone{false};
  std::vector<double> sequence;

  std::string flags() const;
};

/// Pullback estimates for several angles over one base point; the angles share
/// the base orbit and are integrated together.
std::vector<BetaEstimate> pullback_fiber(const DissipativeConfig& cfg, const TorusPoint& p,
                                         std::span<const double> thetas,
                                         const PullbackSettings& settings = {});

BetaEstimate pullback_beta(const DissipativeConfig& cfg, const TorusPoint& p, double theta,
                           const PullbackSettings& settings = {});

/// |beta(sigma(t_check, w, theta)) - r(t_check, w, theta, beta_value)|.
double equilibrium_residual(const DissipativeConfig& cfg, const TorusPoint& p, double theta,
                            double beta_value, double t_check,
                            const PullbackSettings& settings = {});

/// Batched form of equilibrium_residual over one base point.
std::vector<double> equilibrium_residuals(const DissipativeConfig& cfg, const TorusPoint& p,
                                          std::span<const double> thetas,
                                          std::span<const double> beta_values, double t_check,
                                          const PullbackSettings& settings = {});

enum class PastVerdict { Bounded, Unbounded };

struct BoundedPastResult {
  PastVerdict verdict{PastVerdict::Bounded};
  double sup_value{1.0};  ///< sup of r_l(t, w, theta, 1) over the integrated past
  double crossing_time{0.0};  ///< first t <= 0 with r_l above the threshold (Unbounded only)
  bool integration_ok{true};
};

/// Backward integration of the linear radius from r = 1 over [-horizon, 0].
BoundedPastResult bounded_past_test(const SystemFamily& fam, const TorusPoint& p, double theta,
                                    double horizon, double escape_threshold = 1e6,
                                    const StepControl& control = {});

struct AlphaEstimate {
  double alpha{1.0};      ///< sup over [-horizon, horizon] of r_l(t, w, theta, 1)
  double log_alpha{0.0};
  double argmax_time{0.0};
};

AlphaEstimate alpha_sup(const SystemFamily& fam, const TorusPoint& p, double theta, double horizon,
                        const StepControl& control = {});

struct AttractorSection {
  TorusPoint base{std::vector<double>{0.0}};
  std::vector<double> angles;  ///< in [0, pi)
  std::vector<BetaEstimate> betas;
};

/// Evenly spaced angles k pi / n for k = 0..n-1.
std::vector<double> projective_angles(std::size_t n);

AttractorSection attractor_section(const DissipativeConfig& cfg, const TorusPoint& p,
                                   std::span<const double> angles,
                                   const PullbackSettings& settings = {});

/// (theta, beta) over the full circle: each angle and its antipode.
void write_section_csv(std::ostream& os, const AttractorSection& section,
                       std::string_view metadata = {});

/// n^dim evenly spaced base points, phases 2 pi j / n.
std::vector<TorusPoint> torus_grid(std::size_t dim, std::size_t n);

struct BetaGrid {
  std::vector<TorusPoint> base_points;
  std::vector<double> angles;
  std::vector<BetaEstimate> values;  ///< row-major: base point, then angle
  double r_rho{0.0};

  const BetaEstimate& at(std::size_t base, std::size_t angle) const {
    return values[base * angles.size() + angle];
  }
  double min_value() const;
  double max_value() const;
};

/// Pullback over every base point x angle; base points run in parallel.
BetaGrid compute_beta_grid(const DissipativeConfig& cfg, std::span<const TorusPoint> base_points,
                           std::span<const double> angles, const PullbackSettings& settings = {});

/// Columns phase1..phased, theta, beta, residual, horizon, flags.
void write_beta_grid_csv(std::ostream& os, const BetaGrid& grid, std::string_view metadata = {});

enum class FiberClass { OmegaPlus, OmegaZero, Mixed };

struct FiberClassification {
  FiberClass label{FiberClass::Mixed};
  std::size_t bounded{0};
  std::size_t unbounded{0};
};

/// All sampled angles with bounded past: w estimated in Omega+; all but at
/// most one unbounded: w estimated in Omega0.
FiberClassification classify_fiber(const SystemFamily& fam, const TorusPoint& p,
                                   std::span<const double> angles, double horizon,
                                   double escape_threshold = 1e6, const StepControl& control = {});

const char* to_string(PastVerdict v);
const char* to_string(FiberClass c);

}  // namespace skewflow
