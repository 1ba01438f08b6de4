#pragma once

// Li-Yorke pair proxies, scrambled-set sampling, the density estimator p_t and
// orbit-primitive oscillation diagnostics for the trace function.
//
// Verdicts are finite-horizon evidence only; every label carries CANDIDATE.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skewflow/attractor.hpp"
#include "skewflow/driving.hpp"
#include "skewflow/nonlinear.hpp"

namespace skewflow {

/// y = r (sin theta, cos theta).
struct PolarPoint {
  double theta{0.0};
  double r{0.0};
};

enum class PairVerdict { LiYorkeCandidate, DistalCandidate, AsymptoticCandidate, Unresolved };
inline constexpr std::size_t kPairVerdictCount = 4;

struct PairThresholds {
  double delta_low{0.0};
  double delta_high{0.0};

  /// 1e-3 r_rho and 5e-2 r_rho.
  static PairThresholds from_r_rho(double r_rho) { return {1e-3 * r_rho, 5e-2 * r_rho}; }
};

/// LY if d_min < low and d_max > high; ASYMPTOTIC if d_max < low; DISTAL if
/// d_min >= low; UNRESOLVED otherwise.
PairVerdict classify_pair(double d_min, double d_max, const PairThresholds& thresholds);

struct PairOptions {
  double horizon{2000.0};
  /// Start of the tail window; defaults to horizon / 2.
  std::optional<double> window_start{};
  /// Distances are read on the grid k * sample_dt.
  double sample_dt{0.5};
  /// Defaults to PairThresholds::from_r_rho of the configuration.
  std::optional<PairThresholds> thresholds{};
  bool record_track{false};
  StepControl control{1e-9, 1e-9};
};

struct PairDiagnostics {
  TorusPoint base{std::vector<double>{0.0}};
  PolarPoint ic1;
  PolarPoint ic2;
  double window_start{0.0};
  double window_end{0.0};
  double d_min{0.0};
  double d_max{0.0};
  PairThresholds thresholds;
  PairVerdict verdict{PairVerdict::Unresolved};
  IntegrationReport report;
  std::vector<std::array<double, 2>> track;  ///< (t, d) over the whole run when recorded
};

/// Both solutions share the base point and are integrated jointly in
/// (theta, log r) form. Radii must be positive and the points distinct.
PairDiagnostics pair_distance_track(const DissipativeConfig& cfg, const TorusPoint& p,
                                    PolarPoint ic1, PolarPoint ic2,
                                    const PairOptions& options = {});

struct ScrambleOptions {
  std::size_t n_pairs{200};
  std::uint64_t seed{1};
  std::size_t section_angles{32};
  PairOptions pair{};
  PullbackSettings pullback{};
  /// The section counts as degenerate when every beta estimate is <= this.
  double degenerate_beta{0.0};
  std::size_t workers{0};
};

struct ScrambleResult {
  AttractorSection section;
  std::vector<PairDiagnostics> pairs;
  std::array<std::size_t, kPairVerdictCount> histogram{};
  bool empty_sample{false};
  PairThresholds thresholds;
  std::uint64_t seed{0};

  double fraction(PairVerdict v) const;
  double li_yorke_fraction() const { return fraction(PairVerdict::LiYorkeCandidate); }
};

/// Pairs drawn from the estimated section at p: angle uniform on the section
/// grid (either lift), radius uniform in (0, beta].
ScrambleResult scrambled_sample(const DissipativeConfig& cfg, const TorusPoint& p,
                                const ScrambleOptions& options = {});

/// Portable uniform draw in (0, 1].
inline double unit_interval(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

struct DensityEstimate {
  std::vector<TorusPoint> base_points;
  std::vector<double> angles;  ///< in [0, pi)
  std::vector<double> values;  ///< row-major: base point, then angle
  double t{0.0};
  /// Grid mean of p_t, the quadrature against normalized m x l on T^d x P.
  double mass{0.0};

  double at(std::size_t base, std::size_t angle) const { return values[base * angles.size() + angle]; }
};

/// p_t(w, theta) = (1/t) int_{-t}^0 exp(int_0^s df/dtheta) ds for each angle at
/// one base point. The inner exponential is carried as r~_l(s)^-2.
std::vector<double> density_fiber(const SystemFamily& fam, const TorusPoint& p,
                                  std::span<const double> thetas, double t,
                                  const StepControl& control = {1e-8, 1e-8});

double density_point(const SystemFamily& fam, const TorusPoint& p, double theta, double t,
                     const StepControl& control = {1e-8, 1e-8});

DensityEstimate density_pt(const SystemFamily& fam, std::span<const TorusPoint> base_points,
                           std::span<const double> angles, double t,
                           const StepControl& control = {1e-8, 1e-8});

struct PrimitiveOscillation {
  TorusPoint base{std::vector<double>{0.0}};
  double horizon{0.0};
  double sup_fwd{0.0}, inf_fwd{0.0}, sup_bwd{0.0}, inf_bwd{0.0};
  double t_sup_fwd{0.0}, t_inf_fwd{0.0}, t_sup_bwd{0.0}, t_inf_bwd{0.0};
  double mean_estimate{0.0};  ///< (H(T) - H(-T)) / 2T
};

/// Extremes of H(t) = int_0^t e(s) ds over [0, T] and [-T, 0], read on a grid
/// of spacing `step`; `e_along_orbit(s)` is e(w . s).
PrimitiveOscillation primitive_oscillation(const std::function<double(double)>& e_along_orbit,
                                           const TorusPoint& base, double horizon,
                                           double step = 0.25);

PrimitiveOscillation primitive_oscillation(const TrigPoly& e, const Frequencies& freqs,
                                           const TorusPoint& base, double horizon,
                                           double step = 0.25);

const char* to_string(PairVerdict v);

/// Columns t, d.
void write_pair_csv(std::ostream& os, const PairDiagnostics& pair, std::string_view metadata = {});
/// Columns pair, theta1, r1, theta2, r2, d_min, d_max, verdict.
void write_pairs_summary_csv(std::ostream& os, const ScrambleResult& result,
                             std::string_view metadata = {});
/// Histogram record with thresholds, seed and horizon.
std::string scramble_summary_json(const ScrambleResult& result);
/// Columns phase1..phased, theta, p_t.
void write_density_csv(std::ostream& os, const DensityEstimate& density, std::string_view metadata = {});

}  // namespace skewflow
