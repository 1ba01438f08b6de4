#pragma once

// Lyapunov exponents, a finite-horizon Sacker-Sell probe, rotation numbers and
// the sign classifier for the spectrum.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skewflow/driving.hpp"
#include "skewflow/ode.hpp"

namespace skewflow {

struct ExponentEstimate {
  double value{0.0};
  double error{0.0};  ///< std deviation of the window exponents
  std::vector<double> window_exponents;
  IntegrationReport report;
};

/// Dominant exponent from the growth of log r along a generic direction.
/// Requires horizon >= 10 * window > 0 (std::invalid_argument otherwise).
ExponentEstimate lyapunov_max(const SystemFamily& fam, const TorusPoint& p0, double horizon,
                              double window, const StepControl& control = {},
                              double theta0 = 0.7);

/// (1/T) int_0^T tr A^eps - lambda_max, the trace integral by quadrature.
ExponentEstimate lyapunov_min(const SystemFamily& fam, const TorusPoint& p0, double horizon,
                              const ExponentEstimate& lambda_max);

/// (1/T) int_0^T tr A^eps(p0 . s) ds.
double mean_trace_rate(const SystemFamily& fam, const TorusPoint& p0, double horizon);

enum class DichotomyVerdict { HyperbolicAttracting, HyperbolicRepelling, Ambiguous };

struct DichotomyRow {
  double lambda{0.0};
  DichotomyVerdict verdict{DichotomyVerdict::Ambiguous};
  double forward_margin{0.0};   ///< lambda - max_p log|U(T, p)| / T
  double backward_margin{0.0};  ///< -max_p log|U(-T, p)| / T - lambda
};

struct DichotomySettings {
  double margin{0.02};
  double horizon{2000.0};
  double spacing{0.05};
  /// Probe range; defaults to the growth-rate bracket widened by 0.25.
  std::optional<double> lambda_lo{};
  std::optional<double> lambda_hi{};
  StepControl control{};
};

struct DichotomyProbe {
  std::vector<DichotomyRow> rows;
  double forward_rate{0.0};   ///< max_p log|U(T, p)| / T
  double backward_rate{0.0};  ///< max_p log|U(-T, p)| / T
  /// Closure of the ambiguous grid values; empty when none is ambiguous.
  std::optional<double> spectrum_lo{};
  std::optional<double> spectrum_hi{};
};

/// The cocycle over each sample base point is integrated once in each
/// direction; the lambda shift only rescales it by exp(-+lambda T).
DichotomyProbe dichotomy_probe(const SystemFamily& fam, const std::vector<TorusPoint>& sample,
                               const DichotomySettings& settings = {});

/// Verdict for one shift with the given margins.
DichotomyVerdict dichotomy_verdict(double forward_margin, double backward_margin, double margin);

struct RotationEstimate {
  double value{0.0};       ///< (lift(T) - theta0) / T
  double half_value{0.0};  ///< same at T / 2
  double error{0.0};       ///< |value - half_value|
  IntegrationReport report;
};

/// Average angular velocity of the lift, in radians per unit time.
RotationEstimate rotation_number(const SystemFamily& fam, const TorusPoint& p0, double theta0,
                                 double horizon, const StepControl& control = {});

struct SpectrumEstimate {
  double lambda_max{0.0};
  double lambda_min{0.0};
  double lambda_max_error{0.0};
  double lambda_min_error{0.0};
  double horizon{0.0};
  double window{0.0};
  double trace_rate{0.0};  ///< (1/T) log det U(T) = lambda_min + lambda_max
  std::vector<double> window_exponents;
  std::vector<DichotomyRow> dichotomy_probe;
};

SpectrumEstimate estimate_spectrum(const SystemFamily& fam, const TorusPoint& p0, double horizon,
                                   double window, const StepControl& control = {});

enum class SpectrumCase { Negative, Positive, Zero, Unresolved };

struct ClassifySettings {
  double zero_tol{0.02};
  double horizon{5000.0};
  double window{250.0};
  /// Boundedness probe for the zero case: sup of r_l over [-H, H] per angle.
  double bounded_horizon{2000.0};
  double escape_threshold{1e6};
  std::size_t bounded_angles{8};
  StepControl control{};
};

struct CaseLabel {
  SpectrumCase label{SpectrumCase::Unresolved};
  SpectrumEstimate spectrum;
  double zero_tol{0.0};
  bool bounded_probe_run{false};
  bool all_bounded{false};
  double max_sup{0.0};  ///< largest sup r_l over the probed angles
};

CaseLabel classify_case(const SystemFamily& fam, const TorusPoint& p0,
                        const ClassifySettings& settings = {});

const char* to_string(DichotomyVerdict v);
const char* to_string(SpectrumCase c);

/// Columns lambda, verdict, forward_margin, backward_margin.
void write_dichotomy_csv(std::ostream& os, const std::vector<DichotomyRow>& rows,
                         std::string_view metadata = {});

/// JSON record with lambda_min, lambda_max, their errors, the label and evidence.
std::string spectrum_summary_json(const CaseLabel& label);

}  // namespace skewflow
