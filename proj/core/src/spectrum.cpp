#include "skewflow/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "skewflow/attractor.hpp"
#include "skewflow/cocycle.hpp"
#include "skewflow/csv.hpp"
#include "skewflow/parallel.hpp"
#include "skewflow/quadrature.hpp"

namespace skewflow {

namespace {

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

ExponentEstimate lyapunov_max(const SystemFamily& fam, const TorusPoint& p0, double horizon,
                              double window, const StepControl& control, double theta0) {
  if (!(window > 0.0) || !(horizon >= 10.0 * window)) {
    throw std::invalid_argument("lyapunov_max: need horizon >= 10 * window > 0");
  }
  TrajectoryOptions opts{control, window};
  const auto traj = integrate_polar_linear(fam, p0, theta0, 0.0, horizon, opts);
  ExponentEstimate out;
  out.report = traj.report;
  const auto& s = traj.samples;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double dt = s[i].t - s[i - 1].t;
    // a trailing partial window is folded into the total only
    if (dt < 0.5 * window) continue;
    out.window_exponents.push_back((s[i].log_r - s[i - 1].log_r) / dt);
  }
  out.value = (traj.back().log_r - s.front().log_r) / traj.back().t;
  out.error = stddev(out.window_exponents);
  return out;
}

double mean_trace_rate(const SystemFamily& fam, const TorusPoint& p0, double horizon) {
  const OrbitCoefficients coeffs(fam, p0);
  return orbit_integral([&](double s) { return coeffs.at(s).trace(); }, 0.0, horizon) / horizon;
}

ExponentEstimate lyapunov_min(const SystemFamily& fam, const TorusPoint& p0, double horizon,
                              const ExponentEstimate& lambda_max) {
  const double rate = mean_trace_rate(fam, p0, horizon);
  ExponentEstimate out;
  out.value = rate - lambda_max.value;
  out.error = lambda_max.error;
  out.report = lambda_max.report;
  for (double w : lambda_max.window_exponents) out.window_exponents.push_back(rate - w);
  return out;
}

DichotomyVerdict dichotomy_verdict(double forward_margin, double backward_margin, double margin) {
  if (forward_margin >= margin) return DichotomyVerdict::HyperbolicAttracting;
  if (backward_margin >= margin) return DichotomyVerdict::HyperbolicRepelling;
  return DichotomyVerdict::Ambiguous;
}

DichotomyProbe dichotomy_probe(const SystemFamily& fam, const std::vector<TorusPoint>& sample,
                               const DichotomySettings& settings) {
  if (sample.empty()) throw std::invalid_argument("dichotomy_probe: empty sample");
  if (!(settings.horizon > 0.0) || !(settings.spacing > 0.0)) {
    throw std::invalid_argument("dichotomy_probe: horizon and spacing must be positive");
  }
  const double T = settings.horizon;
  std::vector<double> fwd(sample.size()), bwd(sample.size());
  parallel_for(sample.size(), [&](std::size_t i) {
    fwd[i] = propagate_cocycle(fam, sample[i], T, settings.control).state.log_operator_norm() / T;
    bwd[i] = propagate_cocycle(fam, sample[i], -T, settings.control).state.log_operator_norm() / T;
  });
  DichotomyProbe out;
  out.forward_rate = *std::max_element(fwd.begin(), fwd.end());
  out.backward_rate = *std::max_element(bwd.begin(), bwd.end());

  const double h = settings.spacing;
  const double lo = settings.lambda_lo.value_or(std::floor((-out.backward_rate - 0.25) / h) * h);
  const double hi = settings.lambda_hi.value_or(std::ceil((out.forward_rate + 0.25) / h) * h);
  if (hi < lo) throw std::invalid_argument("dichotomy_probe: empty lambda range");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / h + 1e-9)) + 1;
  for (std::size_t k = 0; k < n; ++k) {
    DichotomyRow row;
    row.lambda = lo + h * static_cast<double>(k);
    row.forward_margin = row.lambda - out.forward_rate;
    row.backward_margin = -out.backward_rate - row.lambda;
    row.verdict = dichotomy_verdict(row.forward_margin, row.backward_margin, settings.margin);
    if (row.verdict == DichotomyVerdict::Ambiguous) {
      if (!out.spectrum_lo) out.spectrum_lo = row.lambda;
      out.spectrum_hi = row.lambda;
    }
    out.rows.push_back(row);
  }
  return out;
}

RotationEstimate rotation_number(const SystemFamily& fam, const TorusPoint& p0, double theta0,
                                 double horizon, const StepControl& control) {
  if (!(horizon > 0.0)) throw std::invalid_argument("rotation_number: horizon must be positive");
  TrajectoryOptions opts{control, 0.5 * horizon};
  const auto traj = integrate_polar_linear(fam, p0, theta0, 0.0, horizon, opts);
  RotationEstimate out;
  out.report = traj.report;
  const auto& end = traj.back();
  out.value = (end.lift - theta0) / end.t;
  out.half_value = out.value;
  for (const auto& s : traj.samples) {
    if (std::abs(s.t - 0.5 * horizon) <= 1e-9 * horizon) out.half_value = (s.lift - theta0) / s.t;
  }
  out.error = std::abs(out.value - out.half_value);
  return out;
}

SpectrumEstimate estimate_spectrum(const SystemFamily& fam, const TorusPoint& p0, double horizon,
                                   double window, const StepControl& control) {
  const auto lmax = lyapunov_max(fam, p0, horizon, window, control);
  const auto lmin = lyapunov_min(fam, p0, horizon, lmax);
  SpectrumEstimate out;
  out.lambda_max = lmax.value;
  out.lambda_min = lmin.value;
  out.lambda_max_error = lmax.error;
  out.lambda_min_error = lmin.error;
  out.horizon = horizon;
  out.window = window;
  out.trace_rate = lmax.value + lmin.value;
  out.window_exponents = lmax.window_exponents;
  if (out.lambda_min > out.lambda_max) std::swap(out.lambda_min, out.lambda_max);
  return out;
}

CaseLabel classify_case(const SystemFamily& fam, const TorusPoint& p0,
                        const ClassifySettings& settings) {
  CaseLabel out;
  out.zero_tol = settings.zero_tol;
  out.spectrum = estimate_spectrum(fam, p0, settings.horizon, settings.window, settings.control);
  const double tol = settings.zero_tol;
  const auto& s = out.spectrum;
  if (s.lambda_max < -tol) {
    out.label = SpectrumCase::Negative;
  } else if (s.lambda_min > tol) {
    out.label = SpectrumCase::Positive;
  } else if (std::abs(s.lambda_max) <= tol && std::abs(s.lambda_min) <= tol) {
    out.label = SpectrumCase::Zero;
  } else {
    out.label = SpectrumCase::Unresolved;
  }
  if (out.label == SpectrumCase::Zero) {
    out.bounded_probe_run = true;
    const auto angles = projective_angles(std::max<std::size_t>(settings.bounded_angles, 1));
    std::vector<double> sups(angles.size());
    parallel_for(angles.size(), [&](std::size_t i) {
      sups[i] = alpha_sup(fam, p0, angles[i], settings.bounded_horizon, settings.control).alpha;
    });
    out.max_sup = *std::max_element(sups.begin(), sups.end());
    out.all_bounded = out.max_sup < settings.escape_threshold;
  }
  return out;
}

const char* to_string(DichotomyVerdict v) {
  switch (v) {
    case DichotomyVerdict::HyperbolicAttracting: return "hyperbolic-attracting";
    case DichotomyVerdict::HyperbolicRepelling: return "hyperbolic-repelling";
    case DichotomyVerdict::Ambiguous: return "ambiguous";
  }
  return "?";
}

const char* to_string(SpectrumCase c) {
  switch (c) {
    case SpectrumCase::Negative: return "NEGATIVE";
    case SpectrumCase::Positive: return "POSITIVE";
    case SpectrumCase::Zero: return "ZERO";
    case SpectrumCase::Unresolved: return "UNRESOLVED";
  }
  return "?";
}

void write_dichotomy_csv(std::ostream& os, const std::vector<DichotomyRow>& rows,
                         std::string_view metadata) {
  CsvWriter csv(os);
  if (!metadata.empty()) csv.comment(metadata);
  csv.header({"lambda", "verdict", "forward_margin", "backward_margin"});
  for (const auto& r : rows) {
    csv.cell(r.lambda).cell(to_string(r.verdict)).cell(r.forward_margin).cell(r.backward_margin);
    csv.end_row();
  }
}

std::string spectrum_summary_json(const CaseLabel& label) {
  nlohmann::ordered_json j;
  const auto& s = label.spectrum;
  j["lambda_min"] = s.lambda_min;
  j["lambda_max"] = s.lambda_max;
  j["lambda_min_error"] = s.lambda_min_error;
  j["lambda_max_error"] = s.lambda_max_error;
  j["label"] = to_string(label.label);
  j["horizon"] = s.horizon;
  j["window"] = s.window;
  j["zero_tol"] = label.zero_tol;
  if (label.bounded_probe_run) {
    j["all_bounded"] = label.all_bounded;
    j["max_sup"] = label.max_sup;
  }
  return j.dump(2);
}

}  // namespace skewflow
