#include "skewflow/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "skewflow/csv.hpp"
#include "skewflow/detail/kernels.hpp"
#include "skewflow/detail/sampler.hpp"
#include "skewflow/parallel.hpp"
#include "skewflow/quadrature.hpp"

namespace skewflow {

PairVerdict classify_pair(double d_min, double d_max, const PairThresholds& th) {
  if (d_min < th.delta_low && d_max > th.delta_high) return PairVerdict::LiYorkeCandidate;
  if (d_max < th.delta_low) return PairVerdict::AsymptoticCandidate;
  if (d_min >= th.delta_low) return PairVerdict::DistalCandidate;
  return PairVerdict::Unresolved;
}

namespace {

// (theta_1, log r_1, theta_2, log r_2) under the nonlinear polar system.
struct PairRhs {
  const OrbitCoefficients& coeffs;
  double rho;
  void operator()(double t, const double* y, double* dy) const {
    const Mat2 A = coeffs.at(t);
    for (int j = 0; j < 4; j += 2) {
      const PolarRates pr = polar_rates(A, y[j]);
      dy[j] = pr.f;
      dy[j + 1] = pr.g - detail::k_unchecked(rho, std::exp(y[j + 1]));
    }
  }
};

double distance(const double* s) {
  const double r1 = std::exp(s[1]), r2 = std::exp(s[3]);
  return std::hypot(r1 * std::sin(s[0]) - r2 * std::sin(s[2]), r1 * std::cos(s[0]) - r2 * std::cos(s[2]));
}

}  // namespace

PairDiagnostics pair_distance_track(const DissipativeConfig& cfg, const TorusPoint& p,
                                    PolarPoint ic1, PolarPoint ic2, const PairOptions& options) {
  if (!(ic1.r > 0.0) || !(ic2.r > 0.0)) {
    throw std::invalid_argument("pair_distance_track: radii must be positive");
  }
  if (!(options.horizon > 0.0) || !(options.sample_dt > 0.0)) {
    throw std::invalid_argument("pair_distance_track: horizon and sample_dt must be positive");
  }
  PairDiagnostics out;
  out.base = p;
  out.ic1 = ic1;
  out.ic2 = ic2;
  out.window_end = options.horizon;
  out.window_start = options.window_start.value_or(0.5 * options.horizon);
  out.thresholds = options.thresholds.value_or(PairThresholds::from_r_rho(cfg.r_rho));

  std::array<double, 4> y{ic1.theta, std::log(ic1.r), ic2.theta, std::log(ic2.r)};
  const double d0 = distance(y.data());
  if (d0 == 0.0) throw std::invalid_argument("pair_distance_track: initial points coincide");

  double d_min = std::numeric_limits<double>::infinity();
  double d_max = -std::numeric_limits<double>::infinity();
  const double w0 = out.window_start - 1e-9 * std::max(1.0, options.horizon);
  auto visit = [&](double t, double d) {
    if (t >= w0) {
      d_min = std::min(d_min, d);
      d_max = std::max(d_max, d);
    }
    if (options.record_track) out.track.push_back({t, d});
  };
  visit(0.0, d0);
  auto emit = [&](double t, std::span<const double> s) { visit(t, distance(s.data())); };
  detail::Sampler sampler(0.0, options.horizon, options.sample_dt, 4, emit);

  const OrbitCoefficients coeffs(cfg.family, p);
  PairRhs rhs{coeffs, cfg.family.rho()};
  out.report = integrate(rhs, 0.0, options.horizon, std::span<double>(y), options.control, sampler);
  if (sampler.last_emitted() < out.report.t) visit(out.report.t, distance(y.data()));
  out.d_min = d_min;
  out.d_max = d_max;
  out.verdict = out.report.ok() ? classify_pair(d_min, d_max, out.thresholds) : PairVerdict::Unresolved;
  return out;
}

double ScrambleResult::fraction(PairVerdict v) const {
  if (pairs.empty()) return 0.0;
  return static_cast<double>(histogram[static_cast<std::size_t>(v)]) / static_cast<double>(pairs.size());
}

ScrambleResult scrambled_sample(const DissipativeConfig& cfg, const TorusPoint& p,
                                const ScrambleOptions& options) {
  if (options.n_pairs == 0) throw std::invalid_argument("scrambled_sample: n_pairs must be >= 1");
  if (options.section_angles == 0) throw std::invalid_argument("scrambled_sample: no section angles");
  ScrambleResult out;
  out.seed = options.seed;
  out.thresholds = options.pair.thresholds.value_or(PairThresholds::from_r_rho(cfg.r_rho));
  const auto angles = projective_angles(options.section_angles);
  out.section = attractor_section(cfg, p, angles, options.pullback);

  const auto& betas = out.section.betas;
  out.empty_sample = std::all_of(betas.begin(), betas.end(), [&](const BetaEstimate& b) {
    return b.value <= options.degenerate_beta;
  });
  if (out.empty_sample) return out;

  // Draws happen up front, in order, so the sample is independent of threading.
  std::mt19937_64 rng(options.seed);
  const std::size_t m = angles.size();
  auto draw = [&]() {
    std::size_t idx = 0;
    do {
      idx = static_cast<std::size_t>(rng() % m);
    } while (betas[idx].value <= options.degenerate_beta);
    const double lift = (rng() & 1u) ? std::numbers::pi : 0.0;
    return PolarPoint{out.section.angles[idx] + lift, betas[idx].value * unit_interval(rng())};
  };
  std::vector<std::pair<PolarPoint, PolarPoint>> ics;
  ics.reserve(options.n_pairs);
  while (ics.size() < options.n_pairs) {
    PolarPoint a = draw(), b = draw();
    if (a.theta == b.theta && a.r == b.r) continue;
    ics.emplace_back(a, b);
  }

  PairOptions po = options.pair;
  po.thresholds = out.thresholds;
  out.pairs.resize(ics.size());
  parallel_for(
      ics.size(),
      [&](std::size_t i) { out.pairs[i] = pair_distance_track(cfg, p, ics[i].first, ics[i].second, po); },
      options.workers);
  for (const auto& d : out.pairs) ++out.histogram[static_cast<std::size_t>(d.verdict)];
  return out;
}

namespace {

// Interleaved (theta, log r~, q) with q' = r~^-2 = exp(-2 log r~).
struct DensityRhs {
  const OrbitCoefficients& coeffs;
  std::size_t count;
  void operator()(double t, const double* y, double* dy) const {
    const Mat2 A = coeffs.at(t);
    for (std::size_t i = 0; i < count; ++i) {
      const double* s = y + 3 * i;
      double* ds = dy + 3 * i;
      const PolarRates pr = polar_rates(A, s[0]);
      ds[0] = pr.f;
      ds[1] = -0.5 * pr.df;
      ds[2] = std::exp(-2.0 * s[1]);
    }
  }
};

}  // namespace

std::vector<double> density_fiber(const SystemFamily& fam, const TorusPoint& p,
                                  std::span<const double> thetas, double t,
                                  const StepControl& control) {
  if (!(t > 0.0)) throw std::invalid_argument("density_pt: t must be positive");
  const std::size_t n = thetas.size();
  const OrbitCoefficients coeffs(fam, p);
  std::vector<double> y(3 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) y[3 * i] = thetas[i];
  DensityRhs rhs{coeffs, n};
  const auto rep = integrate(rhs, 0.0, -t, std::span<double>(y), control);
  if (!rep.ok()) throw std::runtime_error(std::string("density_pt: ") + to_string(rep.status));
  std::vector<double> out(n);
  // q(-t) = int_0^{-t} = -int_{-t}^0
  for (std::size_t i = 0; i < n; ++i) out[i] = -y[3 * i + 2] / t;
  return out;
}

double density_point(const SystemFamily& fam, const TorusPoint& p, double theta, double t,
                     const StepControl& control) {
  const std::array<double, 1> th{theta};
  return density_fiber(fam, p, th, t, control).front();
}

DensityEstimate density_pt(const SystemFamily& fam, std::span<const TorusPoint> base_points,
                           std::span<const double> angles, double t, const StepControl& control) {
  DensityEstimate out;
  out.base_points.assign(base_points.begin(), base_points.end());
  for (double a : angles) out.angles.push_back(reduce_angle(a, std::numbers::pi));
  out.t = t;
  const std::size_t m = out.angles.size();
  out.values.resize(out.base_points.size() * m);
  parallel_for(out.base_points.size(), [&](std::size_t b) {
    const auto fiber = density_fiber(fam, out.base_points[b], out.angles, t, control);
    std::copy(fiber.begin(), fiber.end(), out.values.begin() + static_cast<std::ptrdiff_t>(b * m));
  });
  double sum = 0.0;
  for (double v : out.values) sum += v;
  out.mass = out.values.empty() ? 0.0 : sum / static_cast<double>(out.values.size());
  return out;
}

PrimitiveOscillation primitive_oscillation(const std::function<double(double)>& e_along_orbit,
                                           const TorusPoint& base, double horizon, double step) {
  if (!(horizon > 0.0) || !(step > 0.0)) {
    throw std::invalid_argument("primitive_oscillation: horizon and step must be positive");
  }
  PrimitiveOscillation out;
  out.base = base;
  out.horizon = horizon;
  const auto n = static_cast<std::size_t>(std::ceil(horizon / step));
  const double h = horizon / static_cast<double>(n);
  const auto fwd = cumulative_primitive(e_along_orbit, h, n);
  const auto bwd = cumulative_primitive(e_along_orbit, -h, n);
  for (std::size_t j = 0; j <= n; ++j) {
    const double t = h * static_cast<double>(j);
    if (fwd[j] > out.sup_fwd) out.sup_fwd = fwd[j], out.t_sup_fwd = t;
    if (fwd[j] < out.inf_fwd) out.inf_fwd = fwd[j], out.t_inf_fwd = t;
    if (bwd[j] > out.sup_bwd) out.sup_bwd = bwd[j], out.t_sup_bwd = -t;
    if (bwd[j] < out.inf_bwd) out.inf_bwd = bwd[j], out.t_inf_bwd = -t;
  }
  out.mean_estimate = (fwd.back() - bwd.back()) / (2.0 * horizon);
  return out;
}

PrimitiveOscillation primitive_oscillation(const TrigPoly& e, const Frequencies& freqs,
                                           const TorusPoint& base, double horizon, double step) {
  if (freqs.size() != base.dimension()) {
    throw std::invalid_argument("primitive_oscillation: dimension mismatch");
  }
  std::vector<double> phases(base.dimension());
  auto fn = [&](double s) {
    for (std::size_t i = 0; i < phases.size(); ++i) phases[i] = base[i] + freqs[i] * s;
    return e.eval(phases);
  };
  return primitive_oscillation(fn, base, horizon, step);
}

const char* to_string(PairVerdict v) {
  switch (v) {
    case PairVerdict::LiYorkeCandidate: return "LI_YORKE_CANDIDATE";
    case PairVerdict::DistalCandidate: return "DISTAL_CANDIDATE";
    case PairVerdict::AsymptoticCandidate: return "ASYMPTOTIC_CANDIDATE";
    case PairVerdict::Unresolved: return "UNRESOLVED";
  }
  return "?";
}

void write_pair_csv(std::ostream& os, const PairDiagnostics& pair, std::string_view metadata) {
  CsvWriter csv(os);
  if (!metadata.empty()) csv.comment(metadata);
  csv.header({"t", "d"});
  for (const auto& [t, d] : pair.track) {
    csv.cell(t).cell(d);
    csv.end_row();
  }
}

void write_pairs_summary_csv(std::ostream& os, const ScrambleResult& result,
                             std::string_view metadata) {
  CsvWriter csv(os);
  if (!metadata.empty()) csv.comment(metadata);
  csv.header({"pair", "theta1", "r1", "theta2", "r2", "d_min", "d_max", "verdict"});
  for (std::size_t i = 0; i < result.pairs.size(); ++i) {
    const auto& p = result.pairs[i];
    csv.cell(static_cast<double>(i)).cell(p.ic1.theta).cell(p.ic1.r).cell(p.ic2.theta).cell(p.ic2.r);
    csv.cell(p.d_min).cell(p.d_max).cell(to_string(p.verdict));
    csv.end_row();
  }
}

std::string scramble_summary_json(const ScrambleResult& result) {
  nlohmann::ordered_json j;
  j["pairs"] = result.pairs.size();
  j["empty_sample"] = result.empty_sample;
  nlohmann::ordered_json hist;
  for (std::size_t v = 0; v < kPairVerdictCount; ++v) {
    hist[to_string(static_cast<PairVerdict>(v))] = result.histogram[v];
  }
  j["histogram"] = hist;
  j["li_yorke_fraction"] = result.li_yorke_fraction();
  j["delta_low"] = result.thresholds.delta_low;
  j["delta_high"] = result.thresholds.delta_high;
  j["seed"] = result.seed;
  if (!result.pairs.empty()) {
    j["window_start"] = result.pairs.front().window_start;
    j["window_end"] = result.pairs.front().window_end;
  }
  return j.dump(2);
}

void write_density_csv(std::ostream& os, const DensityEstimate& density, std::string_view metadata) {
  CsvWriter csv(os);
  if (!metadata.empty()) csv.comment(metadata);
  const std::size_t dim = density.base_points.empty() ? 0 : density.base_points.front().dimension();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dim; ++i) names.push_back("phase" + std::to_string(i + 1));
  names.emplace_back("theta");
  names.emplace_back("p_t");
  csv.header(names);
  for (std::size_t b = 0; b < density.base_points.size(); ++b) {
    for (std::size_t a = 0; a < density.angles.size(); ++a) {
      for (double ph : density.base_points[b].phases()) csv.cell(ph);
      csv.cell(density.angles[a]).cell(density.at(b, a));
      csv.end_row();
    }
  }
}

}  // namespace skewflow
