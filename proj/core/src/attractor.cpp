#include "skewflow/attractor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "skewflow/csv.hpp"
#include "skewflow/detail/kernels.hpp"
#include "skewflow/parallel.hpp"

namespace skewflow {

std::string BetaEstimate::flags() const {
  if (converged && !non_monotone) return "ok";
  std::string out;
  if (!converged) out = "unconverged";
  if (non_monotone) out += out.empty() ? "non-monotone" : "|non-monotone";
  return out;
}

namespace {

void check_schedule(const std::vector<double>& schedule) {
  if (schedule.empty()) throw std::invalid_argument("pullback: empty horizon schedule");
  double prev = 0.0;
  for (double t : schedule) {
    if (!(t > prev)) throw std::invalid_argument("pullback: schedule must be positive and strictly increasing");
    prev = t;
  }
}

void require_ok(const IntegrationReport& rep, const char* what) {
  if (!rep.ok()) throw std::runtime_error(std::string(what) + ": " + to_string(rep.status));
}

// Backward angle paths sampled at t_j = -j * spacing, with f at each node for
// cubic Hermite reconstruction. The forward radial pass reads the angle from
// this path, so every horizon sees the same fibre trajectory ending at theta.
struct AnglePaths {
  double spacing;
  std::vector<std::vector<double>> theta;  // per angle
  std::vector<std::vector<double>> rate;   // f at the nodes

  std::size_t nodes() const { return theta.empty() ? 0 : theta.front().size(); }
};

struct PathRadialRhs {
  const OrbitCoefficients& coeffs;
  double rho;
  const AnglePaths& paths;

  void operator()(double t, const double* y, double* dy) const {
    const Mat2 A = coeffs.at(t);
    const double s = -t / paths.spacing;
    const auto last = static_cast<double>(paths.nodes() - 2);
    const double js = std::clamp(std::floor(s), 0.0, last);
    const auto j = static_cast<std::size_t>(js);
    const double u = s - js;
    const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    const double h10 = u * (1.0 - u) * (1.0 - u);
    const double h01 = u * u * (3.0 - 2.0 * u);
    const double h11 = u * u * (u - 1.0);
    const double ds = -paths.spacing;  // dt per unit s
    for (std::size_t i = 0; i < paths.theta.size(); ++i) {
      const auto& th = paths.theta[i];
      const auto& fr = paths.rate[i];
      const double theta = h00 * th[j] + h10 * ds * fr[j] + h01 * th[j + 1] + h11 * ds * fr[j + 1];
      const double g = polar_rates(A, theta).g;
      dy[i] = y[i] * (g - detail::k_unchecked(rho, y[i]));
    }
  }
};

}  // namespace

std::vector<BetaEstimate> pullback_fiber(const DissipativeConfig& cfg, const TorusPoint& p,
                                         std::span<const double> thetas,
                                         const PullbackSettings& settings) {
  check_schedule(settings.schedule);
  if (!(settings.path_spacing > 0.0)) throw std::invalid_argument("pullback: path spacing must be positive");
  const SystemFamily& fam = cfg.family;
  const double r_rho = cfg.r_rho;
  const double floor = 10.0 * (settings.control.abs_tol + settings.control.rel_tol * r_rho);
  const double dt = settings.path_spacing;
  const OrbitCoefficients coeffs(fam, p);

  std::vector<BetaEstimate> out(thetas.size());
  std::vector<std::size_t> active(thetas.size());
  std::vector<double> back(thetas.size());
  AnglePaths paths{dt, {}, {}};
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    active[i] = i;
    back[i] = reduce_angle(thetas[i], std::numbers::pi);
    paths.theta.push_back({back[i]});
    paths.rate.push_back({polar_rates(coeffs.at(0.0), back[i]).f});
  }

  std::vector<double> buf, y;
  std::size_t reached = 0;  // node index of the backward continuation point
  for (double T : settings.schedule) {
    if (active.empty()) break;
    const std::size_t n = active.size();
    const auto target = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    if (target > reached) {
      detail::AngleBatchRhs angle_rhs{coeffs, n};
      buf.resize(n);
      std::size_t next = reached + 1;
      auto record = [&](StepView& view) {
        while (next <= target) {
          const double tn = -dt * static_cast<double>(next);
          if (tn < view.t() - 1e-12 * std::max(1.0, std::abs(tn))) break;
          view.dense(tn, buf);
          const Mat2 A = coeffs.at(tn);
          for (std::size_t i = 0; i < n; ++i) {
            paths.theta[i].push_back(buf[i]);
            paths.rate[i].push_back(polar_rates(A, buf[i]).f);
          }
          ++next;
        }
        return StepAction::Continue;
      };
      require_ok(integrate(angle_rhs, -dt * static_cast<double>(reached), -dt * static_cast<double>(target),
                           std::span<double>(back.data(), n), settings.control, record),
                 "pullback backward angles");
      // the final node is the end state itself
      while (next <= target) {
        const double tn = -dt * static_cast<double>(next);
        const Mat2 A = coeffs.at(tn);
        for (std::size_t i = 0; i < n; ++i) {
          paths.theta[i].push_back(back[i]);
          paths.rate[i].push_back(polar_rates(A, back[i]).f);
        }
        ++next;
      }
      reached = target;
    }

    y.assign(n, r_rho);
    PathRadialRhs radial_rhs{coeffs, fam.rho(), paths};
    require_ok(integrate(radial_rhs, -T, 0.0, std::span<double>(y), settings.control),
               "pullback forward radii");

    std::size_t kept = 0;
    for (std::size_t i = 0; i < n; ++i) {
      BetaEstimate& est = out[active[i]];
      const double v = y[i];
      est.sequence.push_back(v);
      est.value = v;
      est.horizon = T;
      bool done = false;
      if (est.sequence.size() >= 2) {
        const double dec = est.sequence[est.sequence.size() - 2] - v;
        if (dec < -settings.monotone_slack) est.non_monotone = true;
        est.residual = std::max(std::abs(dec), floor);
        done = std::abs(dec) < settings.convergence_tol;
      } else {
        est.residual = std::max(r_rho - v, floor);
      }
      est.converged = done;
      if (!done) {
        active[kept] = active[i];
        back[kept] = back[i];
        if (kept != i) {
          paths.theta[kept] = std::move(paths.theta[i]);
          paths.rate[kept] = std::move(paths.rate[i]);
        }
        ++kept;
      }
    }
    active.resize(kept);
    paths.theta.resize(kept);
    paths.rate.resize(kept);
  }
  return out;
}

BetaEstimate pullback_beta(const DissipativeConfig& cfg, const TorusPoint& p, double theta,
                           const PullbackSettings& settings) {
  const std::array<double, 1> th{theta};
  return pullback_fiber(cfg, p, th, settings).front();
}

std::vector<double> equilibrium_residuals(const DissipativeConfig& cfg, const TorusPoint& p,
                                          std::span<const double> thetas,
                                          std::span<const double> beta_values, double t_check,
                                          const PullbackSettings& settings) {
  if (thetas.size() != beta_values.size()) {
    throw std::invalid_argument("equilibrium_residuals: size mismatch");
  }
  const std::size_t n = thetas.size();
  const OrbitCoefficients coeffs(cfg.family, p);
  std::vector<double> y(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    y[2 * i] = thetas[i];
    y[2 * i + 1] = beta_values[i];
  }
  detail::RadialBatchRhs rhs{coeffs, cfg.family.rho(), n};
  require_ok(integrate(rhs, 0.0, t_check, std::span<double>(y), settings.control),
             "equilibrium_residual forward");
  const TorusPoint advanced = advance_base(p, cfg.family.frequencies(), t_check);
  std::vector<double> moved(n);
  for (std::size_t i = 0; i < n; ++i) moved[i] = y[2 * i];
  const auto betas = pullback_fiber(cfg, advanced, moved, settings);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::abs(betas[i].value - y[2 * i + 1]);
  return out;
}

double equilibrium_residual(const DissipativeConfig& cfg, const TorusPoint& p, double theta,
                            double beta_value, double t_check, const PullbackSettings& settings) {
  const std::array<double, 1> th{theta}, b{beta_value};
  return equilibrium_residuals(cfg, p, th, b, t_check, settings).front();
}

BoundedPastResult bounded_past_test(const SystemFamily& fam, const TorusPoint& p, double theta,
                                    double horizon, double escape_threshold,
                                    const StepControl& control) {
  if (!(horizon > 0.0)) throw std::invalid_argument("bounded_past_test: horizon must be positive");
  const OrbitCoefficients coeffs(fam, p);
  detail::PolarLinearRhs rhs{coeffs, RadialRate::Full};
  const double log_threshold = std::log(escape_threshold);
  BoundedPastResult out;
  double max_log = 0.0;
  std::array<double, 2> y{theta, 0.0};
  auto observer = [&](StepView& view) {
    const double lr = view.state()[1];
    max_log = std::max(max_log, lr);
    if (lr > log_threshold) {
      out.verdict = PastVerdict::Unbounded;
      // linear interpolation of log r inside the step
      const double l0 = view.prev_state()[1];
      const double w = (log_threshold - l0) / (lr - l0);
      out.crossing_time = view.t_prev() + w * (view.t() - view.t_prev());
      return StepAction::Stop;
    }
    return StepAction::Continue;
  };
  const auto rep = integrate(rhs, 0.0, -horizon, std::span<double>(y), control, observer);
  out.integration_ok = rep.ok();
  out.sup_value = std::exp(max_log);
  return out;
}

AlphaEstimate alpha_sup(const SystemFamily& fam, const TorusPoint& p, double theta, double horizon,
                        const StepControl& control) {
  if (!(horizon > 0.0)) throw std::invalid_argument("alpha_sup: horizon must be positive");
  const OrbitCoefficients coeffs(fam, p);
  detail::PolarLinearRhs rhs{coeffs, RadialRate::Full};
  AlphaEstimate out;
  auto observer = [&](StepView& view) {
    const double lr = view.state()[1];
    if (lr > out.log_alpha) {
      out.log_alpha = lr;
      out.argmax_time = view.t();
    }
    return StepAction::Continue;
  };
  for (double end : {horizon, -horizon}) {
    std::array<double, 2> y{theta, 0.0};
    integrate(rhs, 0.0, end, std::span<double>(y), control, observer);
  }
  out.alpha = std::exp(out.log_alpha);
  return out;
}

std::vector<double> projective_angles(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  }
  return out;
}

AttractorSection attractor_section(const DissipativeConfig& cfg, const TorusPoint& p,
                                   std::span<const double> angles,
                                   const PullbackSettings& settings) {
  AttractorSection out{p, {}, {}};
  out.angles.reserve(angles.size());
  for (double a : angles) out.angles.push_back(reduce_angle(a, std::numbers::pi));
  out.betas = pullback_fiber(cfg, p, out.angles, settings);
  return out;
}

void write_section_csv(std::ostream& os, const AttractorSection& section,
                       std::string_view metadata) {
  CsvWriter csv(os);
  if (!metadata.empty()) csv.comment(metadata);
  csv.header({"theta", "beta"});
  for (double shift : {0.0, std::numbers::pi}) {
    for (std::size_t i = 0; i < section.angles.size(); ++i) {
      csv.cell(section.angles[i] + shift).cell(section.betas[i].value);
      csv.end_row();
    }
  }
}

std::vector<TorusPoint> torus_grid(std::size_t dim, std::size_t n) {
  if (dim == 0 || n == 0) throw std::invalid_argument("torus_grid: empty grid");
  std::vector<TorusPoint> out;
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> phases(dim);
  while (true) {
    for (std::size_t i = 0; i < dim; ++i) {
      phases[i] = kTwoPi * static_cast<double>(idx[i]) / static_cast<double>(n);
    }
    out.emplace_back(phases);
    std::size_t i = dim;
    while (i > 0 && ++idx[i - 1] == n) idx[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

double BetaGrid::min_value() const {
  double m = values.empty() ? 0.0 : values.front().value;
  for (const auto& v : values) m = std::min(m, v.value);
  return m;
}

double BetaGrid::max_value() const {
  double m = values.empty() ? 0.0 : values.front().value;
  for (const auto& v : values) m = std::max(m, v.value);
  return m;
}

BetaGrid compute_beta_grid(const DissipativeConfig& cfg, std::span<const TorusPoint> base_points,
                           std::span<const double> angles, const PullbackSettings& settings) {
  BetaGrid grid;
  grid.base_points.assign(base_points.begin(), base_points.end());
  for (double a : angles) grid.angles.push_back(reduce_angle(a, std::numbers::pi));
  grid.r_rho = cfg.r_rho;
  grid.values.resize(grid.base_points.size() * grid.angles.size());
  const std::size_t m = grid.angles.size();
  parallel_for(grid.base_points.size(), [&](std::size_t b) {
    auto fiber = pullback_fiber(cfg, grid.base_points[b], grid.angles, settings);
    std::move(fiber.begin(), fiber.end(), grid.values.begin() + static_cast<std::ptrdiff_t>(b * m));
  });
  return grid;
}

void write_beta_grid_csv(std::ostream& os, const BetaGrid& grid, std::string_view metadata) {
  CsvWriter csv(os);
  if (!metadata.empty()) csv.comment(metadata);
  const std::size_t dim = grid.base_points.empty() ? 0 : grid.base_points.front().dimension();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dim; ++i) names.push_back("phase" + std::to_string(i + 1));
  for (const char* n : {"theta", "beta", "residual", "horizon", "flags"}) names.emplace_back(n);
  csv.header(names);
  for (std::size_t b = 0; b < grid.base_points.size(); ++b) {
    for (std::size_t a = 0; a < grid.angles.size(); ++a) {
      const auto& est = grid.at(b, a);
      for (double ph : grid.base_points[b].phases()) csv.cell(ph);
      csv.cell(grid.angles[a]).cell(est.value).cell(est.residual).cell(est.horizon).cell(est.flags());
      csv.end_row();
    }
  }
}

FiberClassification classify_fiber(const SystemFamily& fam, const TorusPoint& p,
                                   std::span<const double> angles, double horizon,
                                   double escape_threshold, const StepControl& control) {
  FiberClassification out;
  for (double a : angles) {
    const auto r = bounded_past_test(fam, p, a, horizon, escape_threshold, control);
    (r.verdict == PastVerdict::Bounded ? out.bounded : out.unbounded)++;
  }
  if (out.unbounded == 0) {
    out.label = FiberClass::OmegaPlus;
  } else if (out.bounded <= 1) {
    out.label = FiberClass::OmegaZero;
  }
  return out;
}

const char* to_string(PastVerdict v) {
  return v == PastVerdict::Bounded ? "BOUNDED" : "UNBOUNDED";
}

const char* to_string(FiberClass c) {
  switch (c) {
    case FiberClass::OmegaPlus: return "OMEGA_PLUS";
    case FiberClass::OmegaZero: return "OMEGA_ZERO";
    case FiberClass::Mixed: return "MIXED";
  }
  return "?";
}

}  // namespace skewflow
