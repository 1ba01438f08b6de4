#include "skewflow/nonlinear.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "skewflow/csv.hpp"
#include "skewflow/detail/kernels.hpp"
#include "skewflow/detail/sampler.hpp"

namespace skewflow {

double k_rho(double rho, double r) {
  if (!(r >= 0.0)) throw std::domain_error("k_rho: radius must be nonnegative");
  return r <= rho ? 0.0 : (r - rho) * (r - rho);
}

double k_rho_derivative(double rho, double r) {
  if (!(r >= 0.0)) throw std::domain_error("k_rho: radius must be nonnegative");
  return r <= rho ? 0.0 : 2.0 * (r - rho);
}

namespace {

using detail::k_unchecked;
using detail::RadialRhs;

double sym_top_eigenvalue(const Mat2& A) {
  const double half_diff = 0.5 * (A.a - A.d);
  const double off = 0.5 * (A.b + A.c);
  return 0.5 * (A.a + A.d) + std::hypot(half_diff, off);
}

std::size_t grid_size(std::size_t n, std::size_t dim, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    if (total > cap / std::max<std::size_t>(n, 1)) return cap + 1;
    total *= n;
  }
  return total;
}

}  // namespace

double max_g_on_grid(const SystemFamily& fam, std::size_t n) {
  const std::size_t dim = fam.dimension();
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> phases(dim, 0.0);
  double best = -std::numeric_limits<double>::infinity();
  const Mat2 shift = Mat2::scalar(fam.epsilon());
  while (true) {
    for (std::size_t i = 0; i < dim; ++i) phases[i] = kTwoPi * static_cast<double>(idx[i]) / static_cast<double>(n);
    const double g = sym_top_eigenvalue(fam.matrix().eval(phases) + shift);
    if (!std::isfinite(g)) throw std::runtime_error("compute_r_rho: non-finite g sample");
    best = std::max(best, g);
    std::size_t i = 0;
    while (i < dim && ++idx[i] == n) idx[i++] = 0;
    if (i == dim) break;
  }
  return best;
}

namespace {

// Top grid points by g, then a compass search from each; returns the best
// local maximum found.
double polished_max_g(const SystemFamily& fam, std::size_t n, std::size_t starts = 8) {
  const std::size_t dim = fam.dimension();
  const Mat2 shift = Mat2::scalar(fam.epsilon());
  auto g_at = [&](const std::vector<double>& ph) { return sym_top_eigenvalue(fam.matrix().eval(ph) + shift); };

  std::vector<std::pair<double, std::vector<double>>> best;
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> phases(dim, 0.0);
  while (true) {
    for (std::size_t i = 0; i < dim; ++i) phases[i] = kTwoPi * static_cast<double>(idx[i]) / static_cast<double>(n);
    const double g = g_at(phases);
    if (!std::isfinite(g)) throw std::runtime_error("compute_r_rho: non-finite g sample");
    if (best.size() < starts || g > best.back().first) {
      if (best.size() == starts) best.pop_back();
      auto pos = std::find_if(best.begin(), best.end(), [&](const auto& b) { return b.first < g; });
      best.insert(pos, {g, phases});
    }
    std::size_t i = 0;
    while (i < dim && ++idx[i] == n) idx[i++] = 0;
    if (i == dim) break;
  }

  double top = best.front().first;
  for (auto& [g, x] : best) {
    double step = kTwoPi / static_cast<double>(n);
    while (step > 1e-10) {
      bool moved = false;
      for (std::size_t i = 0; i < dim && !moved; ++i) {
        for (double sgn : {1.0, -1.0}) {
          x[i] += sgn * step;
          const double v = g_at(x);
          if (v > g) {
            g = v;
            moved = true;
            break;
          }
          x[i] -= sgn * step;
        }
      }
      if (!moved) step *= 0.5;
    }
    top = std::max(top, g);
  }
  return top;
}

}  // namespace

double g_upper_bound(const SystemFamily& fam) {
  const auto& m = fam.matrix();
  const TrigPoly half_trace = (m.a + m.d).scaled(0.5);
  const TrigPoly half_diff = (m.a + m.d.scaled(-1.0)).scaled(0.5);
  const TrigPoly half_off = (m.b + m.c).scaled(0.5);
  return half_trace.upper_bound() + fam.epsilon() +
         std::hypot(half_diff.abs_bound(), half_off.abs_bound());
}

namespace {

double r_rho_from(double rho, double g_max, double delta) {
  return rho + std::sqrt(std::max(g_max + delta, 0.0));
}

}  // namespace

double compute_r_rho(const SystemFamily& fam, double delta, const RadiusSampling& sampling) {
  return make_dissipative(fam, delta, sampling).r_rho;
}

DissipativeConfig make_dissipative(const SystemFamily& fam, double delta,
                                   const RadiusSampling& sampling) {
  if (!(delta > 0.0)) throw std::invalid_argument("dissipativity margin delta must be positive");
  DissipativeConfig cfg{fam, delta};
  const std::size_t dim = fam.dimension();
  const std::size_t n = std::max<std::size_t>(sampling.points_per_dim, 1);
  if (grid_size(n, dim, sampling.max_grid_points) > sampling.max_grid_points) {
    cfg.grid_based = false;
    cfg.g_max = g_upper_bound(fam);
    cfg.r_rho = r_rho_from(fam.rho(), cfg.g_max, delta);
    cfg.verified = true;
    cfg.verify_margin = cfg.g_max - k_rho(fam.rho(), cfg.r_rho) + delta;
    return cfg;
  }
  cfg.g_max = polished_max_g(fam, n);
  cfg.r_rho = r_rho_from(fam.rho(), cfg.g_max, delta);

  const std::size_t fine = n * std::max<std::size_t>(sampling.refine, 1);
  if (grid_size(fine, dim, 64 * sampling.max_grid_points) > 64 * sampling.max_grid_points) {
    cfg.verified = false;
    cfg.verify_margin = std::numeric_limits<double>::quiet_NaN();
    return cfg;
  }
  const double g_fine = max_g_on_grid(fam, fine);
  cfg.verify_margin = g_fine - k_rho(fam.rho(), cfg.r_rho) + delta;
  // k_rho(r_rho) = max(G + delta, 0), so the margin is <= 0 whenever the
  // finer grid finds nothing above G (up to rounding).
  cfg.verified = cfg.verify_margin <= 1e-12;
  if (!cfg.verified) {
    cfg.g_max = g_fine;
    cfg.r_rho = r_rho_from(fam.rho(), g_fine, delta);
  }
  return cfg;
}

namespace {

bool blow_up(const IntegrationReport& rep, double radius, const NonlinearOptions& options) {
  return rep.status == IntegrationStatus::StepUnderflow && radius > std::sqrt(options.escape_radius);
}

template <class Sample, class Norm>
std::optional<double> absorption_time(const std::vector<Sample>& samples, double radius, Norm norm) {
  // Earliest sample time from which the run stays inside `radius`.
  std::optional<double> out;
  for (auto it = samples.rbegin(); it != samples.rend(); ++it) {
    if (norm(*it) > radius) break;
    out = it->t;
  }
  return out;
}

}  // namespace

RadialTrajectory integrate_radial_nonlinear(const SystemFamily& fam, const TorusPoint& p0,
                                            double theta0, double r0, double t_end,
                                            const NonlinearOptions& options) {
  if (!(r0 >= 0.0)) throw std::domain_error("integrate_radial_nonlinear: r0 must be nonnegative");
  const OrbitCoefficients coeffs(fam, p0);
  RadialRhs rhs{coeffs, fam.rho(), 1};
  RadialTrajectory out;
  out.samples.push_back({0.0, theta0, r0});
  std::array<double, 2> y{theta0, r0};
  auto emit = [&](double t, std::span<const double> s) { out.samples.push_back({t, s[0], s[1]}); };
  detail::Sampler sampler(0.0, t_end, options.trajectory.output_dt, 2, emit);
  auto observer = [&](StepView& view) {
    sampler(view);
    if (std::abs(view.state()[1]) > options.escape_radius) {
      out.escaped = true;
      out.escape_time = view.t();
      return StepAction::Stop;
    }
    return StepAction::Continue;
  };
  out.report = integrate(rhs, 0.0, t_end, std::span<double>(y), options.trajectory.control, observer);
  if (!out.escaped && blow_up(out.report, std::abs(y[1]), options)) {
    out.escaped = true;
    out.escape_time = out.report.t;
  }
  if (out.samples.back().t != out.report.t) out.samples.push_back({out.report.t, y[0], y[1]});
  if (options.absorb_radius) {
    out.absorption_time = absorption_time(out.samples, *options.absorb_radius,
                                          [](const RadialSample& s) { return s.r; });
  }
  return out;
}

std::vector<double> radial_flow(const SystemFamily& fam, const TorusPoint& p0, double theta0,
                                std::span<const double> r0, double t_end,
                                const StepControl& control) {
  for (double r : r0) {
    if (!(r >= 0.0)) throw std::domain_error("radial_flow: radii must be nonnegative");
  }
  const OrbitCoefficients coeffs(fam, p0);
  RadialRhs rhs{coeffs, fam.rho(), r0.size()};
  std::vector<double> y(r0.size() + 1);
  y[0] = theta0;
  std::copy(r0.begin(), r0.end(), y.begin() + 1);
  const auto rep = integrate(rhs, 0.0, t_end, std::span<double>(y), control);
  if (!rep.ok()) throw std::runtime_error(std::string("radial_flow: ") + to_string(rep.status));
  return {y.begin() + 1, y.end()};
}

namespace {

struct FullRhs {
  const OrbitCoefficients& coeffs;
  double rho;
  void operator()(double t, const double* y, double* dy) const {
    const Mat2 A = coeffs.at(t);
    const double k = k_unchecked(rho, std::hypot(y[0], y[1]));
    dy[0] = A.a * y[0] + A.b * y[1] - k * y[0];
    dy[1] = A.c * y[0] + A.d * y[1] - k * y[1];
  }
};

}  // namespace

PlanarTrajectory integrate_full(const SystemFamily& fam, const TorusPoint& p0, Vec2 y0,
                                double t_end, const NonlinearOptions& options) {
  const OrbitCoefficients coeffs(fam, p0);
  FullRhs rhs{coeffs, fam.rho()};
  PlanarTrajectory out;
  out.samples.push_back({0.0, y0});
  std::array<double, 2> y{y0.x, y0.y};
  auto emit = [&](double t, std::span<const double> s) { out.samples.push_back({t, {s[0], s[1]}}); };
  detail::Sampler sampler(0.0, t_end, options.trajectory.output_dt, 2, emit);
  auto observer = [&](StepView& view) {
    sampler(view);
    const auto s = view.state();
    if (std::hypot(s[0], s[1]) > options.escape_radius) {
      out.escaped = true;
      out.escape_time = view.t();
      return StepAction::Stop;
    }
    return StepAction::Continue;
  };
  out.report = integrate(rhs, 0.0, t_end, std::span<double>(y), options.trajectory.control, observer);
  if (!out.escaped && blow_up(out.report, std::hypot(y[0], y[1]), options)) {
    out.escaped = true;
    out.escape_time = out.report.t;
  }
  if (out.samples.back().t != out.report.t) out.samples.push_back({out.report.t, {y[0], y[1]}});
  if (options.absorb_radius) {
    out.absorption_time = absorption_time(out.samples, *options.absorb_radius,
                                          [](const PlanarSample& s) { return s.y.norm(); });
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const PlanarTrajectory& traj, std::string_view metadata) {
  CsvWriter csv(os);
  if (!metadata.empty()) csv.comment(metadata);
  csv.header({"t", "theta_reduced", "lift", "log_r", "y1", "y2"});
  // The lift is recovered by unwrapping consecutive angles.
  double lift = 0.0;
  bool first = true;
  for (const auto& s : traj.samples) {
    const double r = s.y.norm();
    const double angle = std::atan2(s.y.x, s.y.y);  // y = r (sin, cos)
    if (first) {
      lift = angle;
      first = false;
    } else {
      double delta = angle - reduce_angle(lift);
      delta = std::remainder(delta, kTwoPi);
      lift += delta;
    }
    csv.cell(s.t).cell(reduce_angle(lift)).cell(lift).cell(r > 0.0 ? std::log(r) : -INFINITY);
    csv.cell(s.y.x).cell(s.y.y);
    csv.end_row();
  }
}

std::string run_summary_json(const IntegrationReport& report, bool escaped, double escape_time,
                             std::optional<double> absorption_time) {
  nlohmann::ordered_json j;
  j["status"] = to_string(report.status);
  j["t_final"] = report.t;
  j["accepted_steps"] = report.accepted;
  j["rejected_steps"] = report.rejected;
  j["escaped"] = escaped;
  j["escape_time"] = escaped ? nlohmann::ordered_json(escape_time) : nlohmann::ordered_json(nullptr);
  j["absorption_time"] =
      absorption_time ? nlohmann::ordered_json(*absorption_time) : nlohmann::ordered_json(nullptr);
  return j.dump(2);
}

}  // namespace skewflow
