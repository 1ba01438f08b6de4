#include "skewflow/cocycle.hpp"

#include <array>
#include <ostream>

#include "skewflow/csv.hpp"
#include "skewflow/detail/kernels.hpp"
#include "skewflow/detail/sampler.hpp"

namespace skewflow {

double f_angular(const Mat2& A, double theta) {
  const double s = std::sin(theta), c = std::cos(theta);
  return -A.c * s * s + A.b * c * c + (A.a - A.d) * s * c;
}

double g_radial(const Mat2& A, double theta) {
  const double s = std::sin(theta), c = std::cos(theta);
  return A.a * s * s + A.d * c * c + (A.b + A.c) * s * c;
}

double df_dtheta(const Mat2& A, double theta) {
  return -(A.b + A.c) * std::sin(2.0 * theta) + (A.a - A.d) * std::cos(2.0 * theta);
}

double f_angular(const SystemFamily& fam, const TorusPoint& p, double theta) {
  return f_angular(eval_matrix(fam, p), theta);
}

double g_radial(const SystemFamily& fam, const TorusPoint& p, double theta) {
  return g_radial(eval_matrix(fam, p), theta);
}

double df_dtheta(const SystemFamily& fam, const TorusPoint& p, double theta) {
  return df_dtheta(eval_matrix(fam, p), theta);
}

namespace {

PolarState make_polar(double t, double lift, double log_r) {
  return {t, reduce_angle(lift), lift, log_r};
}

}  // namespace

PolarTrajectory integrate_polar_linear(const SystemFamily& fam, const TorusPoint& p0, double theta0,
                                       double log_r0, double t_end, const TrajectoryOptions& options,
                                       RadialRate rate) {
  const OrbitCoefficients coeffs(fam, p0);
  detail::PolarLinearRhs rhs{coeffs, rate};
  PolarTrajectory out;
  out.samples.push_back(make_polar(0.0, theta0, log_r0));
  std::array<double, 2> y{theta0, log_r0};
  auto emit = [&](double t, std::span<const double> s) {
    out.samples.push_back(make_polar(t, s[0], s[1]));
  };
  detail::Sampler sampler(0.0, t_end, options.output_dt, 2, emit);
  out.report = integrate(rhs, 0.0, t_end, std::span<double>(y), options.control, sampler);
  if (out.samples.back().t != out.report.t) {
    out.samples.push_back(make_polar(out.report.t, y[0], y[1]));
  }
  return out;
}

namespace {

struct CocycleRhs {
  const OrbitCoefficients& coeffs;
  // y = (m00, m01, m10, m11), row-major.
  void operator()(double t, const double* y, double* dy) const {
    const Mat2 A = coeffs.at(t);
    dy[0] = A.a * y[0] + A.b * y[2];
    dy[1] = A.a * y[1] + A.b * y[3];
    dy[2] = A.c * y[0] + A.d * y[2];
    dy[3] = A.c * y[1] + A.d * y[3];
  }
};

}  // namespace

CocycleResult propagate_cocycle(const SystemFamily& fam, const TorusPoint& p0, double t_end,
                                const StepControl& control) {
  const OrbitCoefficients coeffs(fam, p0);
  CocycleRhs rhs{coeffs};
  CocycleResult out;
  // The ODE carries the current block B since the last restart; U = B * P.
  // Blocks are restarted before their singular values leave [0.5, 2], so
  // det B never suffers cancellation and log det accumulates block by block.
  Mat2 P = Mat2::identity();
  double log_det = 0.0;
  std::array<double, 4> y{1.0, 0.0, 0.0, 1.0};
  auto fold = [&](const Mat2& B) {
    log_det += std::log(std::abs(B.det()));
    P = B * P;
    const double norm = P.max_column_norm();
    P = (1.0 / norm) * P;
    out.state.log_scale += std::log(norm);
  };
  auto restart = [&](StepView& view) {
    auto s = view.state();
    const Mat2 B{s[0], s[1], s[2], s[3]};
    const double smax = B.operator_norm();
    const double smin = std::abs(B.det()) / smax;
    if (smax > 2.0 || smin < 0.5) {
      fold(B);
      s[0] = 1.0, s[1] = 0.0, s[2] = 0.0, s[3] = 1.0;
      ++out.renormalizations;
      view.mark_modified();
    }
    return StepAction::Continue;
  };
  out.report = integrate(rhs, 0.0, t_end, std::span<double>(y), control, restart);
  fold({y[0], y[1], y[2], y[3]});
  out.state.matrix = P;
  out.state.log_abs_det = log_det;
  return out;
}

std::vector<PlanarSample> reconstruct_cartesian(const PolarTrajectory& traj) {
  std::vector<PlanarSample> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    const double r = std::exp(s.log_r);
    out.push_back({s.t, {r * std::sin(s.lift), r * std::cos(s.lift)}});
  }
  return out;
}

namespace {

struct CartesianLinearRhs {
  const OrbitCoefficients& coeffs;
  void operator()(double t, const double* y, double* dy) const {
    const Mat2 A = coeffs.at(t);
    dy[0] = A.a * y[0] + A.b * y[1];
    dy[1] = A.c * y[0] + A.d * y[1];
  }
};

}  // namespace

std::vector<PlanarSample> integrate_linear_cartesian(const SystemFamily& fam, const TorusPoint& p0,
                                                     Vec2 y0, double t_end,
                                                     const TrajectoryOptions& options) {
  const OrbitCoefficients coeffs(fam, p0);
  CartesianLinearRhs rhs{coeffs};
  std::vector<PlanarSample> out{{0.0, y0}};
  std::array<double, 2> y{y0.x, y0.y};
  auto emit = [&](double t, std::span<const double> s) { out.push_back({t, {s[0], s[1]}}); };
  detail::Sampler sampler(0.0, t_end, options.output_dt, 2, emit);
  const auto rep = integrate(rhs, 0.0, t_end, std::span<double>(y), options.control, sampler);
  if (out.back().t != rep.t) out.push_back({rep.t, {y[0], y[1]}});
  return out;
}

void write_trajectory_csv(std::ostream& os, const PolarTrajectory& traj, std::string_view metadata) {
  CsvWriter csv(os);
  if (!metadata.empty()) csv.comment(metadata);
  csv.header({"t", "theta_reduced", "lift", "log_r", "y1", "y2"});
  for (const auto& s : traj.samples) {
    const double r = std::exp(s.log_r);
    csv.cell(s.t).cell(s.theta).cell(s.lift).cell(s.log_r);
    csv.cell(r * std::sin(s.lift)).cell(r * std::cos(s.lift));
    csv.end_row();
  }
}

}  // namespace skewflow
