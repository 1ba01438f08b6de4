#pragma once

// Right-hand sides shared by the integrators of several modules. Each takes
// the orbit coefficients as A(t) = A^eps(origin . t).

#include <cmath>
#include <cstddef>

#include "skewflow/cocycle.hpp"
#include "skewflow/driving.hpp"

namespace skewflow::detail {

inline double k_unchecked(double rho, double r) { return r > rho ? (r - rho) * (r - rho) : 0.0; }

/// (theta, log r) for the linear flow.
struct PolarLinearRhs {
  const OrbitCoefficients& coeffs;
  RadialRate rate{RadialRate::Full};

  void operator()(double t, const double* y, double* dy) const {
    const PolarRates pr = polar_rates(coeffs.at(t), y[0]);
    dy[0] = pr.f;
    dy[1] = rate == RadialRate::Full ? pr.g : -0.5 * pr.df;
  }
};

/// (theta, r_1..r_m) sharing one angle under the nonlinear radial equation.
struct RadialRhs {
  const OrbitCoefficients& coeffs;
  double rho;
  std::size_t radii;

  void operator()(double t, const double* y, double* dy) const {
    const PolarRates pr = polar_rates(coeffs.at(t), y[0]);
    dy[0] = pr.f;
    for (std::size_t i = 1; i <= radii; ++i) dy[i] = y[i] * (pr.g - k_unchecked(rho, y[i]));
  }
};

/// Angles only: m independent fibres over one base orbit.
struct AngleBatchRhs {
  const OrbitCoefficients& coeffs;
  std::size_t count;

  void operator()(double t, const double* y, double* dy) const {
    const Mat2 A = coeffs.at(t);
    for (std::size_t i = 0; i < count; ++i) dy[i] = polar_rates(A, y[i]).f;
  }
};

/// Interleaved (theta_i, r_i) pairs under the nonlinear radial equation.
struct RadialBatchRhs {
  const OrbitCoefficients& coeffs;
  double rho;
  std::size_t count;

  void operator()(double t, const double* y, double* dy) const {
    const Mat2 A = coeffs.at(t);
    for (std::size_t i = 0; i < count; ++i) {
      const PolarRates pr = polar_rates(A, y[2 * i]);
      const double r = y[2 * i + 1];
      dy[2 * i] = pr.f;
      dy[2 * i + 1] = r * (pr.g - k_unchecked(rho, r));
    }
  }
};

}  // namespace skewflow::detail
