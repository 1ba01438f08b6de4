#pragma once

// Base flow and coefficient family.
//
// The base space is a d-torus carrying the Kronecker flow
// phases(t) = phases(0) + freqs * t (mod 2pi). Matrix coefficients are finite
// trigonometric polynomials on the torus, so evaluating A along an orbit is
// evaluating a quasiperiodic function of time.

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "skewflow/linalg.hpp"

namespace skewflow {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce an angle into [0, period).
double reduce_angle(double theta, double period = kTwoPi);

class Frequencies {
 public:
  explicit Frequencies(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// Best rational approximation p/q (q <= max_denominator) of one frequency
/// ratio. Rational dependence breaks minimality of the base flow; this is
/// reported, never rejected.
struct RatioDiagnostic {
  std::size_t i{0};
  std::size_t j{0};
  double ratio{0.0};
  std::int64_t numerator{0};
  std::int64_t denominator{1};
  double residual{0.0};
  bool near_rational{false};
};

std::vector<RatioDiagnostic> frequency_ratio_diagnostics(
    const Frequencies& freqs, std::int64_t max_denominator = 1000,
    double rational_tol = 1e-9);

class TorusPoint {
 public:
  /// Phases are reduced into [0, 2pi) on construction.
  explicit TorusPoint(std::vector<double> phases);
  static TorusPoint origin(std::size_t dimension);

  std::size_t dimension() const { return phases_.size(); }
  std::span<const double> phases() const { return phases_; }
  double operator[](std::size_t i) const { return phases_[i]; }

 private:
  std::vector<double> phases_;
};

/// Kronecker flow: phases[i] + freqs[i] * t, reduced mod 2pi.
TorusPoint advance_base(const TorusPoint& p, const Frequencies& freqs, double t);

struct Harmonic {
  std::vector<int> k;
  double cos_coeff{0.0};
  double sin_coeff{0.0};
};

/// constant + sum_j cos_j cos(k_j . phi) + sin_j sin(k_j . phi).
///
/// Terms with k = 0 are folded into the constant, so `mean()` over the torus
/// is exactly `constant()`.
class TrigPoly {
 public:
  TrigPoly() = default;
  explicit TrigPoly(double constant, std::vector<Harmonic> terms = {});

  double constant() const { return constant_; }
  const std::vector<Harmonic>& terms() const { return terms_; }
  double mean() const { return constant_; }

  /// Largest multi-index length among the terms (0 for a constant).
  std::size_t dimension() const;

  double eval(std::span<const double> phases) const;

  /// Exact value of int_0^t P(phases + freqs * s) ds.
  double orbit_primitive(std::span<const double> phases,
                         std::span<const double> freqs, double t) const;

  /// constant + sum_j hypot(cos_j, sin_j); an upper bound for sup P.
  double upper_bound() const;
  /// |constant| + sum_j hypot(cos_j, sin_j); a bound for sup |P|.
  double abs_bound() const;

  TrigPoly scaled(double s) const;
  friend TrigPoly operator+(const TrigPoly& p, const TrigPoly& q);

 private:
  double constant_{0.0};
  std::vector<Harmonic> terms_;
};

struct CoefficientMatrix {
  TrigPoly a;
  TrigPoly b;
  TrigPoly c;
  TrigPoly d;

  Mat2 eval(std::span<const double> phases) const;
};

/// y' = (A(w.t) + epsilon I) y - k_rho(|y|) y over the Kronecker flow `freqs`.
class SystemFamily {
 public:
  SystemFamily(CoefficientMatrix matrix, Frequencies freqs, double epsilon,
               double rho);

  const CoefficientMatrix& matrix() const { return matrix_; }
  const Frequencies& frequencies() const { return freqs_; }
  double epsilon() const { return epsilon_; }
  double rho() const { return rho_; }
  std::size_t dimension() const { return freqs_.size(); }

  SystemFamily with_epsilon(double epsilon) const;

 private:
  CoefficientMatrix matrix_;
  Frequencies freqs_;
  double epsilon_;
  double rho_;
};

/// A(p) + epsilon I.
Mat2 eval_matrix(const SystemFamily& fam, const TorusPoint& p);
/// Half trace of A(p) + epsilon I.
double eval_e(const SystemFamily& fam, const TorusPoint& p);
/// Traceless part A^eps(p) - e(p) I.
Mat2 eval_tilde(const SystemFamily& fam, const TorusPoint& p);

/// Fast evaluation of t -> A^eps(origin . t).
///
/// All distinct harmonics of the four entries are merged, so one sin/cos pair
/// is evaluated per harmonic per call.
class OrbitCoefficients {
 public:
  OrbitCoefficients(const SystemFamily& fam, const TorusPoint& origin);

  Mat2 at(double t) const;
  double half_trace(double t) const { return 0.5 * at(t).trace(); }

 private:
  struct Mode {
    double phase0;
    double rate;
    Mat2 cos_part;
    Mat2 sin_part;
  };
  Mat2 constant_;
  std::vector<Mode> modes_;
};

}  // namespace skewflow
