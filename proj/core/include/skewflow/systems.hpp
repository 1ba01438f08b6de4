#pragma once

// Reference systems with closed-form behaviour, all with rho = 0.5 unless noted.

#include <cstddef>

#include "skewflow/driving.hpp"

namespace skewflow::systems {

/// [eps 1; -1 eps]: the autonomous Hopf pattern (one-dimensional torus, no forcing).
SystemFamily autonomous_hopf(double epsilon, double rho = 0.5);

/// [eps b; -b eps] with b = cos(phi1) + sin(phi2), frequencies (1, sqrt 2).
SystemFamily quasiperiodic(double epsilon, double rho = 0.5);

/// As `quasiperiodic` with b = 0.5 + cos(phi1) + sin(phi2), rotation number 0.5.
SystemFamily quasiperiodic_rotating(double epsilon, double rho = 0.5);

/// Truncated limit-periodic trace candidate e_N = sum_{k=1..N} 2^-k cos(phi_k)
/// on the N-torus with frequencies 3^-k.
struct TraceCandidate {
  Frequencies freqs;
  TrigPoly e;
};
TraceCandidate limit_periodic_trace(std::size_t terms);

/// A = diag(3e/2, e/2) + eps I: traceless part diag(e/2, -e/2) plus e I.
/// Its fundamental matrix is diag(exp int 3e/2, exp int e/2).
SystemFamily diagonal_weakly_elliptic(const TraceCandidate& trace, double epsilon = 0.0,
                                      double rho = 0.5);

/// Constant matrix family on a one-dimensional torus.
SystemFamily constant(const Mat2& A, double epsilon = 0.0, double rho = 0.5);

}  // namespace skewflow::systems
