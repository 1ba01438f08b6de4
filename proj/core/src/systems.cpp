#include "skewflow/systems.hpp"

#include <cmath>
#include <numbers>

namespace skewflow::systems {

SystemFamily constant(const Mat2& A, double epsilon, double rho) {
  CoefficientMatrix m{TrigPoly(A.a), TrigPoly(A.b), TrigPoly(A.c), TrigPoly(A.d)};
  return SystemFamily(std::move(m), Frequencies({1.0}), epsilon, rho);
}

SystemFamily autonomous_hopf(double epsilon, double rho) {
  return constant({0.0, 1.0, -1.0, 0.0}, epsilon, rho);
}

namespace {

SystemFamily rotating_forcing(double mean, double epsilon, double rho) {
  const TrigPoly b(mean, {{{1, 0}, 1.0, 0.0}, {{0, 1}, 0.0, 1.0}});
  CoefficientMatrix m{TrigPoly(0.0), b, b.scaled(-1.0), TrigPoly(0.0)};
  return SystemFamily(std::move(m), Frequencies({1.0, std::numbers::sqrt2}), epsilon, rho);
}

}  // namespace

SystemFamily quasiperiodic(double epsilon, double rho) { return rotating_forcing(0.0, epsilon, rho); }

SystemFamily quasiperiodic_rotating(double epsilon, double rho) {
  return rotating_forcing(0.5, epsilon, rho);
}

TraceCandidate limit_periodic_trace(std::size_t terms) {
  std::vector<double> freqs;
  std::vector<Harmonic> harmonics;
  for (std::size_t k = 1; k <= terms; ++k) {
    freqs.push_back(std::pow(3.0, -static_cast<double>(k)));
    std::vector<int> idx(terms, 0);
    idx[k - 1] = 1;
    harmonics.push_back({std::move(idx), std::pow(2.0, -static_cast<double>(k)), 0.0});
  }
  return {Frequencies(std::move(freqs)), TrigPoly(0.0, std::move(harmonics))};
}

SystemFamily diagonal_weakly_elliptic(const TraceCandidate& trace, double epsilon, double rho) {
  CoefficientMatrix m{trace.e.scaled(1.5), TrigPoly(0.0), TrigPoly(0.0), trace.e.scaled(0.5)};
  return SystemFamily(std::move(m), trace.freqs, epsilon, rho);
}

}  // namespace skewflow::systems
