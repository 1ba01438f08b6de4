#pragma once

// Composite Gauss-Legendre quadrature along orbits. Used wherever an orbit
// integral must be computed independently of the ODE integrator (trace
// integrals for the determinant identity, primitives of the trace function).

#include <cstddef>
#include <functional>
#include <vector>

namespace skewflow {

/// int_a^b fn(s) ds with 8-point Gauss-Legendre on panels of width <= panel.
/// Works for b < a (returns the signed integral).
double orbit_integral(const std::function<double(double)>& fn, double a, double b,
                      double panel = 0.5);

/// Running primitive H(t) = int_0^t fn on the grid t_j = j * step (j = 0..n),
/// sign(step) giving the direction.
std::vector<double> cumulative_primitive(const std::function<double(double)>& fn, double step,
                                         std::size_t n);

}  // namespace skewflow
