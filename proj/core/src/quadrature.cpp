#include "skewflow/quadrature.hpp"

#include <array>
#include <cmath>

namespace skewflow {

namespace {

constexpr std::array<double, 4> kNodes = {0.1834346424956498, 0.5255324099163290,
                                          0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kWeights = {0.3626837833783620, 0.3137066458778873,
                                            0.2223810344533745, 0.1012285362903763};

double gauss8(const std::function<double(double)>& fn, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < kNodes.size(); ++i) {
    s += kWeights[i] * (fn(mid - half * kNodes[i]) + fn(mid + half * kNodes[i]));
  }
  return half * s;
}

}  // namespace

double orbit_integral(const std::function<double(double)>& fn, double a, double b, double panel) {
  if (a == b) return 0.0;
  const double len = std::abs(b - a);
  const auto panels = static_cast<std::size_t>(std::ceil(len / panel));
  const double h = (b - a) / static_cast<double>(panels);
  // Kahan summation keeps long horizons (1e4 panels and more) accurate.
  double sum = 0.0, comp = 0.0;
  for (std::size_t j = 0; j < panels; ++j) {
    const double lo = a + h * static_cast<double>(j);
    const double term = gauss8(fn, lo, lo + h) - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  return sum;
}

std::vector<double> cumulative_primitive(const std::function<double(double)>& fn, double step,
                                         std::size_t n) {
  std::vector<double> out(n + 1, 0.0);
  double sum = 0.0, comp = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = step * static_cast<double>(j);
    const double term = gauss8(fn, lo, lo + step) - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
    out[j + 1] = sum;
  }
  return out;
}

}  // namespace skewflow
