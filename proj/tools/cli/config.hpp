#pragma once

// Run configuration loaded from YAML.
//
//   name: quasi
//   frequencies: [1.0, 1.4142135623730951]
//   epsilon: 0.5
//   rho: 0.5
//   delta: 0.1
//   base_point: [0.0, 0.0]
//   coefficients:
//     a: 0.0                          # constant shorthand
//     b:
//       constant: 0.0
//       terms:                        # [k-vector, cos coefficient, sin coefficient]
//         - [[1, 0], 1.0, 0.0]
//         - [[0, 1], 0.0, 1.0]
//     c: {constant: 0.0, terms: [[[1, 0], -1.0, 0.0], [[0, 1], 0.0, -1.0]]}
//     d: 0.0
//
// Optional tables: simulate {y0, horizon, output_dt}, tolerances {abs, rel},
// pullback {schedule, tol}, grid {points, angles}, spectrum {horizon, window,
// zero_tol}, liyorke {pairs, horizon, seed, section_angles}.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <skewflow/attractor.hpp>
#include <skewflow/driving.hpp>
#include <skewflow/linalg.hpp>
#include <skewflow/ode.hpp>
#include <skewflow/spectrum.hpp>

namespace skewflow::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  RunConfig(SystemFamily fam, TorusPoint base) : family(std::move(fam)), base_point(std::move(base)) {}

  std::string name{"unnamed"};
  SystemFamily family;
  double delta{0.1};
  TorusPoint base_point;
  Vec2 y0{0.0, 2.0};
  double sim_horizon{50.0};
  double output_dt{0.05};
  StepControl control{};
  PullbackSettings pullback{};
  std::size_t grid_points{8};
  std::size_t grid_angles{16};
  ClassifySettings classify{};
  std::size_t pairs{200};
  double pair_horizon{2000.0};
  std::uint64_t seed{1};
  std::size_t section_angles{32};
  std::uint64_t hash{0};  ///< FNV-1a of the source text
};

/// FNV-1a, 64 bit.
std::uint64_t fnv1a(std::string_view bytes);

/// Throws ConfigError naming the line and key of the first problem.
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");
RunConfig load_config(const std::string& path);

std::string hex_hash(std::uint64_t h);

}  // namespace skewflow::cli
