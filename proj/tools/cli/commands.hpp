#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace skewflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Writes the four phase-portrait figures into out_dir (created if missing)
/// and returns the written paths.
std::vector<std::filesystem::path> reproduce_figures(const std::filesystem::path& out_dir,
                                                     std::uint64_t seed);

/// "a,b,c" or "lo:hi:step"; throws std::invalid_argument on malformed or empty input.
std::vector<double> parse_epsilon_list(const std::string& text);

struct GridSpec {
  std::size_t points{0};
  std::size_t angles{0};
};
/// "PxA", e.g. "8x16".
GridSpec parse_grid(const std::string& text);

}  // namespace skewflow::cli
