#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "anosov/pingpong.hpp"

namespace anosov {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes of the command runner.
inline constexpr int kExitSuccess = 0;       // certified / all checks pass
inline constexpr int kExitRefuted = 1;       // a hard hypothesis failed, witness in the report
inline constexpr int kExitInconclusive = 2;  // no refutation, but a target was missed
inline constexpr int kExitError = 3;         // unusable input or internal failure

struct AngleSweepSpec {
  double r_min = 0.0;   // <= 0: derived from the measured constants
  int count = 2;        // number of scales measured
  double factor = 8.0;  // multiplier between consecutive scales
  int samples = 200;    // cone samples per scale
};

struct Config {
  int dim = 3;
  std::vector<int> pattern_dims;  // empty: full pattern
  double beta = 0.2;
  double beta_prime = 0.3;
  std::optional<Matrix> base_point;  // default: identity
  std::vector<GroupSpec> groups;
  int max_syllables = 4;
  CertifyTargets targets;
  std::uint64_t seed = 1;
  int pair_budget = tol::pair_budget;
  double id_tol = tol::id;
  AngleSweepSpec angles;
};

/// Load and validate a JSON config file. Throws ConfigError with the path
/// and a description on any problem.
[[nodiscard]] Config parse_config(const std::string& path);

/// Same, from in-memory text (origin names the source in errors).
[[nodiscard]] Config parse_config_text(const std::string& text, const std::string& origin);

struct RunOptions {
  std::string out_path = "report.json";
  int power = 1;  // schottky command only
  std::optional<std::uint64_t> seed;
  std::optional<int> pair_budget;
  /// Include wall-clock timings in the report file. Off by default so that
  /// identical config and seed produce byte-identical reports.
  bool timing = false;
};

/// Execute one command ("certify", "angles", "schottky", "selftest"),
/// write the report atomically to options.out_path, print a human summary
/// to stdout, and return the exit code.
[[nodiscard]] int run(const std::string& command, const Config& config,
                      const RunOptions& options);

}  // namespace anosov
