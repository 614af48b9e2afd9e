#pragma once

// Scenario description for sweeps: a base operating point, the swept
// variable and the Monte Carlo budget. Loaded from JSON whose keys follow the
// parameter-table symbols.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "biorx/pipeline.hpp"

namespace biorx {

enum class SweepVariable { kGamma, kEta, kN, kDt };

std::string_view to_string(SweepVariable v);
SweepVariable parse_sweep_variable(std::string_view name);

struct SweepSpec {
  SweepVariable variable = SweepVariable::kGamma;
  std::vector<double> values{0.5, 1.0, 1.5, 2.0, 3.0};
};

struct Scenario {
  OperatingPoint point;
  SweepSpec sweep;
  int trials = 2000;  // Monte Carlo symbols per point; 0 disables simulation
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Operating point for one sweep value. eta = K_Di / K_Dm is applied through
/// k_minus_i with k_plus_i held fixed.
OperatingPoint apply_sweep(const Scenario& scn, double value);

/// Parses and validates a JSON scenario. Missing keys take the defaults,
/// unknown keys are rejected. A_gr defaults to l_gr^2.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Full JSON form of a scenario; parse_scenario(to_json(s)) reproduces s.
std::string to_json(const Scenario& scn);

}  // namespace biorx
