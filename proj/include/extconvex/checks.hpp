#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace extconvex {

struct CheckResult {
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  nlohmann::json details;
};

/// The reproduction suite behind `extconvex suite`: one entry per
/// verifiable claim, each returning pass/fail plus measured values.
std::vector<std::string> suite_check_names();
CheckResult run_suite_check(const std::string& name, std::uint64_t seed, bool full);

std::vector<CheckResult> run_full_suite(std::uint64_t seed, bool full);

}  // namespace extconvex
