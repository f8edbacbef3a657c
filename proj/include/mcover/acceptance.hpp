#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcover/instance_io.hpp"

namespace mcover {

inline constexpr int kAcceptanceCriteria = 12;
inline constexpr std::uint64_t kAcceptanceSeed = 20240601;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

// Runs criterion `id` (1..12) with everything derived from `seed`. Exceptions count as failures.
CriterionResult run_criterion(int id, std::uint64_t seed = kAcceptanceSeed);

// Runs `only` (or all twelve when empty) in order.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& only = {},
                                            std::uint64_t seed = kAcceptanceSeed);

// "PASS [n] name: detail (t s)".
std::string format_line(const CriterionResult& c);
Json to_json(const std::vector<CriterionResult>& results);

}  // namespace mcover
