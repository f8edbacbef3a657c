#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mcover/brute_force.hpp"
#include "mcover/ccf_solver.hpp"
#include "mcover/flmo_solver.hpp"
#include "mcover/instance_io.hpp"
#include "mcover/msc_solver.hpp"

namespace mcover {

inline constexpr int kReportSchemaVersion = 1;

// A checked claim. Hard asserts must hold on every run; statistical ones hold with some
// probability and carry the number of trials they were measured over.
struct AssertRecord {
  std::string name;
  bool hard = true;
  bool passed = true;
  std::size_t trials = 1;
  std::string detail;
};

Json to_json(const AssertRecord& a);

// {schema_version, problem, instance_digest, seed, params, stages, result, asserts}.
Json make_report(const std::string& problem, const std::string& digest, std::uint64_t seed,
                 Json params, Json stages, Json result, const std::vector<AssertRecord>& asserts);

// True when every assert labeled hard passed.
bool hard_asserts_pass(const Json& report);

Json msc_report(const Json& instance, const MscSolveReport& rep);
Json ccf_report(const Json& instance, const CcfSolveReport& rep);
Json flmo_report(const Json& instance, const FlmoSolveReport& rep);

Json brute_force_report(const Json& instance, const BruteForceResult& res);
Json brute_force_report(const Json& instance, const FlmoBruteForceResult& res);

Json flmo_solution_json(const FlmoSolution& sol);

}  // namespace mcover
