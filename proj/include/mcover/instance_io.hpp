#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "mcover/element_set.hpp"
#include "mcover/flmo_instance.hpp"
#include "mcover/instances.hpp"

namespace mcover {

using Json = nlohmann::json;

inline constexpr int kInstanceSchemaVersion = 1;
inline constexpr const char* kInstanceFormat = "mcover-instance";

enum class ProblemKind { msc, ccf, flmo };

const char* to_string(ProblemKind kind);
// Throws std::invalid_argument for unknown names.
ProblemKind parse_problem_kind(const std::string& name);

// One instance file. Only the member matching `kind` is populated.
struct LoadedInstance {
  ProblemKind kind = ProblemKind::msc;
  MscInstance msc;
  CcfInstance ccf;
  FlmoInstance flmo;
  std::optional<ElementSet> planted;  // MSC only
  std::optional<Cost> planted_cost;
};

// Writers accept weighted coverage constraints, optionally wrapped in one truncation.
// Other oracle families throw std::invalid_argument.
Json msc_to_json(const MscInstance& inst, const ElementSet* planted = nullptr);
Json ccf_to_json(const CcfInstance& inst);
Json flmo_to_json(const FlmoInstance& inst);
Json instance_to_json(const LoadedInstance& inst);

// Readers throw std::invalid_argument on wrong types, missing fields, negative or non-finite
// numbers, out-of-range indices, or an infeasible instance.
LoadedInstance instance_from_json(const Json& j);

LoadedInstance read_instance_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

// FNV-1a over the compact dump, as 16 hex digits.
std::string instance_digest(const Json& j);

// Element sets as ascending index arrays.
Json set_to_json(const ElementSet& s);

}  // namespace mcover
