#include "mcover/instance_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "mcover/submodular.hpp"

namespace mcover {

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw std::invalid_argument("instance file: " + what);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) bad(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(where + " must be finite");
  if (v < 0.0) bad(where + " must be nonnegative");
  return v;
}

std::size_t count(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned()) bad(where + " must be a nonnegative integer");
  return j.get<std::size_t>();
}

const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where + " must be an array");
  return j;
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  std::vector<double> out;
  for (const auto& v : array(j, where)) out.push_back(number(v, where));
  return out;
}

std::vector<Index> indices(const Json& j, std::size_t bound, const std::string& where) {
  std::vector<Index> out;
  for (const auto& v : array(j, where)) {
    const std::size_t k = count(v, where);
    if (k >= bound) bad(where + " index " + std::to_string(k) + " out of range");
    out.push_back(k);
  }
  return out;
}

// Splits an oracle into its coverage base and an optional cap.
std::pair<const WeightedCoverageFunction*, std::optional<double>> unwrap(const SubmodularOracle& f) {
  if (const auto* cov = dynamic_cast<const WeightedCoverageFunction*>(&f)) return {cov, {}};
  if (const auto* tr = dynamic_cast<const TruncatedFunction*>(&f)) {
    if (const auto* cov = dynamic_cast<const WeightedCoverageFunction*>(tr->base().get())) {
      return {cov, tr->cap()};
    }
  }
  throw std::invalid_argument("cannot serialize oracle family '" + f.family() + "'");
}

void check_header(const Json& j) {
  if (!j.is_object()) bad("top level must be an object");
  if (j.contains("format") && j["format"] != kInstanceFormat) bad("unknown format tag");
  if (j.contains("schema_version") && j["schema_version"] != kInstanceSchemaVersion) {
    bad("unsupported schema_version");
  }
}

Json header(ProblemKind kind) {
  Json j;
  j["format"] = kInstanceFormat;
  j["schema_version"] = kInstanceSchemaVersion;
  j["kind"] = to_string(kind);
  return j;
}

MscInstance msc_from(const Json& j, LoadedInstance& out) {
  const auto raw = numbers(field(j, "costs"), "costs");
  const std::size_t n = raw.size();
  std::vector<Constraint> constraints;
  const Json& cons = array(field(j, "constraints"), "constraints");
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const Json& c = cons[i];
    const std::string where = "constraint " + std::to_string(i);
    const Json& fam = field(c, "family");
    if (!fam.is_string()) bad(where + " family must be a string");
    OraclePtr f;
    if (fam == "coverage") {
      const auto weights = numbers(field(c, "weights"), where + " weights");
      const Json& covers_j = array(field(c, "covers"), where + " covers");
      if (covers_j.size() != n) bad(where + " needs one cover list per element");
      std::vector<std::vector<Index>> covers;
      for (const auto& cv : covers_j) covers.push_back(indices(cv, weights.size(), where + " covers"));
      f = std::make_shared<WeightedCoverageFunction>(std::move(covers), weights);
    } else if (fam == "modular") {
      const auto weights = numbers(field(c, "weights"), where + " weights");
      if (weights.size() != n) bad(where + " needs one weight per element");
      f = make_modular(weights);
    } else {
      bad(where + " has unknown family " + fam.dump());
    }
    if (c.contains("cap")) f = std::make_shared<TruncatedFunction>(f, number(c["cap"], where + " cap"));
    constraints.push_back({std::move(f), number(field(c, "requirement"), where + " requirement")});
  }
  MscInstance inst = make_msc(CostFunction::discretize(raw), std::move(constraints));
  if (j.contains("labels")) {
    for (const auto& l : array(j["labels"], "labels")) {
      if (!l.is_string()) bad("labels must be strings");
      inst.labels.push_back(l.get<std::string>());
    }
    if (inst.labels.size() != n) bad("labels need one entry per element");
  }
  (void)normalized(inst);  // rejects b_i > f_i(N)
  if (j.contains("planted")) {
    const Json& p = j["planted"];
    const auto members = indices(field(p, "set"), n, "planted set");
    out.planted = ElementSet::from_indices(n, members);
    out.planted_cost = static_cast<Cost>(number(field(p, "cost"), "planted cost"));
  }
  return inst;
}

CcfInstance ccf_from(const Json& j) {
  const std::size_t universe = count(field(j, "universe_size"), "universe_size");
  const Json& sets_j = array(field(j, "sets"), "sets");
  std::vector<double> raw;
  std::vector<CcfSet> sets;
  for (std::size_t i = 0; i < sets_j.size(); ++i) {
    const std::string where = "set " + std::to_string(i);
    raw.push_back(number(field(sets_j[i], "cost"), where + " cost"));
    sets.push_back({0, indices(field(sets_j[i], "points"), universe, where + " points")});
  }
  const CostFunction costs = CostFunction::discretize(raw);
  for (std::size_t i = 0; i < sets.size(); ++i) sets[i].cost = costs[i];
  std::vector<std::vector<double>> matrix;
  for (const auto& row : array(field(j, "matrix"), "matrix")) {
    matrix.push_back(numbers(row, "matrix entry"));
    if (matrix.back().size() != universe) bad("matrix rows need universe_size entries");
  }
  auto req = numbers(field(j, "requirements"), "requirements");
  if (req.size() != matrix.size()) bad("one requirement per matrix row");
  CcfInstance inst = make_ccf(universe, std::move(sets), std::move(matrix), std::move(req));
  check_ccf_feasible(inst);
  return inst;
}

std::vector<std::array<double, 2>> coords(const Json& j, const std::string& where) {
  std::vector<std::array<double, 2>> out;
  for (const auto& p : array(j, where)) {
    if (!p.is_array() || p.size() != 2) bad(where + " entries must be [x, y] pairs");
    std::array<double, 2> xy{};
    for (std::size_t d = 0; d < 2; ++d) {
      if (!p[d].is_number() || !std::isfinite(p[d].get<double>())) bad(where + " must be finite");
      xy[d] = p[d].get<double>();
    }
    out.push_back(xy);
  }
  return out;
}

FlmoInstance flmo_from(const Json& j) {
  const std::size_t F = count(field(j, "facilities"), "facilities");
  const std::size_t C = count(field(j, "clients"), "clients");
  auto opening = numbers(field(j, "opening"), "opening");
  if (opening.size() != F) bad("opening needs one cost per facility");
  std::vector<std::vector<Index>> colors;
  for (const auto& c : array(field(j, "colors"), "colors")) colors.push_back(indices(c, C, "colors"));
  std::vector<std::size_t> req;
  for (const auto& b : array(field(j, "requirements"), "requirements")) req.push_back(count(b, "requirements"));
  if (req.size() != colors.size()) bad("one requirement per color");
  for (std::size_t k = 0; k < req.size(); ++k) {
    if (req[k] > colors[k].size()) bad("color " + std::to_string(k) + " demands more clients than it has");
  }
  if (j.contains("coordinates")) {
    const Json& cj = j["coordinates"];
    auto fc = coords(field(cj, "facilities"), "facility coordinates");
    auto cc = coords(field(cj, "clients"), "client coordinates");
    if (fc.size() != F || cc.size() != C) bad("coordinate counts do not match");
    return make_flmo_from_coords(std::move(fc), std::move(cc), std::move(opening),
                                 std::move(colors), std::move(req));
  }
  std::vector<std::vector<double>> dist;
  for (const auto& row : array(field(j, "distance"), "distance")) {
    dist.push_back(numbers(row, "distance entry"));
    if (dist.back().size() != F + C) bad("distance rows need facilities + clients entries");
  }
  if (dist.size() != F + C) bad("distance needs facilities + clients rows");
  return make_flmo_from_matrix(F, C, std::move(dist), std::move(opening), std::move(colors),
                               std::move(req));
}

}  // namespace

const char* to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::msc: return "msc";
    case ProblemKind::ccf: return "ccf";
    case ProblemKind::flmo: return "flmo";
  }
  return "?";
}

ProblemKind parse_problem_kind(const std::string& name) {
  if (name == "msc") return ProblemKind::msc;
  if (name == "ccf") return ProblemKind::ccf;
  if (name == "flmo") return ProblemKind::flmo;
  throw std::invalid_argument("unknown problem kind '" + name + "'");
}

Json set_to_json(const ElementSet& s) { return Json(s.indices()); }

Json msc_to_json(const MscInstance& inst, const ElementSet* planted) {
  Json j = header(ProblemKind::msc);
  j["costs"] = inst.costs.values();
  Json cons = Json::array();
  for (const auto& c : inst.constraints) {
    const auto [cov, cap] = unwrap(*c.f);
    Json cj;
    cj["family"] = "coverage";
    cj["covers"] = cov->all_covers();
    cj["weights"] = cov->weights();
    cj["requirement"] = c.requirement;
    if (cap) cj["cap"] = *cap;
    cons.push_back(std::move(cj));
  }
  j["constraints"] = std::move(cons);
  if (!inst.labels.empty()) j["labels"] = inst.labels;
  if (planted) j["planted"] = {{"set", set_to_json(*planted)}, {"cost", inst.cost(*planted)}};
  return j;
}

Json ccf_to_json(const CcfInstance& inst) {
  Json j = header(ProblemKind::ccf);
  j["universe_size"] = inst.universe_size;
  Json sets = Json::array();
  for (const auto& s : inst.sets) sets.push_back({{"cost", s.cost}, {"points", s.points}});
  j["sets"] = std::move(sets);
  j["matrix"] = inst.matrix;
  j["requirements"] = inst.requirements;
  return j;
}

Json flmo_to_json(const FlmoInstance& inst) {
  Json j = header(ProblemKind::flmo);
  j["facilities"] = inst.num_facilities;
  j["clients"] = inst.num_clients;
  j["opening"] = inst.opening;
  j["colors"] = inst.colors;
  j["requirements"] = inst.requirements;
  if (!inst.coords.empty()) {
    Json fc = Json::array(), cc = Json::array();
    for (std::size_t p = 0; p < inst.coords.size(); ++p) {
      Json xy = {inst.coords[p][0], inst.coords[p][1]};
      (p < inst.num_facilities ? fc : cc).push_back(std::move(xy));
    }
    j["coordinates"] = {{"facilities", std::move(fc)}, {"clients", std::move(cc)}};
  } else {
    j["distance"] = inst.distance;
  }
  return j;
}

Json instance_to_json(const LoadedInstance& inst) {
  switch (inst.kind) {
    case ProblemKind::msc: return msc_to_json(inst.msc, inst.planted ? &*inst.planted : nullptr);
    case ProblemKind::ccf: return ccf_to_json(inst.ccf);
    case ProblemKind::flmo: return flmo_to_json(inst.flmo);
  }
  return {};
}

LoadedInstance instance_from_json(const Json& j) {
  check_header(j);
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) bad("kind must be a string");
  LoadedInstance out;
  out.kind = parse_problem_kind(kind.get<std::string>());
  try {
    switch (out.kind) {
      case ProblemKind::msc: out.msc = msc_from(j, out); break;
      case ProblemKind::ccf: out.ccf = ccf_from(j); break;
      case ProblemKind::flmo: out.flmo = flmo_from(j); break;
    }
  } catch (const Json::exception& e) {
    bad(e.what());
  }
  return out;
}

LoadedInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return instance_from_json(j);
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << j.dump(2) << '\n';
}

std::string instance_digest(const Json& j) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mcover
