#include "mcover/reports.hpp"

#include <algorithm>
#include <sstream>

namespace mcover {

namespace {

Json star_json(const Star& s) {
  return {{"facility", s.facility}, {"clients", s.clients}, {"cost", s.cost}};
}

Json stars_json(const std::vector<Star>& stars) {
  Json out = Json::array();
  for (const auto& s : stars) out.push_back(star_json(s));
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

Json to_json(const AssertRecord& a) {
  Json j = {{"name", a.name},
            {"kind", a.hard ? "hard" : "statistical"},
            {"passed", a.passed},
            {"trials", a.trials}};
  if (!a.detail.empty()) j["detail"] = a.detail;
  return j;
}

Json make_report(const std::string& problem, const std::string& digest, std::uint64_t seed,
                 Json params, Json stages, Json result, const std::vector<AssertRecord>& asserts) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["problem"] = problem;
  j["instance_digest"] = digest;
  j["seed"] = seed;
  j["params"] = std::move(params);
  j["stages"] = std::move(stages);
  j["result"] = std::move(result);
  Json as = Json::array();
  for (const auto& a : asserts) as.push_back(to_json(a));
  j["asserts"] = std::move(as);
  return j;
}

bool hard_asserts_pass(const Json& report) {
  if (!report.contains("asserts")) return true;
  for (const auto& a : report["asserts"]) {
    if (a.value("kind", "") == "hard" && !a.value("passed", false)) return false;
  }
  return true;
}

Json flmo_solution_json(const FlmoSolution& sol) {
  Json assignment = Json::array();
  for (const auto& a : sol.assignment) assignment.push_back(a ? Json(*a) : Json(nullptr));
  return {{"open", set_to_json(sol.open)}, {"assignment", std::move(assignment)}};
}

Json msc_report(const Json& instance, const MscSolveReport& rep) {
  Json params = {{"eps", rep.eps},   {"eps1", rep.eps1},
                 {"eps2", rep.eps2}, {"alpha", rep.alpha},
                 {"L", rep.L},       {"guess_mode", rep.guess_mode}};
  Json stages = Json::array();
  for (std::size_t t = 0; t < rep.rounds.size(); ++t) {
    const auto& r = rep.rounds[t];
    stages.push_back({
        {"round", t},
        {"guess", {{"index", r.guess_index}, {"outcome", r.outcome}, {"s_pre", set_to_json(r.s_pre)}}},
        {"fractional",
         {{"opt_guess", r.opt_guess},
          {"relax_calls", r.relax_calls},
          {"exact", r.relax_exact},
          {"cost", r.relax_cost},
          {"bounds", r.relax_bounds}}},
        {"rounding",
         {{"ell", r.ell},
          {"precondition_holds", r.precondition_holds},
          {"set", set_to_json(r.r_set)},
          {"greedy_cost", r.greedy_cost},
          {"sampled_cost", r.sampled_cost}}},
        {"fix",
         {{"constraints", r.fixed_constraints},
          {"budgets", r.fix_budgets},
          {"set", set_to_json(r.t_set)}}},
        {"costs", {{"pre", r.cost_pre}, {"rounding", r.cost_r}, {"fix", r.cost_t}, {"total", r.cost_total}}},
        {"final_set", set_to_json(r.final_set)},
    });
  }
  Json result = {{"final_set", set_to_json(rep.final_set)},
                 {"cost", rep.cost},
                 {"values", rep.values},
                 {"requirements", rep.requirements},
                 {"ratios", rep.ratios},
                 {"coverage_target", rep.coverage_target},
                 {"guesses_tried", rep.guesses_tried}};
  double worst = 1.0;
  for (double v : rep.ratios) worst = std::min(worst, v);
  std::vector<AssertRecord> asserts = {
      {"coverage >= target * b_i", true, rep.coverage_ok, 1,
       "min ratio " + fmt(worst) + " vs target " + fmt(rep.coverage_target)}};
  return make_report("msc", instance_digest(instance), rep.seed, std::move(params),
                     std::move(stages), std::move(result), asserts);
}

Json ccf_report(const Json& instance, const CcfSolveReport& rep) {
  const auto& g = rep.chosen;
  Json params = {{"eps_star", rep.eps_star}, {"eps", rep.eps},
                 {"tau", rep.tau},           {"scale", rep.scale},
                 {"oracle", rep.oracle},     {"beta", rep.beta},
                 {"beta_worst_case", rep.beta_worst_case},
                 {"L", rep.L},               {"guess_mode", rep.guess_mode}};
  Json fixes = Json::array();
  for (const auto& f : g.fixes) {
    fixes.push_back({{"constraint", f.constraint}, {"sets", set_to_json(f.sets)}, {"cost", f.cost}});
  }
  Json stages = {
      {"guess",
       {{"index", g.guess_index},
        {"outcome", g.outcome},
        {"s_pre", set_to_json(g.s_pre)},
        {"pruned_sets", g.pruned_sets}}},
      {"fractional", {{"lp_objective", g.lp_objective}}},
      {"heavy",
       {{"points", g.heavy},
        {"sets", set_to_json(g.s_he)},
        {"cost", g.heavy_cover.cost},
        {"fractional_cost", g.heavy_cover.fractional_cost},
        {"beta", g.heavy_cover.beta},
        {"within_bound", g.heavy_cover.within_bound}}},
      {"shallow",
       {{"points", g.shallow_count},
        {"sets", set_to_json(g.s_sh)},
        {"precondition_checked", g.precondition_checked},
        {"precondition_holds", g.precondition_holds}}},
      {"fix", std::move(fixes)},
      {"costs",
       {{"pre", g.cost_pre}, {"heavy", g.cost_he}, {"shallow", g.cost_sh}, {"fix", g.cost_fix}, {"total", g.cost_total}}},
  };
  Json result = {{"final_set", set_to_json(rep.final_set)},
                 {"cost", rep.cost},
                 {"coverage", rep.coverage},
                 {"requirements", rep.requirements},
                 {"guesses_tried", rep.guesses_tried}};
  std::vector<AssertRecord> asserts = {{"A z >= b", true, rep.feasible, 1, ""}};
  const bool heavy_ok = g.heavy_cover.within_bound;
  asserts.push_back({"heavy cover cost <= beta * LP cost", rep.beta_worst_case, heavy_ok, 1,
                     rep.beta_worst_case ? "" : "oracle bound holds in expectation"});
  return make_report("ccf", instance_digest(instance), rep.seed, std::move(params),
                     std::move(stages), std::move(result), asserts);
}

Json flmo_report(const Json& instance, const FlmoSolveReport& rep) {
  const auto& g = rep.chosen;
  Json params = {{"eps", rep.eps}, {"L", rep.L},   {"T", rep.T}, {"beta_fl", rep.beta_fl},
                 {"guess_mode", rep.guess_mode}, {"opt_guesses", rep.opt_guesses}};
  Json tuples = Json::array();
  for (const auto& t : g.tuples) {
    tuples.push_back({{"facility", t.facility}, {"farthest", t.farthest}, {"full_cost", t.full_cost}});
  }
  Json stages = {
      {"guess",
       {{"index", g.guess_index},
        {"outcome", g.outcome},
        {"opt_guess", g.opt_guess},
        {"B", g.B},
        {"tuples", std::move(tuples)},
        {"G", g.G ? Json(*g.G) : Json(nullptr)},
        {"residual_clients", g.residual_clients},
        {"residual_requirements", g.residual_requirements}}},
      {"fractional",
       {{"columns", g.columns},
        {"rounds", g.cg_rounds},
        {"converged", g.cg_converged},
        {"lp_objective", g.lp_objective}}},
      {"heavy",
       {{"clients", g.heavy},
        {"open", set_to_json(g.ucfl.open)},
        {"cost", g.ucfl.cost},
        {"fractional_cost", g.ucfl.fractional_cost},
        {"beta", g.ucfl.beta},
        {"within_bound", g.ucfl.within_bound}}},
      {"shallow",
       {{"clients", g.shallow_count},
        {"support_size", g.support_size},
        {"stars", stars_json(g.rounded_stars)},
        {"met", g.rounding_met},
        {"precondition_checked", g.precondition_checked},
        {"precondition_holds", g.precondition_holds}}},
      {"fix", {{"colors", g.fixed_colors}, {"stars", stars_json(g.fix_stars)}}},
  };
  Json result = flmo_solution_json(rep.solution);
  result["cost"] = rep.cost;
  result["served"] = rep.served;
  result["requirements"] = rep.requirements;
  result["guesses_tried"] = rep.guesses_tried;
  std::vector<AssertRecord> asserts = {
      {"every color served >= b_k", true, rep.feasible, 1, ""},
      {"heavy UCFL cost <= 4 * LP-FL cost", true, g.ucfl.within_bound, 1, ""},
      {"column generation converged", true, g.cg_converged, 1, ""}};
  return make_report("flmo", instance_digest(instance), rep.seed, std::move(params),
                     std::move(stages), std::move(result), asserts);
}

Json brute_force_report(const Json& instance, const BruteForceResult& res) {
  Json result = {{"feasible", res.feasible}, {"cost", res.cost}, {"set", set_to_json(res.set)}};
  return make_report(instance.value("kind", "msc"), instance_digest(instance), 0, Json::object(),
                     Json::object(), std::move(result), {});
}

Json brute_force_report(const Json& instance, const FlmoBruteForceResult& res) {
  Json result = flmo_solution_json(res.solution);
  result["feasible"] = res.feasible;
  result["cost"] = res.cost;
  return make_report("flmo", instance_digest(instance), 0, Json::object(), Json::object(),
                     std::move(result), {});
}

}  // namespace mcover
