#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "mcover/brute_force.hpp"
#include "mcover/experiment.hpp"
#include "mcover/instance_io.hpp"
#include "mcover/reports.hpp"

using namespace mcover;

namespace {

ExperimentSpec spec_for(ProblemKind problem, const std::string& family, std::uint64_t seed) {
  ExperimentSpec spec;
  spec.problem = problem;
  spec.family = family;
  spec.seed = seed;
  return spec;
}

struct Family {
  ProblemKind problem;
  const char* name;
};

const Family kFamilies[] = {{ProblemKind::msc, "random_coverage"},
                            {ProblemKind::msc, "planted_optimum"},
                            {ProblemKind::ccf, "random_coverage"},
                            {ProblemKind::ccf, "vertex_cover_like"},
                            {ProblemKind::flmo, "random_metric_flmo"}};

Json msc_abc() {
  return Json::parse(R"({"format":"mcover-instance","schema_version":1,"kind":"msc",
    "costs":[1,2,3],
    "constraints":[{"family":"coverage","covers":[[0],[0,1],[1]],"weights":[1,1],"requirement":2}]})");
}

}  // namespace

TEST(InstanceIo, EveryGeneratorRoundTrips) {
  for (const auto& fam : kFamilies) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      RngStream rng(seed);
      const LoadedInstance inst = generate_instance(spec_for(fam.problem, fam.name, seed), rng);
      const Json j = instance_to_json(inst);
      const LoadedInstance back = instance_from_json(j);
      EXPECT_EQ(instance_to_json(back), j) << fam.name << " seed " << seed;
      EXPECT_EQ(instance_digest(instance_to_json(back)), instance_digest(j));
      EXPECT_EQ(brute_force_opt(back), brute_force_opt(inst));
    }
  }
}

TEST(InstanceIo, FileRoundTrip) {
  RngStream rng(4);
  const LoadedInstance inst = generate_instance(spec_for(ProblemKind::flmo, "random_metric_flmo", 4), rng);
  const auto path = std::filesystem::temp_directory_path() / "mcover_harness_roundtrip.json";
  write_json_file(path.string(), instance_to_json(inst));
  const LoadedInstance back = read_instance_file(path.string());
  std::filesystem::remove(path);
  EXPECT_EQ(instance_to_json(back), instance_to_json(inst));
  EXPECT_THROW(read_instance_file(path.string()), std::invalid_argument);
}

TEST(InstanceIo, RejectsMalformedInput) {
  const Json good = msc_abc();
  EXPECT_NO_THROW(instance_from_json(good));
  auto broken = [&](auto edit) {
    Json j = good;
    edit(j);
    return j;
  };
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["format"] = "other"; })), std::invalid_argument);
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["schema_version"] = 2; })), std::invalid_argument);
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["kind"] = "tsp"; })), std::invalid_argument);
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j.erase("costs"); })), std::invalid_argument);
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["costs"] = {1, -2, 3}; })), std::invalid_argument);
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["costs"] = "cheap"; })), std::invalid_argument);
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["constraints"][0]["covers"][0] = {7}; })),
               std::invalid_argument);
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["constraints"][0]["requirement"] = 3; })),
               std::invalid_argument);
  EXPECT_THROW(instance_from_json(broken([](Json& j) { j["constraints"][0]["family"] = "matroid"; })),
               std::invalid_argument);
  EXPECT_THROW(instance_from_json(Json::array()), std::invalid_argument);
  EXPECT_THROW(parse_problem_kind("knapsack"), std::invalid_argument);
}

TEST(InstanceIo, RejectsInfeasibleCcfAndNonMetricFlmo) {
  const Json ccf = Json::parse(R"({"format":"mcover-instance","schema_version":1,"kind":"ccf",
    "universe_size":2,"sets":[{"cost":1,"points":[0]}],"matrix":[[1,1]],"requirements":[2]})");
  EXPECT_THROW(instance_from_json(ccf), std::invalid_argument);
  const Json flmo = Json::parse(R"({"format":"mcover-instance","schema_version":1,"kind":"flmo",
    "facilities":1,"clients":2,"opening":[1],"colors":[[0,1]],"requirements":[1],
    "distance":[[0,1,1],[1,0,5],[1,5,0]]})");
  EXPECT_THROW(instance_from_json(flmo), std::invalid_argument);
}

TEST(InstanceIo, DigestIsStableAndSensitive) {
  const Json j = msc_abc();
  const std::string d = instance_digest(j);
  EXPECT_EQ(d.size(), 16u);
  EXPECT_EQ(d, instance_digest(Json::parse(j.dump())));
  Json k = j;
  k["costs"][0] = 2;
  EXPECT_NE(d, instance_digest(k));
}

TEST(Reports, EnvelopeAndDeterminism) {
  for (const auto& fam : kFamilies) {
    RngStream gen(9);
    const LoadedInstance inst = generate_instance(spec_for(fam.problem, fam.name, 9), gen);
    const Json ij = instance_to_json(inst);
    SolverParams params;
    params.guess.L_override = 1;
    if (fam.problem == ProblemKind::ccf && std::string(fam.name) == "random_coverage") {
      params.oracle = "generic";
    }
    RngStream a(17), b(17);
    const Json ra = solve_report(inst, ij, params, a);
    const Json rb = solve_report(inst, ij, params, b);
    EXPECT_EQ(ra, rb) << fam.name;
    for (const char* key : {"schema_version", "problem", "instance_digest", "seed", "params", "stages",
                            "result", "asserts"}) {
      EXPECT_TRUE(ra.contains(key)) << fam.name << " lacks " << key;
    }
    EXPECT_EQ(ra["instance_digest"], instance_digest(ij));
    EXPECT_EQ(ra["problem"], to_string(fam.problem));
    EXPECT_FALSE(ra.contains("wall_time"));
    bool any_hard = false;
    for (const auto& as : ra["asserts"]) {
      const std::string kind = as["kind"];
      EXPECT_TRUE(kind == "hard" || kind == "statistical");
      EXPECT_TRUE(as.contains("trials"));
      any_hard = any_hard || kind == "hard";
    }
    EXPECT_TRUE(any_hard);
    EXPECT_TRUE(hard_asserts_pass(ra)) << ra["asserts"].dump();
  }
}

TEST(Reports, HardAssertGate) {
  const Json ok = make_report("msc", "0", 1, Json::object(), Json::object(), Json::object(),
                              {{"a", true, true, 1, ""}, {"b", false, false, 10, "soft miss"}});
  EXPECT_TRUE(hard_asserts_pass(ok));
  const Json bad = make_report("msc", "0", 1, Json::object(), Json::object(), Json::object(),
                               {{"a", true, false, 1, "broken"}});
  EXPECT_FALSE(hard_asserts_pass(bad));
}

TEST(GenerateInstance, RejectsFamiliesOfOtherProblems) {
  RngStream rng(1);
  EXPECT_THROW(generate_instance(spec_for(ProblemKind::msc, "vertex_cover_like", 1), rng),
               std::invalid_argument);
  EXPECT_THROW(generate_instance(spec_for(ProblemKind::flmo, "random_coverage", 1), rng),
               std::invalid_argument);
  EXPECT_THROW(generate_instance(spec_for(ProblemKind::ccf, "nonsense", 1), rng), std::invalid_argument);
}

TEST(PlantedOptimum, OptimumNeverExceedsPlantedCost) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RngStream rng(seed);
    ExperimentSpec spec = spec_for(ProblemKind::msc, "planted_optimum", seed);
    spec.planted_size = 1 + seed % 4;
    const LoadedInstance inst = generate_instance(spec, rng);
    ASSERT_TRUE(inst.planted.has_value());
    ASSERT_TRUE(inst.planted_cost.has_value());
    EXPECT_TRUE(inst.msc.satisfies(*inst.planted));
    EXPECT_EQ(inst.msc.cost(*inst.planted), *inst.planted_cost);
    const auto opt = brute_force_opt(inst);
    ASSERT_TRUE(opt.has_value());
    EXPECT_LE(*opt, static_cast<double>(*inst.planted_cost));
  }
}

TEST(Experiment, AggregateMatchesPerTrialRecords) {
  ExperimentSpec spec = spec_for(ProblemKind::msc, "random_coverage", 3);
  spec.coverage.n = 8;
  SolverParams params;
  params.guess.L_override = 1;
  const ExperimentReport rep = run_experiment(spec, params, 500);
  ASSERT_EQ(rep.records.size(), 500u);
  EXPECT_EQ(rep.aggregate.trials, 500u);
  EXPECT_EQ(rep.aggregate.errors, 0u);
  EXPECT_EQ(rep.aggregate.hard_failures, 0u);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t t = 0; t < rep.records.size(); ++t) {
    const auto& r = rep.records[t];
    EXPECT_EQ(r.trial, t);
    EXPECT_EQ(r.instance_seed, RngStream(spec.seed).split(t).split(0).seed());
    EXPECT_EQ(r.solver_seed, RngStream(spec.seed).split(t).split(1).seed());
    if (r.ratio) {
      sum += *r.ratio;
      ++count;
    }
  }
  ASSERT_EQ(rep.aggregate.ratio_count, count);
  EXPECT_NEAR(rep.aggregate.mean_ratio, sum / static_cast<double>(count), 1e-12);
  EXPECT_GE(rep.aggregate.max_ratio, rep.aggregate.mean_ratio);

  // The same spec reproduces every record.
  const ExperimentReport again = run_experiment(spec, params, 500);
  EXPECT_EQ(to_json(again), to_json(rep));
  const std::string table = to_table(rep);
  EXPECT_NE(table.find("mean"), std::string::npos);
}

TEST(Experiment, SolverErrorsAreRecorded) {
  ExperimentSpec spec = spec_for(ProblemKind::msc, "random_coverage", 5);
  SolverParams params;
  params.guess.mode = GuessMode::exact_enumeration;
  params.guess.L_override = 5;
  params.guess.max_guesses = 1;
  const ExperimentReport rep = run_experiment(spec, params, 5, false);
  EXPECT_EQ(rep.aggregate.errors, 5u);
  for (const auto& r : rep.records) {
    EXPECT_FALSE(r.ok);
    EXPECT_FALSE(r.error.empty());
  }
}

// Optima of generated instances, frozen together with the instance digests so that a change
// to a generator or to an oracle shows up here.
TEST(BruteForceOracles, FrozenOptimaForFixedSeeds) {
  struct Frozen {
    ProblemKind problem;
    const char* family;
    std::uint64_t seed;
    double opt;
    const char* digest;
  };
  const Frozen table[] = {
      {ProblemKind::msc, "random_coverage", 101, 4, "19113e33c3b92c43"},
      {ProblemKind::msc, "random_coverage", 202, 5, "f4bf993df97322a6"},
      {ProblemKind::msc, "random_coverage", 303, 5, "078fee6f9f0621b5"},
      {ProblemKind::msc, "planted_optimum", 101, 10, "6a3a66aaa786dff3"},
      {ProblemKind::msc, "planted_optimum", 202, 5, "7188c91a04b856af"},
      {ProblemKind::msc, "planted_optimum", 303, 6, "1e8809637ee3073b"},
      {ProblemKind::ccf, "random_coverage", 101, 1, "fa888cfbe2817083"},
      {ProblemKind::ccf, "random_coverage", 202, 6, "f5d247379b9229d9"},
      {ProblemKind::ccf, "random_coverage", 303, 8, "822136f9a64bc78f"},
      {ProblemKind::ccf, "vertex_cover_like", 101, 7, "274fdfba93d11d17"},
      {ProblemKind::ccf, "vertex_cover_like", 202, 7, "83b368fd38163e1a"},
      {ProblemKind::ccf, "vertex_cover_like", 303, 5, "1db90b6a0db6649f"},
      {ProblemKind::flmo, "random_metric_flmo", 101, 17.478708664619074, "5ea97f149eb2bbe7"},
      {ProblemKind::flmo, "random_metric_flmo", 202, 17.335087491092573, "9277f32b27233c3c"},
      {ProblemKind::flmo, "random_metric_flmo", 303, 15.47213595499958, "8266e137741cf760"},
  };
  for (const auto& f : table) {
    RngStream rng(f.seed);
    const LoadedInstance inst = generate_instance(spec_for(f.problem, f.family, f.seed), rng);
    EXPECT_EQ(instance_digest(instance_to_json(inst)), f.digest) << f.family << " " << f.seed;
    const auto opt = brute_force_opt(inst);
    ASSERT_TRUE(opt.has_value());
    EXPECT_NEAR(*opt, f.opt, 1e-9) << f.family << " " << f.seed;
  }
}
