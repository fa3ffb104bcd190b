#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "pdsp/base.hpp"
#include "pdsp/generators.hpp"
#include "pdsp/instances.hpp"
#include "pdsp/pipeline.hpp"

using namespace pdsp;

namespace {

DspInstance path2() {
  PlaneMultigraph g = PlaneMultigraph::build(2, {{0, 1}}, {{0}, {0}});
  return {std::move(g), {{0, 1}}};
}

// Two pairs forced through the same center: unsolvable, and every face is
// bounded by terminal edges only, so the part takes the micro route.
DspInstance star() {
  std::vector<EdgeRec> es = {{0, 1}, {1, 2}, {3, 1}, {4, 1}};
  PlaneMultigraph g =
      PlaneMultigraph::build(5, es, {{0}, {0, 2, 1, 3}, {1}, {2}, {3}});
  return {std::move(g), {{0, 2}, {3, 4}}};
}

// Two hubs joined by four two-edge routes; pairs on opposite route
// midpoints can split over the hubs, so this is a genuinely coupled yes.
DspInstance quad() {
  std::vector<EdgeRec> es = {{0, 2}, {2, 1}, {0, 3}, {3, 1},
                             {0, 4}, {4, 1}, {0, 5}, {5, 1}};
  PlaneMultigraph g = PlaneMultigraph::build(
      6, es,
      {{0, 2, 4, 6}, {7, 5, 3, 1}, {0, 1}, {2, 3}, {4, 5}, {6, 7}});
  return {std::move(g), {{2, 3}, {4, 5}}};
}

DspInstance split_pair() {
  PlaneMultigraph g =
      PlaneMultigraph::build(4, {{0, 1}, {2, 3}}, {{0}, {0}, {1}, {1}});
  return {std::move(g), {{0, 3}}};
}

DspInstance dup_slot() {
  PlaneMultigraph g =
      PlaneMultigraph::build(3, {{0, 1}, {1, 2}}, {{0}, {0, 1}, {1}});
  return {std::move(g), {{0, 1}, {1, 2}}};
}

void check_round_sanity(const PartReport& p) {
  int prev_budget = 0;
  int prev_enumerated = 0;
  for (const LRound& r : p.rounds) {
    CHECK(r.budget > prev_budget);
    CHECK(r.effective <= r.budget);
    CHECK(r.effective >= 0);
    CHECK(r.enumerated >= prev_enumerated);
    CHECK(r.fresh == r.enumerated - prev_enumerated);
    CHECK(r.incompatible >= 0);
    CHECK(r.incompatible <= r.fresh);
    prev_budget = r.budget;
    prev_enumerated = r.enumerated;
  }
}

void check_valid_yes(const DspInstance& inst, const RunReport& rep) {
  CHECK(rep.verdict == Verdict::Yes);
  REQUIRE(rep.solution.has_value());
  CHECK(rep.validated);
  CHECK(check_solution(inst, *rep.solution).ok(false));
  REQUIRE(rep.checks.size() == 4);
  CHECK(rep.checks[0].first == "paths exist");
  CHECK(rep.checks[1].first == "endpoints match");
  CHECK(rep.checks[2].first == "vertex-disjoint");
  CHECK(rep.checks[3].first == "all geodesic");
  for (const auto& [name, okay] : rep.checks) CHECK(okay);
}

}  // namespace

TEST_CASE("configuration validation") {
  PipelineConfig ok;
  ok.budgets = {1, 3, 9};
  ok.parallelism = 8;
  ok.validate();

  auto bad = [](auto mutate) {
    PipelineConfig c;
    mutate(c);
    CHECK_THROWS_AS(c.validate(), Error);
  };
  bad([](PipelineConfig& c) { c.budgets.clear(); });
  bad([](PipelineConfig& c) { c.budgets = {0, 1}; });
  bad([](PipelineConfig& c) { c.budgets = {-2}; });
  bad([](PipelineConfig& c) { c.budgets = {4, 4}; });
  bad([](PipelineConfig& c) { c.budgets = {8, 4}; });
  bad([](PipelineConfig& c) { c.parallelism = 0; });
  bad([](PipelineConfig& c) { c.max_nodes = 0; });
}

TEST_CASE("one-pair families solve under the default schedule") {
  PipelineConfig cfg;
  cfg.seed = 42;
  for (const DspInstance& inst :
       {gen_grid(3, 3, "unit", "corners", 0),
        gen_grid(4, 3, "random", "corners", 7), gen_crafted("theta"),
        gen_crafted("twocyc"), gen_spiral(2, 1)}) {
    RunReport rep = solve_pipeline(inst, cfg);
    check_valid_yes(inst, rep);
    CHECK(rep.seed == 42);
    CHECK(!rep.timings.empty());
    REQUIRE(rep.parts.size() == 1);
    const PartReport& p = rep.parts[0];
    CHECK(p.k == 1);
    CHECK(p.route == "skeleton");
    CHECK(p.rings >= 1);
    CHECK(p.spinal_paths == 1);
    CHECK(p.spinal_geodesic);
    CHECK(int(p.spinal_load.size()) == p.spinal_paths);
    REQUIRE(!p.rounds.empty());
    check_round_sanity(p);
    CHECK(p.accepted_budget >= 1);
    CHECK(p.accepted_load >= 0);
    CHECK(int(p.accepted_lens.size()) == p.spinal_paths);
  }
}

TEST_CASE("degenerate shapes take the micro route") {
  RunReport yes = solve_pipeline(path2());
  check_valid_yes(path2(), yes);
  REQUIRE(yes.parts.size() == 1);
  CHECK(yes.parts[0].route == "micro: directly adjacent terminal pair");
  CHECK(yes.parts[0].rounds.empty());
  CHECK(*yes.solution == Solution{{0, 1}});

  for (const DspInstance& inst : {star(), gen_crafted("gate")}) {
    RunReport no = solve_pipeline(inst);
    CHECK(no.verdict == Verdict::No);
    CHECK(!no.solution.has_value());
    CHECK(no.reason == "a degenerate part has no solution");
    REQUIRE(no.parts.size() == 1);
    CHECK(no.parts[0].route ==
          "micro: face bounded only by terminal edges");
  }
}

TEST_CASE("coupled pairs accept a small budget") {
  PipelineConfig cfg;
  cfg.budgets = {1, 2};
  RunReport rep = solve_pipeline(quad(), cfg);
  check_valid_yes(quad(), rep);
  CHECK(*rep.solution == Solution{{2, 0, 3}, {4, 1, 5}});
  REQUIRE(rep.parts.size() == 1);
  const PartReport& p = rep.parts[0];
  CHECK(p.k == 2);
  CHECK(p.route == "skeleton");
  CHECK(p.spinal_paths == 5);
  CHECK(p.accepted_budget == 1);
  CHECK(p.accepted_lens == std::vector<int>{1, 0, 1, 0, 0});
  REQUIRE(p.rounds.size() == 1);
  CHECK(p.rounds[0].enumerated == 455);
  check_round_sanity(p);

  // The other backend and a parallel run reach the same witness.
  PipelineConfig shift = cfg;
  shift.backend = HfBackend::ShiftSearch;
  RunReport rep2 = solve_pipeline(quad(), shift);
  check_valid_yes(quad(), rep2);
  CHECK(*rep2.solution == *rep.solution);

  PipelineConfig par = cfg;
  par.parallelism = 4;
  RunReport rep3 = solve_pipeline(quad(), par);
  check_valid_yes(quad(), rep3);
  CHECK(*rep3.solution == *rep.solution);
  CHECK(rep3.parts[0].accepted_budget == 1);
}

TEST_CASE("interleaved pairs exhaust an undersized schedule") {
  PipelineConfig cfg;
  cfg.budgets = {1, 2};
  RunReport rep = solve_pipeline(gen_grid(3, 3, "unit", "corners2", 0), cfg);
  CHECK(rep.verdict == Verdict::BudgetExhausted);
  CHECK(!rep.solution.has_value());
  CHECK(!rep.validated);
  CHECK(rep.reason == "budget schedule stops below the structural bound");
  REQUIRE(rep.parts.size() == 1);
  const PartReport& p = rep.parts[0];
  CHECK(p.k == 2);
  CHECK(p.spinal_paths == 4);
  CHECK(p.accepted_budget == -1);
  CHECK(p.accepted_lens.empty());
  REQUIRE(p.rounds.size() == 2);
  CHECK(p.rounds[0].budget == 1);
  CHECK(p.rounds[0].effective == 1);
  CHECK(p.rounds[1].budget == 2);
  CHECK(p.rounds[1].effective == 2);
  check_round_sanity(p);
  // Budget-monotone streams: the second round extends the first.
  CHECK(p.rounds[1].enumerated > p.rounds[0].enumerated);
}

TEST_CASE("split instances merge their parts") {
  DspInstance inst = gen_grid(3, 3, "unit", "rows2", 0);
  RunReport rep = solve_pipeline(inst);
  check_valid_yes(inst, rep);
  CHECK(*rep.solution == Solution{{0, 1, 2}, {3, 4, 5}});
  REQUIRE(rep.parts.size() == 2);
  for (const PartReport& p : rep.parts) {
    CHECK(p.k == 1);
    CHECK(p.route == "skeleton");
  }
}

TEST_CASE("refusals carry their reduction reasons") {
  RunReport a = solve_pipeline(split_pair());
  CHECK(a.verdict == Verdict::No);
  CHECK(a.reason ==
        "reduction refuted the instance: a terminal pair spans two components");
  CHECK(a.parts.empty());

  RunReport b = solve_pipeline(dup_slot());
  CHECK(b.verdict == Verdict::No);
  CHECK(b.reason ==
        "reduction refuted the instance: a terminal vertex appears in two "
        "pair slots");
}

TEST_CASE("verdicts match the exhaustive reference") {
  PipelineConfig small;
  small.budgets = {1, 2};
  struct Case {
    DspInstance inst;
    PipelineConfig cfg;
  };
  std::vector<Case> cases;
  cases.push_back({gen_grid(3, 3, "unit", "corners", 0), {}});
  cases.push_back({gen_grid(4, 3, "random", "corners", 7), {}});
  cases.push_back({gen_grid(3, 3, "unit", "rows2", 0), {}});
  cases.push_back({gen_crafted("theta"), {}});
  cases.push_back({gen_crafted("twocyc"), {}});
  cases.push_back({gen_crafted("gate"), {}});
  cases.push_back({gen_spiral(2, 1), {}});
  cases.push_back({gen_spiral(2, 2), {}});
  cases.push_back({quad(), small});
  cases.push_back({path2(), {}});
  cases.push_back({star(), {}});
  cases.push_back({split_pair(), {}});
  cases.push_back({dup_slot(), {}});
  for (const Case& c : cases) {
    RunReport fast = solve_pipeline(c.inst, c.cfg);
    RunReport ref = solve_oracle(c.inst);
    REQUIRE(fast.verdict != Verdict::BudgetExhausted);
    CHECK(verdict_name(fast.verdict) == verdict_name(ref.verdict));
    if (fast.verdict == Verdict::Yes) {
      CHECK(fast.validated);
      CHECK(ref.validated);
    }
  }
}

TEST_CASE("runs are deterministic") {
  DspInstance inst = gen_grid(4, 3, "random", "corners", 7);
  RunReport a = solve_pipeline(inst);
  RunReport b = solve_pipeline(inst);
  CHECK(verdict_name(a.verdict) == verdict_name(b.verdict));
  REQUIRE(a.solution.has_value());
  REQUIRE(b.solution.has_value());
  CHECK(*a.solution == *b.solution);
  REQUIRE(a.parts.size() == b.parts.size());
  for (std::size_t i = 0; i < a.parts.size(); ++i) {
    CHECK(a.parts[i].accepted_budget == b.parts[i].accepted_budget);
    CHECK(a.parts[i].accepted_lens == b.parts[i].accepted_lens);
    REQUIRE(a.parts[i].rounds.size() == b.parts[i].rounds.size());
    for (std::size_t j = 0; j < a.parts[i].rounds.size(); ++j) {
      CHECK(a.parts[i].rounds[j].enumerated ==
            b.parts[i].rounds[j].enumerated);
      CHECK(a.parts[i].rounds[j].incompatible ==
            b.parts[i].rounds[j].incompatible);
    }
  }
}

TEST_CASE("oracle reports share the same shape") {
  DspInstance g = gen_grid(3, 3, "unit", "corners", 0);
  RunReport yes = solve_oracle(g);
  CHECK(yes.verdict == Verdict::Yes);
  CHECK(yes.validated);
  REQUIRE(yes.solution.has_value());
  CHECK(*yes.solution == Solution{{0, 1, 2, 5, 8}});
  CHECK(yes.checks.size() == 4);
  CHECK(!yes.timings.empty());

  RunReport no = solve_oracle(gen_grid(3, 3, "unit", "corners2", 0));
  CHECK(no.verdict == Verdict::No);
  CHECK(no.reason == "exhaustive search found no disjoint geodesic family");

  RunReport off = solve_oracle(split_pair());
  CHECK(off.verdict == Verdict::No);
  CHECK(off.reason == "terminals lie in different components");
}
