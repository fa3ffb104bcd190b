#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pdsp/brute_force.hpp"
#include "pdsp/generators.hpp"
#include "pdsp/instances.hpp"
#include "pdsp/json_io.hpp"

using namespace pdsp;

namespace {

// Weighted 4-cycle with one expensive edge, terminals across it.
DspInstance square_inst() {
  std::vector<EdgeRec> es = {{0, 1, Rat(1)}, {1, 2, Rat(1)},
                             {2, 3, Rat(5)}, {3, 0, Rat(1)}};
  PlaneMultigraph g =
      PlaneMultigraph::build(4, es, {{0, 3}, {0, 1}, {1, 2}, {2, 3}});
  return {std::move(g), {{0, 2}}};
}

} // namespace

TEST_CASE("niceness recognition") {
  std::vector<EdgeRec> es = {{0, 1}};
  PlaneMultigraph g = PlaneMultigraph::build(2, es, {{0}, {0}});
  DspInstance inst{std::move(g), {{0, 1}}};
  std::string why;
  CHECK(is_nice(inst, &why));

  DspInstance grid = gen_grid(3, 3, "unit", "corners", 1);
  CHECK(!is_nice(grid, &why)); // corner terminals have degree 2
  CHECK(!why.empty());
}

TEST_CASE("make_nice attaches pendants") {
  DspInstance grid = gen_grid(3, 3, "unit", "corners", 1);
  MakeNiceResult res = make_nice(grid);
  REQUIRE(!res.no_instance);
  REQUIRE(res.parts.size() == 1);
  const NiceInstance& part = res.parts[0];
  CHECK(part.inst.g.n() == 11); // grid plus two pendant leaves
  CHECK(part.inst.g.m() == 14);
  CHECK(is_nice(part.inst));
  CHECK(part.orig_pair == std::vector<int>({0}));
  int pendants = 0;
  for (int ov : part.orig_vertex) pendants += (ov == -1);
  CHECK(pendants == 2);

  // Solve the part and carry the paths home.
  auto sol = brute_force_solve(annotate(part.inst, *part.oracle));
  REQUIRE(sol.has_value());
  Solution orig(grid.k());
  transport_back(part, *sol, orig);
  CHECK(check_solution(grid, orig).ok(false));
  CHECK(orig[0].front() == 0);
  CHECK(orig[0].back() == 8);
}

TEST_CASE("make_nice drops edges off every dag") {
  DspInstance sq = square_inst();
  MakeNiceResult res = make_nice(sq);
  REQUIRE(!res.no_instance);
  REQUIRE(res.parts.size() == 1);
  const NiceInstance& part = res.parts[0];
  // Vertex 3 and the two heavy-side edges disappear; two pendants arrive.
  CHECK(part.inst.g.n() == 5);
  CHECK(part.inst.g.m() == 4);
  CHECK(is_nice(part.inst));
  for (int v = 0; v < part.inst.g.n(); ++v) CHECK(part.orig_vertex[v] != 3);
}

TEST_CASE("make_nice splits components") {
  std::vector<EdgeRec> es = {{0, 1}, {1, 2}, {3, 4}};
  PlaneMultigraph g =
      PlaneMultigraph::build(5, es, {{0}, {0, 1}, {1}, {2}, {2}});
  DspInstance inst{std::move(g), {{0, 2}, {3, 4}}};
  MakeNiceResult res = make_nice(inst);
  REQUIRE(!res.no_instance);
  REQUIRE(res.parts.size() == 2);
  CHECK(res.parts[0].orig_pair == std::vector<int>({0}));
  CHECK(res.parts[1].orig_pair == std::vector<int>({1}));
  Solution orig(inst.k());
  for (const NiceInstance& part : res.parts) {
    auto sol = brute_force_solve(annotate(part.inst, *part.oracle));
    REQUIRE(sol.has_value());
    transport_back(part, *sol, orig);
  }
  CHECK(check_solution(inst, orig).ok(false));
}

TEST_CASE("make_nice definitive refusals") {
  std::vector<EdgeRec> es = {{0, 1}, {1, 2}, {2, 0}};
  PlaneMultigraph tri =
      PlaneMultigraph::build(3, es, {{0, 2}, {0, 1}, {2, 1}});
  DspInstance shared{tri, {{0, 1}, {1, 2}}};
  MakeNiceResult r1 = make_nice(shared);
  CHECK(r1.no_instance);
  CHECK(!r1.reason.empty());

  std::vector<EdgeRec> one = {{0, 1}};
  PlaneMultigraph g2 = PlaneMultigraph::build(3, one, {{0}, {0}, {}});
  DspInstance split{std::move(g2), {{0, 2}}};
  MakeNiceResult r2 = make_nice(split);
  CHECK(r2.no_instance);
}

TEST_CASE("annotation matches the pair dags") {
  DspInstance grid = gen_grid(3, 3, "unit", "corners2", 1);
  DapInstance dap = annotate(grid);
  REQUIRE(dap.annotations.size() == 2);
  DistanceOracle oracle(grid.g);
  for (int i = 0; i < grid.k(); ++i) {
    auto [s, t] = grid.terminals[i];
    OrientedDag dag = st_dag(grid.g, oracle, s, t);
    CHECK(dap.annotations[i] == dag.arc);
  }
}

TEST_CASE("solution checking") {
  DspInstance grid = gen_grid(3, 3, "unit", "corners", 1);
  CHECK(check_solution(grid, {{0, 1, 2, 5, 8}}).ok(false));
  CHECK(check_solution(grid, {{0, 3, 4, 5, 8}}).ok(false));

  CheckReport wrong_end = check_solution(grid, {{0, 1, 2, 5}});
  CHECK(wrong_end.paths_exist);
  CHECK(!wrong_end.endpoints_match);

  CheckReport no_edge = check_solution(grid, {{0, 4, 8}});
  CHECK(!no_edge.paths_exist);

  DspInstance two = gen_grid(3, 3, "unit", "corners2", 1);
  CheckReport overlap =
      check_solution(two, {{0, 1, 4, 5, 8}, {2, 1, 4, 3, 6}});
  CHECK(overlap.paths_exist);
  CHECK(!overlap.disjoint);
  CheckReport fine =
      check_solution(two, {{0, 3, 4, 5, 8}, {2, 1, 4, 7, 6}});
  CHECK(fine.paths_exist);
  CHECK(fine.endpoints_match);
  CHECK(!fine.disjoint); // both use the center
  CheckReport good = check_solution(two, {{0, 1, 2, 5, 8}, {2, 1, 4, 3, 6}});
  CHECK(!good.disjoint); // first path runs through terminal 2

  DspInstance sq = square_inst();
  CheckReport detour = check_solution(sq, {{0, 3, 2}});
  CHECK(detour.paths_exist);
  CHECK(detour.endpoints_match);
  CHECK(!detour.geodesic);
}

TEST_CASE("annotated solution checking") {
  DspInstance grid = gen_grid(3, 3, "unit", "corners", 1);
  DapInstance dap = annotate(grid);
  CHECK(check_solution(dap, {{0, 1, 2, 5, 8}}).ok(true));
  CheckReport rev = check_solution(dap, {{8, 5, 2, 1, 0}});
  CHECK(!rev.endpoints_match); // runs t -> s
  CHECK(!rev.in_annotation);
}

TEST_CASE("planar dag reduction") {
  // Arcs 0->1, 1->2, 0->2 with the triangle embedding.
  std::vector<EdgeRec> es = {{0, 1}, {1, 2}, {0, 2}};
  PlaneMultigraph dag =
      PlaneMultigraph::build(3, es, {{0, 2}, {0, 1}, {2, 1}});
  auto red = reduce_dag_to_dsp(dag, {{0, 2}});
  REQUIRE(red.has_value());
  CHECK(red->inst.g.n() == 4); // one subdivision point on the long arc
  CHECK(red->inst.g.m() == 4);
  CHECK(red->topo_pos[0] == 0);
  CHECK(red->topo_pos[1] == 1);
  CHECK(red->topo_pos[2] == 2);
  for (const auto& er : red->inst.g.edges()) CHECK(er.w == Rat(1));
  DistanceOracle oracle(red->inst.g);
  CHECK(*oracle.d(red->vertex_map[0], red->vertex_map[2]) == Rat(2));
  auto sol = brute_force_solve(annotate(red->inst));
  REQUIRE(sol.has_value());
  CHECK((*sol)[0].size() == 3);

  // A directed cycle is malformed input.
  std::vector<EdgeRec> cyc = {{0, 1}, {1, 2}, {2, 0}};
  PlaneMultigraph cg =
      PlaneMultigraph::build(3, cyc, {{0, 2}, {0, 1}, {2, 1}});
  CHECK_THROWS_AS(reduce_dag_to_dsp(cg, {{0, 2}}), Error);

  // An unreachable pair makes the reduction refuse: no directed path exists.
  std::vector<EdgeRec> in = {{0, 1}, {2, 1}};
  PlaneMultigraph ig = PlaneMultigraph::build(3, in, {{0}, {0, 1}, {1}});
  CHECK(!reduce_dag_to_dsp(ig, {{0, 2}}).has_value());
}

TEST_CASE("json round trips") {
  DspInstance grid = gen_grid(3, 3, "random", "corners2", 7);
  std::string text = dsp_to_json(grid);
  DspInstance back = dsp_from_json(text);
  CHECK(dsp_to_json(back) == text);
  CHECK(back.g.n() == grid.g.n());
  CHECK(back.g.m() == grid.g.m());
  CHECK(back.terminals == grid.terminals);
  CHECK(back.g.outer_face() == grid.g.outer_face());
  for (int e = 0; e < grid.g.m(); ++e)
    CHECK(back.g.edge(e).w == grid.g.edge(e).w);
  for (int d = 0; d < grid.g.dart_count(); ++d)
    CHECK(back.g.next(d) == grid.g.next(d));

  DapInstance dap = annotate(grid);
  std::string dtext = dap_to_json(dap);
  DapInstance dback = dap_from_json(dtext);
  CHECK(dap_to_json(dback) == dtext);
  CHECK(dback.annotations == dap.annotations);

  Solution sol = {{0, 1, 2}, {5}};
  CHECK(solution_from_json(solution_to_json(sol)) == sol);

  CHECK_THROWS_AS(dsp_from_json("not json"), Error);
  CHECK_THROWS_AS(dsp_from_json("{}"), Error);
  CHECK_THROWS_AS(load_dsp("/nonexistent/file.pdsp.json"), Error);
}

TEST_CASE("json files round trip on disk") {
  DspInstance grid = gen_grid(2, 3, "unit", "corners", 1);
  std::string path = "/tmp/pdsp_test_roundtrip.pdsp.json";
  save_text(path, dsp_to_json(grid));
  DspInstance back = load_dsp(path);
  CHECK(dsp_to_json(back) == dsp_to_json(grid));
}
