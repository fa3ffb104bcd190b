#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "pdsp/generators.hpp"
#include "pdsp/plane_graph.hpp"

using namespace pdsp;

namespace {

// Triangle 0-1-2 drawn with 0 on top, 1 bottom right, 2 bottom left.
PlaneMultigraph triangle() {
  std::vector<EdgeRec> es = {{0, 1}, {1, 2}, {2, 0}};
  return PlaneMultigraph::build(3, es, {{0, 2}, {0, 1}, {2, 1}});
}

void check_invariants(const PlaneMultigraph& g) {
  for (int d = 0; d < g.dart_count(); ++d) {
    CHECK(g.next(g.prev(d)) == d);
    CHECK(g.prev(g.next(d)) == d);
    CHECK(g.tail(g.next(d)) == g.tail(d));
    CHECK(g.head(d) == g.tail(PlaneMultigraph::pair_dart(d)));
    CHECK(g.face_right(d) == g.face_left(d ^ 1));
  }
  // Every dart sits on exactly one face walk, at the face to its left.
  std::vector<int> seen(g.dart_count(), 0);
  for (int f = 0; f < g.face_count(); ++f)
    for (int d : g.face_walk(f)) {
      seen[d]++;
      CHECK(g.face_left(d) == f);
    }
  for (int d = 0; d < g.dart_count(); ++d) CHECK(seen[d] == 1);
}

} // namespace

TEST_CASE("triangle embedding") {
  PlaneMultigraph g = triangle();
  CHECK(g.n() == 3);
  CHECK(g.m() == 3);
  CHECK(g.face_count() == 2);
  CHECK(g.connected());
  check_invariants(g);
  for (int f = 0; f < 2; ++f) CHECK(g.face_walk(f).size() == 3);
  CHECK(g.find_edge(0, 1).has_value());
  CHECK(g.find_edge(1, 0).has_value());
  CHECK(!g.find_edge(0, 0).has_value());
  CHECK(g.find_dart(2, 0) == 4);
  CHECK(g.find_dart(0, 2) == 5);
}

TEST_CASE("grid embedding and dual") {
  PlaneMultigraph g = gen_grid(3, 3, "unit", "corners", 1).g;
  CHECK(g.n() == 9);
  CHECK(g.m() == 12);
  CHECK(g.face_count() == 5);
  check_invariants(g);
  CHECK(g.face_walk(g.outer_face()).size() == 8);

  PlaneMultigraph d = g.dual();
  CHECK(d.n() == 5);
  CHECK(d.m() == 12);
  CHECK(d.face_count() == 9);
  check_invariants(d);
  // Dual darts run face_left -> face_right of the host dart.
  for (int dd = 0; dd < d.dart_count(); ++dd) {
    CHECK(d.tail(dd) == g.face_left(dd));
    CHECK(d.head(dd) == g.face_right(dd));
  }
  // The double dual restores the host counts.
  PlaneMultigraph dd = d.dual();
  CHECK(dd.n() == 9);
  CHECK(dd.m() == 12);
  CHECK(dd.face_count() == 5);
}

TEST_CASE("self-loop bouquet") {
  std::vector<EdgeRec> es = {{0, 0}, {0, 0}};
  // Nested placement is planar: loop 0, then loop 1 beside it.
  PlaneMultigraph g = PlaneMultigraph::build(1, es, {{0, 0, 1, 1}});
  CHECK(g.face_count() == 3);
  check_invariants(g);
  // Interleaving the same loops is a torus embedding.
  CHECK_THROWS_AS(PlaneMultigraph::build(1, es, {{0, 1, 0, 1}}),
                  Error);
}

TEST_CASE("parallel edges") {
  std::vector<EdgeRec> es = {{0, 1}, {0, 1}};
  PlaneMultigraph g = PlaneMultigraph::build(2, es, {{0, 1}, {1, 0}});
  CHECK(g.face_count() == 2);
  check_invariants(g);
}

TEST_CASE("build rejects bad input") {
  std::vector<EdgeRec> es = {{0, 1, Rat(0)}};
  CHECK_THROWS_AS(PlaneMultigraph::build(2, es, {{0}, {0}}), Error);
  std::vector<EdgeRec> ok = {{0, 1}};
  CHECK_THROWS_AS(PlaneMultigraph::build(2, ok, {{0, 0}, {0}}), Error);
  CHECK_THROWS_AS(PlaneMultigraph::build(2, ok, {{0}, {}}), Error);
}

TEST_CASE("disconnected components") {
  std::vector<EdgeRec> es = {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}};
  PlaneMultigraph g = PlaneMultigraph::build(
      6, es, {{0, 2}, {0, 1}, {2, 1}, {3, 5}, {3, 4}, {5, 4}});
  CHECK(g.component_count() == 2);
  CHECK(!g.connected());
  CHECK(g.face_count() == 4);
  CHECK(g.component_of(0) == g.component_of(2));
  CHECK(g.component_of(0) != g.component_of(3));
  auto comps = components(g);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == std::vector<int>({0, 1, 2}));
  CHECK(comps[1] == std::vector<int>({3, 4, 5}));
  CHECK(induces_connected(g, {0, 1}));
  CHECK(!induces_connected(g, {0, 3}));
  CHECK(!induces_connected(g, {}));
}

TEST_CASE("separating dual cycle") {
  PlaneMultigraph g = triangle();
  DualCycle c = separating_dual_cycle(g, {0});
  CHECK(c.inside == std::vector<int>({0}));
  std::set<int> cut;
  for (int d : c.crossed) cut.insert(PlaneMultigraph::dart_edge(d));
  CHECK(cut == std::set<int>({0, 2}));
  CHECK(c.edge_set == std::vector<int>({0, 2}));

  PlaneMultigraph grid = gen_grid(3, 3, "unit", "corners", 1).g;
  DualCycle row = separating_dual_cycle(grid, {0, 1, 2});
  CHECK(row.inside == std::vector<int>({0, 1, 2}));
  CHECK(row.edge_set.size() == 3);
  for (int e : row.edge_set) {
    auto& er = grid.edge(e);
    CHECK(std::abs(er.u - er.v) == 3); // all three are vertical edges
  }
  CHECK_THROWS_AS(separating_dual_cycle(grid, {0, 8}), Error);
  CHECK_THROWS_AS(separating_dual_cycle(grid, {}), Error);
}

TEST_CASE("annulus footprint") {
  PlaneMultigraph grid = gen_grid(3, 3, "unit", "corners", 1).g;
  DualCycle c1 = separating_dual_cycle(grid, {0, 1, 2});
  DualCycle c2 = separating_dual_cycle(grid, {0, 1, 2, 3, 4, 5});
  RegionFootprint fp = region_footprint(grid, c1, c2);
  CHECK(fp.vertices == std::vector<int>({3, 4, 5}));
  CHECK(fp.edges.size() == 8);
  CHECK(fp.faces.empty());

  RegionFootprint same = region_footprint(grid, c1, c1);
  CHECK(same.vertices.empty());
  CHECK(same.edges.empty());
  CHECK(same.faces.empty());
  CHECK(same.disjoint(fp));

  // Cut around the first column crosses the cut around the first row.
  DualCycle col = separating_dual_cycle(grid, {0, 3, 6});
  CHECK_THROWS_AS(region_footprint(grid, c1, col), Error);
}

TEST_CASE("wider annulus keeps middle faces") {
  PlaneMultigraph grid = gen_grid(4, 3, "unit", "corners", 1).g;
  DualCycle c1 = separating_dual_cycle(grid, {0, 1, 2});
  DualCycle c2 =
      separating_dual_cycle(grid, {0, 1, 2, 3, 4, 5, 6, 7, 8});
  RegionFootprint fp = region_footprint(grid, c1, c2);
  CHECK(fp.vertices == std::vector<int>({3, 4, 5, 6, 7, 8}));
  // The two squares of the middle strip lie strictly between the curves.
  CHECK(fp.faces.size() == 2);
}
