#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "pdsp/brute_force.hpp"
#include "pdsp/generators.hpp"
#include "pdsp/rings.hpp"

using namespace pdsp;

namespace {

NiceInstance as_nice(DspInstance inst) {
  NiceInstance ni;
  ni.oracle = std::make_shared<DistanceOracle>(inst.g);
  ni.orig_vertex.resize(inst.g.n());
  for (int v = 0; v < inst.g.n(); ++v) ni.orig_vertex[v] = v;
  for (int i = 0; i < inst.k(); ++i) ni.orig_pair.push_back(i);
  ni.inst = std::move(inst);
  return ni;
}

// Path 0-1-2-3-4 with terminals at the ends.
NiceInstance path5() {
  std::vector<EdgeRec> es = {{0, 1}, {1, 2}, {2, 3}, {3, 4}};
  PlaneMultigraph g =
      PlaneMultigraph::build(5, es, {{0}, {0, 1}, {1, 2}, {2, 3}, {3}});
  return as_nice({std::move(g), {{0, 4}}});
}

// Star: center 1, legs to 0, 2, 3, 4; pairs (0,2) and (3,4) both pass the
// center, so the instance is unsolvable but still nice.
NiceInstance star() {
  std::vector<EdgeRec> es = {{0, 1}, {1, 2}, {3, 1}, {4, 1}};
  PlaneMultigraph g = PlaneMultigraph::build(
      5, es, {{0}, {0, 2, 1, 3}, {1}, {2}, {3}});
  return as_nice({std::move(g), {{0, 2}, {3, 4}}});
}

} // namespace

TEST_CASE("splitting partitions") {
  std::vector<std::pair<int, int>> terms = {{0, 8}, {2, 6}};
  auto both = split_sets(terms, {0, 2}, {6, 8});
  REQUIRE(both.has_value());
  CHECK(both->split ==
        std::vector<std::pair<int, int>>({{0, 8}, {2, 6}}));
  CHECK(both->same_side ==
        std::vector<std::pair<int, int>>({{0, 2}, {6, 8}}));

  auto one = split_sets(terms, {0, 6}, {2, 8});
  REQUIRE(one.has_value());
  CHECK(one->split.size() == 2);
  // Split pairs are reported X-side first.
  CHECK(one->split[1] == std::pair<int, int>(6, 2));

  CHECK(!split_sets(terms, {0, 8}, {2, 6}).has_value());
  CHECK_THROWS_AS(split_sets(terms, {0, 2}, {2, 8}), Error);  // overlap
  CHECK_THROWS_AS(split_sets(terms, {0, 2, 6}, {}), Error);   // empty side
  CHECK_THROWS_AS(split_sets(terms, {0}, {8}), Error); // missing terminals
}

TEST_CASE("cut validation on a path") {
  NiceInstance ni = path5();
  auto part = split_sets(ni.inst.terminals, {0}, {4});
  REQUIRE(part.has_value());
  PartitionDags pd = build_partition_dags(ni, *part);
  REQUIRE(pd.split_dags.size() == 1);
  CHECK(pd.sameside_dags.empty());
  CHECK(pd.split_dags[0].s == 0);
  CHECK(pd.split_dags[0].t == 4);

  CutViolation why;
  CHECK(validate_dag_cut(ni, pd, {1, 0, 0, 0, 0}, {0}, {4}, &why));
  CHECK(why.condition == 0);
  CHECK(validate_dag_cut(ni, pd, {1, 1, 1, 0, 0}, {0}, {4}, &why));

  CHECK(!validate_dag_cut(ni, pd, {0, 1, 1, 1, 1}, {0}, {4}, &why));
  CHECK(why.condition == 1);
  CHECK(!validate_dag_cut(ni, pd, {1, 0, 1, 0, 0}, {0}, {4}, &why));
  CHECK(why.condition == 2);
}

TEST_CASE("cut lattice of a path") {
  NiceInstance ni = path5();
  auto part = split_sets(ni.inst.terminals, {0}, {4});
  PartitionDags pd = build_partition_dags(ni, *part);

  auto cuts = brute_force_cuts(ni, pd, {0}, {4});
  CHECK(cuts.size() == 4);
  for (const auto& c : cuts) CHECK(c.cut_edges.size() == 1);

  auto pushed = maximally_pushed_cuts(ni, pd, {0}, {4});
  REQUIRE(pushed.has_value());
  CHECK(pushed->first.vx == std::vector<int>({0}));
  CHECK(pushed->second.vx == std::vector<int>({0, 1, 2, 3}));
  for (const auto& c : cuts) {
    CHECK(pushed->first.below(c));
    CHECK(c.below(pushed->second));
    CHECK(c.below(c));
  }
  CHECK(!pushed->second.below(pushed->first));
}

TEST_CASE("maximal ring of a path") {
  NiceInstance ni = path5();
  auto part = split_sets(ni.inst.terminals, {0}, {4});
  PartitionDags pd = build_partition_dags(ni, *part);
  auto ring = maximal_ring(ni, pd, {0}, {4});
  REQUIRE(ring.has_value());
  CHECK(ring->ux == std::vector<int>({0}));
  CHECK(ring->umid == std::vector<int>({1, 2, 3}));
  CHECK(ring->uy == std::vector<int>({4}));
  CHECK(ring->footprint.vertices == std::vector<int>({1, 2, 3}));

  DagStructure ds = dag_structure(ni, pd, *ring);
  CHECK(ds.verts == std::vector<int>({1, 2, 3}));
  CHECK(ds.arcs ==
        std::vector<std::pair<int, int>>({{1, 2}, {2, 3}}));
  CHECK(ds.tx == std::vector<int>({1}));
  CHECK(ds.ty == std::vector<int>({3}));

  // Crossing counts with class-specific assertions.
  CHECK(crossing_count(ni.inst.g, {0, 1, 2, 3, 4}, ring->inner,
                       PairClass::Split) == 1);
  CHECK(crossing_count(ni.inst.g, {1, 2, 3}, ring->inner,
                       PairClass::Other) == 0);
}

TEST_CASE("anchored star admits no cut") {
  NiceInstance ni = star();
  auto part = split_sets(ni.inst.terminals, {0, 3}, {2, 4});
  REQUIRE(part.has_value());
  CHECK(part->split.size() == 2);
  CHECK(part->same_side ==
        std::vector<std::pair<int, int>>({{0, 3}, {2, 4}}));
  PartitionDags pd = build_partition_dags(ni, *part);
  CHECK(pd.sameside_dags.size() == 2);

  CHECK(brute_force_cuts(ni, pd, {0, 3}, {2, 4}).empty());
  CHECK(!maximally_pushed_cuts(ni, pd, {0, 3}, {2, 4}).has_value());
  CHECK(!maximal_ring(ni, pd, {0, 3}, {2, 4}).has_value());
}

TEST_CASE("pushed cuts agree with the brute extremes") {
  DspInstance grid = gen_grid(3, 3, "unit", "corners2", 1);
  MakeNiceResult res = make_nice(grid);
  REQUIRE(res.parts.size() == 1);
  const NiceInstance& ni = res.parts[0];
  // Pendant ids follow the original vertices in attachment order.
  auto& terms = ni.inst.terminals;
  std::vector<int> X = {terms[0].first, terms[1].first};
  std::vector<int> Y = {terms[0].second, terms[1].second};
  auto part = split_sets(terms, X, Y);
  REQUIRE(part.has_value());
  PartitionDags pd = build_partition_dags(ni, *part);
  auto cuts = brute_force_cuts(ni, pd, X, Y);
  auto pushed = maximally_pushed_cuts(ni, pd, X, Y);
  if (cuts.empty()) {
    CHECK(!pushed.has_value());
  } else {
    REQUIRE(pushed.has_value());
    for (const auto& c : cuts) {
      CHECK(pushed->first.below(c));
      CHECK(c.below(pushed->second));
    }
    // The extremes are themselves valid cuts.
    auto in_set = [&](const DagCut& c) {
      for (const auto& o : cuts)
        if (o.vx == c.vx) return true;
      return false;
    };
    CHECK(in_set(pushed->first));
    CHECK(in_set(pushed->second));
  }
}

TEST_CASE("decomposition of a spiral") {
  DspInstance sp = gen_spiral(2, 1);
  MakeNiceResult res = make_nice(sp);
  REQUIRE(!res.no_instance);
  REQUIRE(res.parts.size() == 1);
  const NiceInstance& ni = res.parts[0];
  std::vector<int> superset;
  for (auto [s, t] : ni.inst.terminals) {
    superset.push_back(s);
    superset.push_back(t);
  }
  RingDecomposition R = decompose(ni, superset);
  CHECK(R.exhaustive);
  CHECK((int)R.entries.size() <= 2 * (int)superset.size() - 2);
  REQUIRE(R.entries.size() >= 1);
  const DagRing& ring = R.entries[0].ring;
  CHECK(!ring.umid.empty());
  DagStructure ds = dag_structure(ni, build_partition_dags(ni, R.entries[0].part), ring);
  CHECK(ds.verts == ring.umid);
  CHECK(!ds.tx.empty());
  CHECK(!ds.ty.empty());
}

TEST_CASE("decomposition respects solution crossing bounds") {
  DspInstance grid = gen_grid(3, 3, "unit", "corners2", 1);
  MakeNiceResult res = make_nice(grid);
  REQUIRE(res.parts.size() == 1);
  const NiceInstance& ni = res.parts[0];
  std::vector<int> superset;
  for (auto [s, t] : ni.inst.terminals) {
    superset.push_back(s);
    superset.push_back(t);
  }
  RingDecomposition R = decompose(ni, superset);
  CHECK(R.exhaustive);

  auto sol = brute_force_solve(annotate(ni.inst, *ni.oracle));
  if (sol) {
    for (const auto& entry : R.entries) {
      for (int i = 0; i < ni.inst.k(); ++i) {
        auto [s, t] = ni.inst.terminals[i];
        bool is_split = false, x_first = false;
        for (auto [a, b] : entry.part.split) {
          if (a == s && b == t) is_split = x_first = true;
          if (a == t && b == s) is_split = true;
        }
        std::vector<int> p = (*sol)[i];
        if (is_split && !x_first) std::reverse(p.begin(), p.end());
        PairClass cls = is_split ? PairClass::Split : PairClass::SameSide;
        int c1 = crossing_count(ni.inst.g, p, entry.ring.inner, cls);
        int c2 = crossing_count(ni.inst.g, p, entry.ring.outer, cls);
        if (is_split) {
          CHECK(c1 == 1);
          CHECK(c2 == 1);
        } else {
          CHECK(c1 == 0);
          CHECK(c2 == 0);
        }
      }
    }
  }
}
