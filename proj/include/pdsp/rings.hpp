#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdsp/geodesics.hpp"
#include "pdsp/instances.hpp"
#include "pdsp/plane_graph.hpp"

namespace pdsp {

// Bipartition (X, Y) of a chosen vertex superset of the terminals, with the
// terminal pairs it separates.  `split` holds pairs ordered X-side first;
// `same_side` holds the unordered (smaller id first) pairs of superset
// vertices lying in a common part.
struct SplittingPartition {
  std::vector<int> X, Y;  // sorted, disjoint, union = superset
  std::vector<std::pair<int, int>> split;
  std::vector<std::pair<int, int>> same_side;
};

// nullopt when no terminal pair is separated.  X and Y must be disjoint,
// nonempty, and their union must contain every terminal vertex.
std::optional<SplittingPartition> split_sets(
    const std::vector<std::pair<int, int>>& terminals,
    const std::vector<int>& X, const std::vector<int>& Y);

// Shortest-path dags for one partition: one dag per split pair (oriented
// X-side to Y-side) and one per same-side pair (oriented small id to large).
struct PartitionDags {
  SplittingPartition part;
  std::vector<OrientedDag> split_dags;
  std::vector<OrientedDag> sameside_dags;
};

PartitionDags build_partition_dags(const NiceInstance& ni,
                                   const SplittingPartition& part);

// Vertex bipartition of the whole graph whose crossing edges all run along
// every split pair's shortest paths and along no same-side pair's.
struct DagCut {
  std::vector<int> vx, vy;       // sorted
  std::vector<int> cut_edges;    // sorted edge ids

  // Order by inclusion of the X side.
  bool below(const DagCut& o) const;
};

struct CutViolation {
  int condition = 0;  // 1..3 per the defining conditions, 0 = none
  std::string detail;
};

// Checks the three cut conditions for the bipartition given by `in_x`
// (vertex membership on the X side) with anchor sets W_X, W_Y.  When all
// three hold, side connectivity is asserted (it is a consequence, not an
// input condition).
bool validate_dag_cut(const NiceInstance& ni, const PartitionDags& pd,
                      const std::vector<char>& in_x,
                      const std::vector<int>& W_X, const std::vector<int>& W_Y,
                      CutViolation* why = nullptr);

// The two extreme cuts for the given anchors: gamma_min with the smallest
// possible X side and gamma_max with the largest.  Built by closing W_X and
// W_Y under the auxiliary digraphs that forbid crossing non-cut-capable
// edges; every valid cut lies between the two in the `below` order.
// nullopt when no cut exists for these anchors.
std::optional<std::pair<DagCut, DagCut>> maximally_pushed_cuts(
    const NiceInstance& ni, const PartitionDags& pd,
    const std::vector<int>& W_X, const std::vector<int>& W_Y);

// Annular region between two nested cuts.
struct DagRing {
  std::vector<int> ux, umid, uy;  // sorted tripartition of V
  DagCut inner, outer;            // inner = smallest X side
  DualCycle cyc_inner, cyc_outer;
  RegionFootprint footprint;      // material strictly between the cycles
};

// The largest ring for the given anchors: takes the maximally pushed cuts
// and verifies that no edge joins the two outer sides and that every way of
// entering and leaving the middle region lies on a common shortest path of
// every split pair (checked by an exact distance identity).  nullopt when
// any step fails, in which case no ring exists for these anchors.
std::optional<DagRing> maximal_ring(const NiceInstance& ni,
                                    const PartitionDags& pd,
                                    const std::vector<int>& W_X,
                                    const std::vector<int>& W_Y);

// Orientation of the ring's middle region: every interior edge carries the
// unique direction shared by all split dags (OrientationConflict otherwise,
// which would signal an invalid ring).  tx/ty are the middle vertices
// adjacent to the X / Y side.  The digraph is asserted acyclic.
struct DagStructure {
  std::vector<int> verts;                 // sorted middle vertices
  std::vector<std::pair<int, int>> arcs;  // oriented interior edges
  std::vector<int> tx, ty;                // sorted attachment sets
};

DagStructure dag_structure(const NiceInstance& ni, const PartitionDags& pd,
                           const DagRing& ring);

struct RingDecomposition {
  struct Entry {
    SplittingPartition part;
    DagRing ring;
  };
  std::vector<Entry> entries;
  bool exhaustive = false;
};

// Anchor sets that make "extends the decomposition" equivalent to "is a cut
// for these anchors": the partition's own sides, widened by the far sides of
// every ring whose partition nests inside X or Y.  nullopt when the
// partition crosses an existing one, in which case no extension exists.
std::optional<std::pair<std::vector<int>, std::vector<int>>> extension_anchors(
    const RingDecomposition& R, const SplittingPartition& part);

// Greedy exhaustive decomposition over all splitting partitions of the
// superset: repeatedly adds the extension with the largest middle region
// (ties: least partition bitmask) until none exists.  The result satisfies
// the 2|superset|-2 bound on the number of rings.
RingDecomposition decompose(const NiceInstance& ni,
                            const std::vector<int>& superset);

// All valid cuts for the anchors by exhaustive bipartition search; the
// instance must have at most max_vertices vertices.
std::vector<DagCut> brute_force_cuts(const NiceInstance& ni,
                                     const PartitionDags& pd,
                                     const std::vector<int>& W_X,
                                     const std::vector<int>& W_Y,
                                     int max_vertices = 22);

// Number of path edges crossing the cut.  For a geodesic of a split pair
// this is at most 1 and for a same-side pair exactly 0; passing the class
// turns those facts into checked assertions.
enum class PairClass { Split, SameSide, Other };
int crossing_count(const PlaneMultigraph& g, const std::vector<int>& path,
                   const DagCut& cut, PairClass cls = PairClass::Other);

}  // namespace pdsp
