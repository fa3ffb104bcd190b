#pragma once

#include "pdsp/base.hpp"

#include <optional>
#include <vector>

namespace pdsp {

// Combinatorial embedding of a multigraph in the sphere.
//
// Edge e contributes two darts: dart 2e runs u(e) -> v(e), dart 2e+1 runs
// v(e) -> u(e).  The rotation at a vertex lists the darts leaving it in
// clockwise geometric order.  Faces are the orbits of d -> next(pair(d));
// with clockwise rotations this walk keeps the traced face on the LEFT of
// every dart it contains.
struct EdgeRec {
  int u = -1, v = -1;
  Rat w = Rat(1);
};

class PlaneMultigraph {
public:
  PlaneMultigraph() = default;

  // `rot_edges[v]` lists incident edge ids clockwise.  A self-loop at v
  // appears twice; its first occurrence is taken as dart 2e.
  static PlaneMultigraph build(int n, std::vector<EdgeRec> edges,
                               const std::vector<std::vector<int>>& rot_edges,
                               std::optional<int> outer_hint = std::nullopt);

  // Same, but rotations given directly as dart ids.
  static PlaneMultigraph build_darts(int n, std::vector<EdgeRec> edges,
                                     std::vector<std::vector<int>> rot_darts,
                                     std::optional<int> outer_hint = std::nullopt);

  int n() const { return n_; }
  int m() const { return int(edges_.size()); }
  int dart_count() const { return 2 * m(); }
  const EdgeRec& edge(int e) const { return edges_[e]; }
  const std::vector<EdgeRec>& edges() const { return edges_; }

  static int pair_dart(int d) { return d ^ 1; }
  static int dart_edge(int d) { return d >> 1; }
  static int edge_dart(int e, bool forward) { return 2 * e + (forward ? 0 : 1); }
  int tail(int d) const { return (d & 1) ? edges_[d >> 1].v : edges_[d >> 1].u; }
  int head(int d) const { return tail(d ^ 1); }

  const std::vector<int>& darts_out(int v) const { return rot_[v]; }
  int degree(int v) const { return int(rot_[v].size()); }
  int next(int d) const { return next_[d]; }   // clockwise successor at tail(d)
  int prev(int d) const { return prev_[d]; }

  int face_count() const { return int(face_walks_.size()); }
  int face_of(int d) const { return face_of_[d]; }       // face left of d
  int face_left(int d) const { return face_of_[d]; }
  int face_right(int d) const { return face_of_[d ^ 1]; }
  const std::vector<int>& face_walk(int f) const { return face_walks_[f]; }
  int outer_face() const { return outer_face_; }

  int component_count() const { return comp_count_; }
  int component_of(int v) const { return comp_of_[v]; }
  bool connected() const { return comp_count_ == 1; }

  // Geometric dual.  Vertex f of the dual is face f of this graph, edge e of
  // the dual crosses edge e, and dart d of the dual runs from face_left(d)
  // to face_right(d).  Dual edge weights are all 1.
  PlaneMultigraph dual() const;

  // Finds the edge id of u-v if present (first match).
  std::optional<int> find_edge(int u, int v) const;
  // Dart u->v if such an edge exists.
  std::optional<int> find_dart(int u, int v) const;

private:
  int n_ = 0;
  std::vector<EdgeRec> edges_;
  std::vector<std::vector<int>> rot_;
  std::vector<int> next_, prev_;
  std::vector<int> face_of_;
  std::vector<std::vector<int>> face_walks_;
  int outer_face_ = -1;
  int comp_count_ = 0;
  std::vector<int> comp_of_;

  void finish(std::optional<int> outer_hint);
};

// A directed cycle in the dual, described by the host darts it crosses.
// Crossing host dart d means the cycle's own dart runs face_left(d) ->
// face_right(d); the cycle is oriented so that `inside` (one of the two
// sides of the corresponding edge cut) stays on its left.  `inside` holds
// a sorted vertex list.
struct DualCycle {
  std::vector<int> crossed;        // host darts, in cyclic traversal order
  std::vector<int> inside;         // host vertices left of the cycle
  std::vector<int> edge_set;       // sorted host edge ids (derived)

  bool same_edges(const DualCycle& o) const { return edge_set == o.edge_set; }
};

// The dual cycle separating `side` from the rest of g.  Both parts must be
// nonempty and induce connected subgraphs, otherwise SideNotConnected.
DualCycle separating_dual_cycle(const PlaneMultigraph& g,
                                const std::vector<int>& side);

// Open annulus bounded by two dual cycles, reported as host material:
// vertices strictly between the curves, edges with an endpoint strictly
// between or crossed by exactly one of the cycles, faces strictly between.
struct RegionFootprint {
  std::vector<int> vertices;
  std::vector<int> edges;
  std::vector<int> faces;

  bool disjoint(const RegionFootprint& o) const;
};

// Requires c1 and c2 to bound an annulus (one side of c1 nested in one side
// of c2); otherwise CyclesCross.  Identical cycles give an empty footprint.
RegionFootprint region_footprint(const PlaneMultigraph& g, const DualCycle& c1,
                                 const DualCycle& c2);

// Vertex sets of the connected components of g.
std::vector<std::vector<int>> components(const PlaneMultigraph& g);

// True if `verts` is nonempty and induces a connected subgraph.
bool induces_connected(const PlaneMultigraph& g, const std::vector<int>& verts);

} // namespace pdsp
