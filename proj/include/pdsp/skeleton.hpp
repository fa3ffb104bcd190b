// Terminal-spanning trees and their dual counterparts: a geodesic Steiner
// tree over the terminals, its rerouting through the ring decomposition,
// and the transformation that turns the tree into a skeleton living in the
// dual graph.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pdsp/instances.hpp"
#include "pdsp/plane_graph.hpp"
#include "pdsp/rings.hpp"

namespace pdsp {

// Tree in a host graph together with its spinal decomposition.  Principal
// vertices are the basis vertices (terminals) plus everything of degree at
// least 3; a spinal path is a maximal path whose internal vertices are
// non-principal.
struct SteinerTree {
  std::vector<int> vertices;             // sorted
  std::vector<int> edges;                // sorted host edge ids
  std::vector<int> principal;            // sorted
  std::vector<std::vector<int>> spinal;  // vertex paths, each >= 2 vertices
};

// Builds the tree structure over the given edge set and checks it really is
// a tree whose leaves all lie in `basis`.
SteinerTree assemble_tree(const PlaneMultigraph& g, std::vector<int> edges,
                          const std::vector<int>& basis);

// Incremental construction: shortest path between the first terminal pair,
// then repeatedly a shortest path from the current tree to the next
// terminal in instance order.  Every spinal path of the result is a
// geodesic and there are at most 4k-3 of them.
SteinerTree geodesic_steiner_tree(const NiceInstance& ni);

// `demand` vertex-disjoint directed paths from the entry attachments to the
// exit attachments of an oriented ring interior, found by unit-vertex-
// capacity augmentation.  nullopt when fewer exist, which certifies a
// global no-instance for the pipeline.
std::optional<std::vector<std::vector<int>>> ring_linkage(
    const DagStructure& ds, int demand);

// A rebuilt instance together with provenance: every vertex and edge knows
// where it came from in the source graph, so solutions can be carried in
// both directions.
struct TransformedInstance {
  DapInstance inst;
  std::vector<int> orig_vertex;  // vertex -> source vertex, -1 for new ones
  std::vector<int> from_edge;    // vertex -> subdivided source edge, or -1
  std::vector<int> from_face;    // vertex -> source face, or -1
  std::vector<int> orig_edge;    // edge -> source edge, -1 for new edges
  std::vector<int> edge_mid;     // source edge -> its subdivision vertex, or -1
  std::vector<int> edge_image;   // source edge -> surviving edge id, or -1
};

// Contracts subdivision vertices of a solution back into source-graph
// steps.  Vertices without a source image must not appear except as
// interior subdivision points.
Solution to_source_solution(const TransformedInstance& ti,
                            const Solution& sol);
// Expands a source solution into the transformed graph.
Solution from_source_solution(const PlaneMultigraph& src,
                              const TransformedInstance& ti,
                              const Solution& sol);

struct RefineResult {
  TransformedInstance ti;
  SteinerTree tree;  // in ti.inst.g
  // Diagnostics per ring, in decomposition order: the boundary cycles as
  // subdivision-vertex sequences and the chosen rerouting path.
  std::vector<std::vector<int>> cycle1, cycle2;
  std::vector<std::vector<int>> linkages;
};

// Reroutes the tree around every ring of the decomposition: ring-boundary
// edges are subdivided, the subdivision points of each boundary are joined
// into a cycle, the tree's portions inside ring interiors are replaced by
// one disjoint-linkage path per ring, and a maximal set of cycle edges is
// deleted so the result is again a tree.  nullopt when some ring admits no
// linkage of full demand, which certifies a no-instance.
std::optional<RefineResult> refine(const NiceInstance& ni,
                                   const SteinerTree& tree,
                                   const RingDecomposition& dec);

// Dual walk traced by a curve that runs alongside the oriented vertex path
// on its right-hand side, from the face right of the first arc to the face
// right of the last arc.  Returns the crossed darts, each pointing away
// from the path vertex it leaves; the crossing runs face_right(dart) ->
// face_left(dart).
std::vector<int> follow_walk(const PlaneMultigraph& g,
                             const std::vector<int>& path);
// The face sequence of the same walk (one longer than the crossing list).
std::vector<int> follow_faces(const PlaneMultigraph& g,
                              const std::vector<int>& path);

// Tree in the dual spanning the terminal faces.
struct Skeleton {
  std::vector<int> faces;                      // sorted dual vertices of K
  std::vector<int> dual_edges;                 // sorted host edge ids
  std::vector<std::pair<int, int>> term_faces; // per pair: faces of s_i, t_i
  std::vector<int> principal;                  // sorted principal faces
  // Spinal paths in a fixed reference orientation: face sequences and the
  // host darts crossed between consecutive faces (face_left -> face_right).
  std::vector<std::vector<int>> spinal_faces;
  std::vector<std::vector<int>> spinal_cross;
};

struct DualizeResult {
  TransformedInstance ti;
  Skeleton sk;
};

// Carries the instance to the graph in which the tree's dual image is a
// skeleton: terminals are detached, every remaining edge is subdivided,
// every face receives a hub vertex joined to each of its boundary
// incidences, and terminals are re-attached beside their old corner.  The
// skeleton is the minimal tree inside the union of the followed spinal
// paths and the dual cycles around tree branch vertices that spans all
// terminal faces.
DualizeResult dualize_skeleton(const DapInstance& src, const SteinerTree& tree);

}  // namespace pdsp
