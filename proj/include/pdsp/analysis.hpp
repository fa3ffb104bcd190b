// Diagnostics for comparing candidate paths against a reference path:
// handle classification, homotopy pulls, load accounting, and winding
// numbers relative to a rooted ring.
#pragma once

#include <utility>
#include <vector>

#include "pdsp/base.hpp"
#include "pdsp/instances.hpp"
#include "pdsp/plane_graph.hpp"

namespace pdsp {

// A maximal subpath H of some path P whose endpoints are internal vertices
// of the reference path Q and whose interior avoids Q entirely.  Together
// with the piece Q[q_from..q_to] it closes a cycle C; the handle is
// "winding" when the endpoints of Q end up on opposite sides of C, and
// otherwise "regular".  A regular handle is "empty" when the side of C not
// containing Q's endpoints is free of terminal vertices.
struct Handle {
  std::vector<int> path;   // vertices, oriented from Q[q_from] to Q[q_to]
  int q_from = -1;         // positions in Q, q_from < q_to
  int q_to = -1;
  bool winding = false;
  bool empty = false;      // only meaningful when !winding
  int source_path = -1;    // index of the solution path H came from, or -1
};

// Finds every handle of Q contributed by P.  P and Q are vertex paths in g;
// terminals are consulted for the emptiness test.  Both paths must be
// simple and walk existing edges.
std::vector<Handle> classify_handles(const PlaneMultigraph& g,
                                     const std::vector<int>& P,
                                     const std::vector<int>& Q,
                                     const std::vector<std::pair<int, int>>& terminals);

// Replaces the middle piece of Q by the handle: Q[0..q_from] + H + Q[q_to..].
// Only empty regular handles may be pulled; anything else reports
// NotEmptyHandle.  The result keeps Q's endpoints and, because the handle
// attaches at internal vertices, its first and last edges.
std::vector<int> pull(const PlaneMultigraph& g, const std::vector<int>& Q,
                      const Handle& h);

// Edges outside Q with at least one endpoint on Q (chords between two
// Q-vertices included).
std::vector<int> boundary_edges(const PlaneMultigraph& g,
                                const std::vector<int>& Q);

struct LoadReport {
  int load = 0;             // sum over solution paths of |E(P_i) ∩ boundary(Q)|
  int pulled_load = 0;      // load against the greedily pulled representative
  int pulls = 0;            // number of pulls performed
  int handles_total = 0;    // handle census against the original Q
  int handles_winding = 0;
  int handles_regular = 0;
  int handles_empty = 0;
  std::vector<int> final_path;  // Q after greedy pulling
};

// Measures how often a solution brushes against Q, then greedily pulls
// empty regular solution-handles to drive the count down.  The pulled
// figure is an upper bound on the best achievable over all paths reachable
// from Q by pulls; when Q is a geodesic every pull strictly decreases the
// load, so the loop terminates on its own.
LoadReport load_report(const PlaneMultigraph& g, const Solution& sol,
                       const std::vector<int>& Q,
                       const std::vector<std::pair<int, int>>& terminals);

// Load of a solution against a dual path given by the host edges it
// crosses: the number of those edges actually used by the solution.
int dual_load(const PlaneMultigraph& g, const Solution& sol,
              const std::vector<int>& crossed_edges);

// An annulus rooted at two faces together with a reference curve between
// them.  The curve is stored as the host darts it crosses, each step
// running face_left(dart) -> face_right(dart); consecutive steps chain
// through shared faces from c1 to c2.
struct RootedRing {
  int c1 = -1;               // face playing the role of the outer boundary
  int c2 = -1;               // face playing the role of the inner boundary
  std::vector<int> crossed;  // host darts along the reference curve
};

// Shortest dual path between the two faces, for callers that do not care
// which reference curve they get.
RootedRing make_rooted_ring(const PlaneMultigraph& g, int outer_face,
                            int inner_face);

// Signed crossing count of an oriented vertex path with the reference
// curve: +1 each time the path crosses the curve from its left to its
// right, -1 for the opposite sense.  A simple path meets each curve step
// at most once, so this is a plain sum over shared edges.
int winding_number(const PlaneMultigraph& g, const std::vector<int>& path,
                   const RootedRing& ring);

}  // namespace pdsp
