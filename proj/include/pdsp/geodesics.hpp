#pragma once

#include "pdsp/plane_graph.hpp"

#include <optional>
#include <vector>

namespace pdsp {

// All-pairs exact distances, computed once per instance and shared.
class DistanceOracle {
public:
  explicit DistanceOracle(const PlaneMultigraph& g);

  // nullopt means unreachable.
  const std::optional<Rat>& d(int u, int v) const { return table_[u][v]; }
  bool reachable(int u, int v) const { return table_[u][v].has_value(); }
  int n() const { return int(table_.size()); }

private:
  std::vector<std::vector<std::optional<Rat>>> table_;
};

// Shortest-path dag of a terminal pair: arc (u,v) of edge uv is present
// exactly when d(s,u) + w(uv) + d(v,t) = d(s,t).
struct OrientedDag {
  int s = -1, t = -1;
  Rat dist;
  std::vector<char> arc; // indexed by dart of the host graph

  bool has_arc(int d) const { return arc[d]; }
  bool has_edge(int e) const { return arc[2 * e] || arc[2 * e + 1]; }
};

OrientedDag st_dag(const PlaneMultigraph& g, const DistanceOracle& oracle,
                   int s, int t);

// True iff P's weight equals the endpoint distance.  P is given as a vertex
// sequence; consecutive vertices must be joined by an edge (else NotAPath,
// reported as BadInput).
bool is_geodesic(const PlaneMultigraph& g, const DistanceOracle& oracle,
                 const std::vector<int>& path);

Rat path_weight(const PlaneMultigraph& g, const std::vector<int>& path);

// Order monotonicity of the common vertices of two oriented geodesics: their
// order along P must agree with their order along Q or be exactly reversed.
bool check_monotone_crossings(const std::vector<int>& p,
                              const std::vector<int>& q);

// P[.,u] + Q_uv + P[v,.].  u must not come after v on P, Q_uv must be a
// shortest (u,v)-path, and the concatenation must be simple.
std::vector<int> splice(const PlaneMultigraph& g, const DistanceOracle& oracle,
                        const std::vector<int>& p, int u, int v,
                        const std::vector<int>& q_uv);

} // namespace pdsp
