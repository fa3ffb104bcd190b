#include "pdsp/geodesics.hpp"

#include <algorithm>
#include <queue>

namespace pdsp {

DistanceOracle::DistanceOracle(const PlaneMultigraph& g) {
  const int n = g.n();
  table_.assign(n, std::vector<std::optional<Rat>>(n));
  // Dijkstra from every source; weights are positive rationals.
  using Item = std::pair<Rat, int>;
  for (int s = 0; s < n; ++s) {
    auto& dist = table_[s];
    dist[s] = Rat(0);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({Rat(0), s});
    std::vector<char> done(n, 0);
    while (!pq.empty()) {
      auto [dv, v] = pq.top();
      pq.pop();
      if (done[v]) continue;
      done[v] = 1;
      for (int d : g.darts_out(v)) {
        int u = g.head(d);
        Rat cand = dv + g.edge(PlaneMultigraph::dart_edge(d)).w;
        if (!dist[u] || cand < *dist[u]) {
          dist[u] = cand;
          pq.push({cand, u});
        }
      }
    }
  }
}

OrientedDag st_dag(const PlaneMultigraph& g, const DistanceOracle& oracle,
                   int s, int t) {
  require(s >= 0 && s < g.n() && t >= 0 && t < g.n(), ErrorCode::BadInput,
          "terminal out of range");
  require(oracle.reachable(s, t), ErrorCode::Disconnected,
          "terminals lie in different components");
  OrientedDag dag;
  dag.s = s;
  dag.t = t;
  dag.dist = *oracle.d(s, t);
  dag.arc.assign(g.dart_count(), 0);
  for (int d = 0; d < g.dart_count(); ++d) {
    int u = g.tail(d), v = g.head(d);
    if (!oracle.reachable(s, u) || !oracle.reachable(v, t)) continue;
    Rat w = g.edge(PlaneMultigraph::dart_edge(d)).w;
    if (*oracle.d(s, u) + w + *oracle.d(v, t) == dag.dist) dag.arc[d] = 1;
  }
  // Positive weights give strictly increasing d(s,·) along every arc, so the
  // arc set is automatically acyclic; check it anyway.
  for (int d = 0; d < g.dart_count(); ++d) {
    if (dag.arc[d] && dag.arc[PlaneMultigraph::pair_dart(d)])
      fail(ErrorCode::Internal, "shortest-path dag contains a 2-cycle");
  }
  return dag;
}

Rat path_weight(const PlaneMultigraph& g, const std::vector<int>& path) {
  require(!path.empty(), ErrorCode::BadInput, "empty vertex sequence");
  Rat total(0);
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    auto e = g.find_edge(path[i], path[i + 1]);
    require(e.has_value(), ErrorCode::BadInput,
            "consecutive path vertices are not adjacent");
    total += g.edge(*e).w;
  }
  return total;
}

bool is_geodesic(const PlaneMultigraph& g, const DistanceOracle& oracle,
                 const std::vector<int>& path) {
  Rat w = path_weight(g, path);
  std::vector<int> sorted_path = path;
  std::sort(sorted_path.begin(), sorted_path.end());
  require(std::adjacent_find(sorted_path.begin(), sorted_path.end()) ==
              sorted_path.end(),
          ErrorCode::BadInput, "vertex sequence revisits a vertex");
  int s = path.front(), t = path.back();
  return oracle.reachable(s, t) && w == *oracle.d(s, t);
}

bool check_monotone_crossings(const std::vector<int>& p,
                              const std::vector<int>& q) {
  std::vector<int> pos_q;
  for (size_t i = 0; i < q.size(); ++i) {
    if (int(pos_q.size()) <= q[i]) pos_q.resize(q[i] + 1, -1);
    pos_q[q[i]] = int(i);
  }
  std::vector<int> shared; // q-positions of common vertices, in P order
  for (int v : p)
    if (v < int(pos_q.size()) && pos_q[v] != -1) shared.push_back(pos_q[v]);
  if (shared.size() < 2) return true;
  return std::is_sorted(shared.begin(), shared.end()) ||
         std::is_sorted(shared.rbegin(), shared.rend());
}

std::vector<int> splice(const PlaneMultigraph& g, const DistanceOracle& oracle,
                        const std::vector<int>& p, int u, int v,
                        const std::vector<int>& q_uv) {
  auto iu = std::find(p.begin(), p.end(), u);
  auto iv = std::find(p.begin(), p.end(), v);
  require(iu != p.end() && iv != p.end() && iu <= iv, ErrorCode::BadInput,
          "u must precede v on the host path");
  require(!q_uv.empty() && q_uv.front() == u && q_uv.back() == v,
          ErrorCode::BadInput, "replacement path endpoints mismatch");
  require(oracle.reachable(u, v) && path_weight(g, q_uv) == *oracle.d(u, v),
          ErrorCode::BadInput,
          "replacement is not a shortest path between its endpoints");

  std::vector<int> out(p.begin(), iu);
  out.insert(out.end(), q_uv.begin(), q_uv.end());
  out.insert(out.end(), iv + 1, p.end());

  std::vector<int> sorted_out = out;
  std::sort(sorted_out.begin(), sorted_out.end());
  require(std::adjacent_find(sorted_out.begin(), sorted_out.end()) ==
              sorted_out.end(),
          ErrorCode::BadInput, "spliced walk is not simple");
  if (is_geodesic(g, oracle, p))
    require(is_geodesic(g, oracle, out), ErrorCode::Internal,
            "splicing a geodesic lost shortness");
  return out;
}

} // namespace pdsp
