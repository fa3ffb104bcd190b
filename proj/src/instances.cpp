#include "pdsp/instances.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pdsp {

namespace {

std::vector<std::vector<int>> dart_rotations(const PlaneMultigraph& g) {
  std::vector<std::vector<int>> rot(g.n());
  for (int v = 0; v < g.n(); ++v) rot[v] = g.darts_out(v);
  return rot;
}

} // namespace

bool is_nice(const DspInstance& inst, std::string* why) {
  auto bad = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!inst.g.connected()) return bad("graph is not connected");
  if (inst.terminals.empty()) return bad("no terminal pairs");
  std::set<int> seen;
  for (auto [s, t] : inst.terminals) {
    for (int v : {s, t}) {
      if (v < 0 || v >= inst.g.n()) return bad("terminal out of range");
      if (!seen.insert(v).second) return bad("terminal vertex repeats");
    }
  }
  for (int v : seen)
    if (inst.g.degree(v) != 1) return bad("terminal vertex has degree != 1");
  DistanceOracle oracle(inst.g);
  std::vector<char> covered(inst.g.m(), 0);
  for (auto [s, t] : inst.terminals) {
    if (!oracle.reachable(s, t)) return bad("terminal pair disconnected");
    OrientedDag dag = st_dag(inst.g, oracle, s, t);
    for (int e = 0; e < inst.g.m(); ++e)
      if (dag.has_edge(e)) covered[e] = 1;
  }
  for (int e = 0; e < inst.g.m(); ++e)
    if (!covered[e]) return bad("edge lies on no terminal dag");
  return true;
}

MakeNiceResult make_nice(const DspInstance& inst) {
  MakeNiceResult res;
  auto no = [&](const std::string& msg) {
    res.no_instance = true;
    res.reason = msg;
    return res;
  };

  std::set<int> seen;
  for (auto [s, t] : inst.terminals) {
    require(s >= 0 && s < inst.g.n() && t >= 0 && t < inst.g.n(),
            ErrorCode::BadInput, "terminal out of range");
    if (!seen.insert(s).second || !seen.insert(t).second)
      return no("a terminal vertex appears in two pair slots");
  }
  require(!inst.terminals.empty(), ErrorCode::BadInput, "no terminal pairs");

  {
    DistanceOracle oracle(inst.g);
    for (auto [s, t] : inst.terminals)
      if (!oracle.reachable(s, t))
        return no("a terminal pair spans two components");
  }

  // Pendant attachment.  A degree-1 terminal already is its own pendant, so
  // it is left alone; everything else gets a fresh weight-1 leaf.
  int n1 = inst.g.n();
  std::vector<EdgeRec> edges = inst.g.edges();
  auto rot = dart_rotations(inst.g);
  std::vector<std::pair<int, int>> terms = inst.terminals;
  std::vector<int> origin(n1);
  for (int v = 0; v < n1; ++v) origin[v] = v;
  auto attach = [&](int v) {
    if (inst.g.degree(v) == 1) return v;
    int nv = int(rot.size());
    int e = int(edges.size());
    edges.push_back(EdgeRec{nv, v, Rat(1)});
    rot.push_back({2 * e});
    rot[v].insert(rot[v].begin(), 2 * e + 1);
    origin.push_back(-1);
    return nv;
  };
  for (auto& [s, t] : terms) {
    s = attach(s);
    t = attach(t);
  }
  PlaneMultigraph g1 =
      PlaneMultigraph::build_darts(int(rot.size()), edges, rot);

  // Drop every edge that no terminal dag uses.
  DistanceOracle oracle1(g1);
  std::vector<char> keep(g1.m(), 0);
  for (auto [s, t] : terms) {
    OrientedDag dag = st_dag(g1, oracle1, s, t);
    for (int e = 0; e < g1.m(); ++e)
      if (dag.has_edge(e)) keep[e] = 1;
  }

  std::vector<EdgeRec> edges2;
  std::vector<int> new_edge_id(g1.m(), -1);
  for (int e = 0; e < g1.m(); ++e)
    if (keep[e]) {
      new_edge_id[e] = int(edges2.size());
      edges2.push_back(g1.edge(e));
    }
  std::vector<std::vector<int>> rot2(g1.n());
  for (int v = 0; v < g1.n(); ++v)
    for (int d : g1.darts_out(v))
      if (keep[PlaneMultigraph::dart_edge(d)])
        rot2[v].push_back(2 * new_edge_id[PlaneMultigraph::dart_edge(d)] +
                          (d & 1));
  PlaneMultigraph g2 = PlaneMultigraph::build_darts(g1.n(), edges2, rot2);

  // One nice instance per component holding terminals.
  std::vector<int> comp_of(g2.n());
  for (int v = 0; v < g2.n(); ++v) comp_of[v] = g2.component_of(v);
  for (auto [s, t] : terms)
    require(comp_of[s] == comp_of[t], ErrorCode::Internal,
            "dag-preserving pruning separated a reachable pair");

  std::set<int> used_comps;
  for (auto [s, t] : terms) used_comps.insert(comp_of[s]);
  for (int c : used_comps) {
    NiceInstance part;
    std::vector<int> local(g2.n(), -1);
    for (int v = 0; v < g2.n(); ++v)
      if (comp_of[v] == c) {
        local[v] = int(part.orig_vertex.size());
        part.orig_vertex.push_back(origin[v]);
      }
    std::vector<EdgeRec> pe;
    std::vector<int> le(g2.m(), -1);
    for (int e = 0; e < g2.m(); ++e) {
      const auto& er = g2.edge(e);
      if (comp_of[er.u] == c) {
        le[e] = int(pe.size());
        pe.push_back(EdgeRec{local[er.u], local[er.v], er.w});
      }
    }
    std::vector<std::vector<int>> pr(part.orig_vertex.size());
    for (int v = 0; v < g2.n(); ++v)
      if (comp_of[v] == c)
        for (int d : g2.darts_out(v))
          pr[local[v]].push_back(2 * le[PlaneMultigraph::dart_edge(d)] + (d & 1));
    part.inst.g =
        PlaneMultigraph::build_darts(int(part.orig_vertex.size()), pe, pr);
    for (size_t i = 0; i < terms.size(); ++i)
      if (comp_of[terms[i].first] == c) {
        part.inst.terminals.push_back(
            {local[terms[i].first], local[terms[i].second]});
        part.orig_pair.push_back(int(i));
      }
    part.oracle = std::make_shared<DistanceOracle>(part.inst.g);
    std::string why;
    require(is_nice(part.inst, &why), ErrorCode::Internal,
            "reduction output is not nice: " + why);
    res.parts.push_back(std::move(part));
  }
  return res;
}

DapInstance annotate(const DspInstance& inst, const DistanceOracle& oracle) {
  DapInstance out;
  out.g = inst.g;
  out.terminals = inst.terminals;
  for (auto [s, t] : inst.terminals) {
    OrientedDag dag = st_dag(inst.g, oracle, s, t);
    out.annotations.push_back(dag.arc);
  }
  return out;
}

DapInstance annotate(const DspInstance& inst) {
  DistanceOracle oracle(inst.g);
  return annotate(inst, oracle);
}

std::optional<DagReduction> reduce_dag_to_dsp(
    const PlaneMultigraph& dag, const std::vector<std::pair<int, int>>& pairs) {
  const int n = dag.n();
  // Lexicographically least topological order: always expose the smallest
  // ready vertex next.
  std::vector<int> indeg(n, 0);
  for (const auto& er : dag.edges()) indeg[er.v]++;
  std::set<int> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.insert(v);
  std::vector<int> pos(n, -1);
  for (int step = 0; step < n; ++step) {
    require(!ready.empty(), ErrorCode::BadInput, "input digraph has a cycle");
    int v = *ready.begin();
    ready.erase(ready.begin());
    pos[v] = step;
    for (int d : dag.darts_out(v))
      if (!(d & 1) && --indeg[dag.head(d)] == 0) ready.insert(dag.head(d));
  }

  // Reachability precheck along arcs.
  for (auto [s, t] : pairs) {
    std::vector<char> vis(n, 0);
    std::vector<int> stack{s};
    vis[s] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int d : dag.darts_out(v))
        if (!(d & 1) && !vis[dag.head(d)]) {
          vis[dag.head(d)] = 1;
          stack.push_back(dag.head(d));
        }
    }
    if (!vis[t]) return std::nullopt;
  }

  // Arc (u,v) becomes a path of pos[v]-pos[u] unit edges; the fresh interior
  // vertices take over the arc's two rotation slots.
  std::vector<EdgeRec> edges;
  std::vector<int> first_dart(dag.m()), last_dart(dag.m());
  int next_v = n;
  std::vector<std::vector<int>> mids(dag.m());
  for (int e = 0; e < dag.m(); ++e) {
    int u = dag.edge(e).u, v = dag.edge(e).v;
    int len = pos[v] - pos[u];
    require(len > 0, ErrorCode::Internal, "arc against topological order");
    std::vector<int> chain{u};
    for (int i = 1; i < len; ++i) chain.push_back(next_v++);
    chain.push_back(v);
    mids[e] = chain;
    for (int i = 0; i < len; ++i) {
      int id = int(edges.size());
      edges.push_back(EdgeRec{chain[i], chain[i + 1], Rat(1)});
      if (i == 0) first_dart[e] = 2 * id;
      if (i == len - 1) last_dart[e] = 2 * id + 1;
    }
  }
  std::vector<std::vector<int>> rot(next_v);
  for (int v = 0; v < n; ++v)
    for (int d : dag.darts_out(v))
      rot[v].push_back((d & 1) ? last_dart[d >> 1] : first_dart[d >> 1]);
  for (int e = 0; e < dag.m(); ++e) {
    const auto& chain = mids[e];
    for (size_t i = 1; i + 1 < chain.size(); ++i) {
      // interior vertex between chain edge i-1 and i
      int before = first_dart[e] / 2 + int(i) - 1;
      int after = before + 1;
      rot[chain[i]] = {2 * after, 2 * before + 1};
    }
  }

  DagReduction out;
  out.inst.g = PlaneMultigraph::build_darts(next_v, edges, rot);
  out.inst.terminals = pairs;
  out.vertex_map.resize(n);
  for (int v = 0; v < n; ++v) out.vertex_map[v] = v;
  out.topo_pos = pos;
  return out;
}

void transport_back(const NiceInstance& part, const Solution& sol,
                    Solution& into_original) {
  require(sol.size() == part.inst.terminals.size(), ErrorCode::BadInput,
          "solution path count mismatch");
  for (size_t i = 0; i < sol.size(); ++i) {
    std::vector<int> path;
    for (int v : sol[i]) {
      int ov = part.orig_vertex[v];
      if (ov != -1) path.push_back(ov);
    }
    int op = part.orig_pair[i];
    if (int(into_original.size()) <= op) into_original.resize(op + 1);
    into_original[op] = std::move(path);
  }
}

namespace {

CheckReport check_impl(const PlaneMultigraph& g,
                       const std::vector<std::pair<int, int>>& terminals,
                       const std::vector<std::vector<char>>* annotations,
                       const Solution& sol) {
  CheckReport rep;
  if (sol.size() != terminals.size()) return rep;

  rep.paths_exist = true;
  for (const auto& p : sol) {
    if (p.empty()) {
      rep.paths_exist = false;
      break;
    }
    std::set<int> uniq(p.begin(), p.end());
    if (uniq.size() != p.size()) rep.paths_exist = false;
    for (size_t j = 0; j + 1 < p.size(); ++j)
      if (!g.find_edge(p[j], p[j + 1])) rep.paths_exist = false;
  }
  if (!rep.paths_exist) return rep;

  rep.endpoints_match = true;
  for (size_t i = 0; i < sol.size(); ++i)
    if (sol[i].front() != terminals[i].first ||
        sol[i].back() != terminals[i].second)
      rep.endpoints_match = false;

  rep.disjoint = true;
  std::set<int> used;
  for (const auto& p : sol)
    for (int v : p)
      if (!used.insert(v).second) rep.disjoint = false;

  DistanceOracle oracle(g);
  rep.geodesic = true;
  for (const auto& p : sol)
    if (!is_geodesic(g, oracle, p)) rep.geodesic = false;

  if (annotations) {
    rep.in_annotation = true;
    for (size_t i = 0; i < sol.size(); ++i)
      for (size_t j = 0; j + 1 < sol[i].size(); ++j) {
        auto d = g.find_dart(sol[i][j], sol[i][j + 1]);
        if (!d || !(*annotations)[i][*d]) rep.in_annotation = false;
      }
  }
  return rep;
}

} // namespace

CheckReport check_solution(const DspInstance& inst, const Solution& sol) {
  return check_impl(inst.g, inst.terminals, nullptr, sol);
}

CheckReport check_solution(const DapInstance& inst, const Solution& sol) {
  return check_impl(inst.g, inst.terminals, &inst.annotations, sol);
}

} // namespace pdsp
