#include "pdsp/skeleton.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace pdsp {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) {
    for (int i = 0; i < n; ++i) p[i] = i;
  }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  bool join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[a] = b;
    return true;
  }
};

// Maximal paths whose internal vertices avoid `principal`, over a tree
// given as adjacency (edge id, other endpoint) lists.
std::vector<std::vector<int>> spinal_split(
    const std::map<int, std::vector<std::pair<int, int>>>& adj,
    const std::set<int>& principal) {
  std::set<int> used_edges;
  std::vector<std::vector<int>> out;
  for (int p : principal) {
    auto it = adj.find(p);
    if (it == adj.end()) continue;
    for (const auto& [e0, w0] : it->second) {
      if (used_edges.count(e0)) continue;
      std::vector<int> path{p};
      int e = e0, w = w0;
      used_edges.insert(e);
      path.push_back(w);
      while (!principal.count(w)) {
        const auto& nb = adj.at(w);
        require(nb.size() == 2, ErrorCode::Internal,
                "non-principal tree vertex of degree != 2");
        const auto& step = nb[0].first == e ? nb[1] : nb[0];
        e = step.first;
        w = step.second;
        used_edges.insert(e);
        path.push_back(w);
      }
      out.push_back(std::move(path));
    }
  }
  return out;
}

}  // namespace

SteinerTree assemble_tree(const PlaneMultigraph& g, std::vector<int> edges,
                          const std::vector<int>& basis) {
  edges = sorted_unique(std::move(edges));
  require(!edges.empty(), ErrorCode::BadInput, "tree without edges");
  SteinerTree t;
  t.edges = edges;
  std::map<int, std::vector<std::pair<int, int>>> adj;
  for (int e : edges) {
    int u = g.edge(e).u, v = g.edge(e).v;
    require(u != v, ErrorCode::BadInput, "tree contains a self-loop");
    adj[u].push_back({e, v});
    adj[v].push_back({e, u});
  }
  for (auto& [v, nb] : adj) {
    std::sort(nb.begin(), nb.end());
    t.vertices.push_back(v);
  }

  UnionFind uf(g.n());
  for (int e : edges)
    require(uf.join(g.edge(e).u, g.edge(e).v), ErrorCode::BadInput,
            "edge set contains a cycle");
  for (int v : t.vertices)
    require(uf.find(v) == uf.find(t.vertices[0]), ErrorCode::BadInput,
            "edge set is not connected");

  std::set<int> bset(basis.begin(), basis.end());
  std::set<int> principal;
  for (int v : t.vertices) {
    if (adj[v].size() == 1)
      require(bset.count(v), ErrorCode::BadInput,
              "tree leaf outside the basis");
    if (bset.count(v) || adj[v].size() >= 3) principal.insert(v);
  }
  t.principal.assign(principal.begin(), principal.end());
  t.spinal = spinal_split(adj, principal);
  return t;
}

namespace {

// Walks a shortest path from `from` to `to`, choosing at each step the
// smallest (next vertex, edge) continuation that stays on a shortest path.
std::vector<std::pair<int, int>> geodesic_steps(const PlaneMultigraph& g,
                                                const DistanceOracle& oracle,
                                                int from, int to) {
  require(oracle.reachable(from, to), ErrorCode::Disconnected,
          "terminal unreachable from the current tree");
  std::vector<std::pair<int, int>> steps;  // (edge, next vertex)
  int cur = from;
  while (cur != to) {
    int best_v = -1, best_e = -1;
    Rat here = *oracle.d(cur, to);
    for (int d : g.darts_out(cur)) {
      int x = g.head(d), e = g.dart_edge(d);
      if (!oracle.reachable(x, to)) continue;
      if (g.edge(e).w + *oracle.d(x, to) != here) continue;
      if (best_v < 0 || std::make_pair(x, e) < std::make_pair(best_v, best_e)) {
        best_v = x;
        best_e = e;
      }
    }
    require(best_v >= 0, ErrorCode::Internal, "shortest path walk got stuck");
    steps.push_back({best_e, best_v});
    cur = best_v;
  }
  return steps;
}

}  // namespace

SteinerTree geodesic_steiner_tree(const NiceInstance& ni) {
  const PlaneMultigraph& g = ni.inst.g;
  const DistanceOracle& oracle = *ni.oracle;
  std::vector<int> order;
  for (const auto& [s, t] : ni.inst.terminals) {
    order.push_back(s);
    order.push_back(t);
  }
  require(order.size() >= 2, ErrorCode::BadInput, "no terminals");

  std::set<int> in_tree{order[0]};
  std::vector<int> edges;
  auto grow = [&](int from, int to) {
    for (const auto& [e, v] : geodesic_steps(g, oracle, from, to)) {
      edges.push_back(e);
      in_tree.insert(v);
    }
  };
  grow(order[0], order[1]);
  for (std::size_t i = 2; i < order.size(); ++i) {
    int t = order[i];
    require(!in_tree.count(t), ErrorCode::Internal,
            "terminal reached before its turn");
    int best = -1;
    for (int u : in_tree) {
      if (!oracle.reachable(u, t)) continue;
      if (best < 0 || std::make_pair(*oracle.d(u, t), u) <
                          std::make_pair(*oracle.d(best, t), best))
        best = u;
    }
    require(best >= 0, ErrorCode::Disconnected, "terminal in another component");
    grow(best, t);
  }

  std::vector<int> basis = sorted_unique(order);
  SteinerTree t = assemble_tree(g, edges, basis);
  // 2k leaves and at most 2k-2 branch vertices give at most 4k-3 maximal
  // spinal paths in the contracted tree.
  require(int(t.spinal.size()) <= 4 * ni.inst.k() - 3, ErrorCode::Internal,
          "spinal path count above the construction bound");
  for (const auto& q : t.spinal)
    require(is_geodesic(g, oracle, q), ErrorCode::Internal,
            "non-geodesic spinal path in the incremental tree");
  return t;
}

std::optional<std::vector<std::vector<int>>> ring_linkage(
    const DagStructure& ds, int demand) {
  require(demand >= 1, ErrorCode::BadInput, "linkage demand must be positive");
  int nv = int(ds.verts.size());
  std::map<int, int> pos;
  for (int i = 0; i < nv; ++i) pos[ds.verts[i]] = i;
  auto in_node = [](int i) { return 2 * i; };
  auto out_node = [](int i) { return 2 * i + 1; };
  int S = 2 * nv, T = 2 * nv + 1, N = 2 * nv + 2;

  std::map<std::pair<int, int>, int> cap, init;
  std::vector<std::set<int>> nb(N);
  auto add = [&](int a, int b) {
    cap[{a, b}] += 1;
    init[{a, b}] += 1;
    nb[a].insert(b);
    nb[b].insert(a);
  };
  for (int i = 0; i < nv; ++i) add(in_node(i), out_node(i));
  for (const auto& [u, v] : ds.arcs) add(out_node(pos.at(u)), in_node(pos.at(v)));
  for (int v : ds.tx) add(S, in_node(pos.at(v)));
  for (int v : ds.ty) add(out_node(pos.at(v)), T);

  // Unit-capacity augmentation, one shortest path at a time.
  int flow = 0;
  while (flow < demand) {
    std::vector<int> par(N, -1);
    std::vector<int> queue{S};
    par[S] = S;
    for (std::size_t qi = 0; qi < queue.size() && par[T] < 0; ++qi) {
      int x = queue[qi];
      for (int y : nb[x]) {
        if (par[y] >= 0 || cap[{x, y}] <= 0) continue;
        par[y] = x;
        queue.push_back(y);
      }
    }
    if (par[T] < 0) break;
    for (int y = T; y != S; y = par[y]) {
      cap[{par[y], y}] -= 1;
      cap[{y, par[y]}] += 1;
    }
    ++flow;
  }
  if (flow < demand) return std::nullopt;

  // Net flow over the original arcs tells us where the paths run.  Parallel
  // arcs share one capacity entry, so compare against the initial capacity
  // rather than zero; vertex capacities keep the net usage at most one.
  std::map<std::pair<int, int>, int> net;
  for (const auto& [u, v] : ds.arcs) {
    int a = out_node(pos.at(u)), b = in_node(pos.at(v));
    if (cap[{a, b}] < init[{a, b}]) net[{pos.at(u), pos.at(v)}] = 1;
  }
  std::set<int> sink_used;
  for (int v : ds.ty)
    if (cap[{out_node(pos.at(v)), T}] < init[{out_node(pos.at(v)), T}])
      sink_used.insert(pos.at(v));

  std::vector<std::vector<int>> paths;
  for (int v : ds.tx) {
    int i = pos.at(v);
    if (cap[{S, in_node(i)}] == init[{S, in_node(i)}]) continue;
    std::vector<int> path{ds.verts[i]};
    int cur = i;
    while (!sink_used.count(cur)) {
      int nxt = -1;
      for (auto& [key, f] : net) {
        if (f == 1 && key.first == cur) {
          nxt = key.second;
          f = 0;
          break;
        }
      }
      require(nxt >= 0, ErrorCode::Internal, "flow decomposition got stuck");
      path.push_back(ds.verts[nxt]);
      cur = nxt;
    }
    sink_used.erase(cur);
    paths.push_back(std::move(path));
    if (int(paths.size()) == demand) break;
  }
  require(int(paths.size()) == demand, ErrorCode::Internal,
          "flow value and path decomposition disagree");
  return paths;
}

Solution to_source_solution(const TransformedInstance& ti,
                            const Solution& sol) {
  Solution out;
  for (const auto& p : sol) {
    std::vector<int> q;
    for (int v : p) {
      require(v >= 0 && v < int(ti.orig_vertex.size()), ErrorCode::BadInput,
              "vertex out of range");
      if (ti.orig_vertex[v] >= 0) {
        q.push_back(ti.orig_vertex[v]);
      } else {
        require(ti.from_edge[v] >= 0, ErrorCode::BadInput,
                "solution passes through a structural vertex");
      }
    }
    out.push_back(std::move(q));
  }
  return out;
}

Solution from_source_solution(const PlaneMultigraph& src,
                              const TransformedInstance& ti,
                              const Solution& sol) {
  std::vector<int> to_new(src.n(), -1);
  for (int v = 0; v < int(ti.orig_vertex.size()); ++v)
    if (ti.orig_vertex[v] >= 0) to_new[ti.orig_vertex[v]] = v;
  Solution out;
  for (const auto& p : sol) {
    std::vector<int> q;
    for (std::size_t i = 0; i < p.size(); ++i) {
      require(to_new[p[i]] >= 0, ErrorCode::BadInput, "vertex has no image");
      q.push_back(to_new[p[i]]);
      if (i + 1 < p.size()) {
        auto e = src.find_edge(p[i], p[i + 1]);
        require(e.has_value(), ErrorCode::BadInput, "step is not an edge");
        if (ti.edge_mid[*e] >= 0) q.push_back(ti.edge_mid[*e]);
      }
    }
    out.push_back(std::move(q));
  }
  return out;
}

std::optional<RefineResult> refine(const NiceInstance& ni,
                                   const SteinerTree& tree,
                                   const RingDecomposition& dec) {
  const PlaneMultigraph& g = ni.inst.g;
  int n = g.n(), m = g.m(), k = ni.inst.k();
  DapInstance base = annotate(ni.inst, *ni.oracle);

  // Per ring: boundary edge lists in boundary-cycle order, the interior
  // orientation, and one linkage path.
  struct RingPlan {
    std::vector<int> cross1, cross2;  // crossed darts in cycle order
    std::vector<int> mid_path;        // linkage path, host vertices
    int entry_edge = -1, exit_edge = -1;
  };
  std::vector<RingPlan> plans;
  std::vector<char> in_mid_any(n, 0);
  for (const auto& entry : dec.entries) {
    const DagRing& ring = entry.ring;
    PartitionDags pd = build_partition_dags(ni, entry.part);
    DagStructure ds = dag_structure(ni, pd, ring);
    auto link = ring_linkage(ds, int(entry.part.split.size()));
    if (!link) return std::nullopt;

    RingPlan plan;
    plan.cross1 = ring.cyc_inner.crossed;
    plan.cross2 = ring.cyc_outer.crossed;
    plan.mid_path = link->front();
    std::set<int> ux(ring.ux.begin(), ring.ux.end());
    std::set<int> uy(ring.uy.begin(), ring.uy.end());
    for (int d : g.darts_out(plan.mid_path.front()))
      if (ux.count(g.head(d)))
        plan.entry_edge = plan.entry_edge < 0
                              ? g.dart_edge(d)
                              : std::min(plan.entry_edge, g.dart_edge(d));
    for (int d : g.darts_out(plan.mid_path.back()))
      if (uy.count(g.head(d)))
        plan.exit_edge = plan.exit_edge < 0
                             ? g.dart_edge(d)
                             : std::min(plan.exit_edge, g.dart_edge(d));
    require(plan.entry_edge >= 0 && plan.exit_edge >= 0, ErrorCode::Internal,
            "linkage endpoints do not touch the ring boundary");
    for (int v : ring.umid) {
      require(!in_mid_any[v], ErrorCode::Internal,
              "ring interiors overlap");
      in_mid_any[v] = 1;
    }
    plans.push_back(std::move(plan));
  }

  // Subdivide every boundary edge.
  std::vector<int> mid_of(m, -1);
  int next_vertex = n;
  for (const auto& plan : plans)
    for (const auto* side : {&plan.cross1, &plan.cross2})
      for (int d : *side) {
        int e = g.dart_edge(d);
        require(mid_of[e] < 0, ErrorCode::Internal,
                "boundary edge shared between rings");
        mid_of[e] = next_vertex++;
      }

  std::vector<EdgeRec> edges2;
  std::vector<int> orig_of_edge;
  auto push_edge = [&](int u, int v, Rat w, int orig) {
    edges2.push_back({u, v, w});
    orig_of_edge.push_back(orig);
    return int(edges2.size()) - 1;
  };
  std::vector<int> vhalf(m, -1);
  for (int e = 0; e < m; ++e) {
    const EdgeRec& r = g.edge(e);
    if (mid_of[e] < 0) {
      push_edge(r.u, r.v, r.w, e);
    } else {
      push_edge(r.u, mid_of[e], r.w / 2, e);
    }
  }
  for (int e = 0; e < m; ++e)
    if (mid_of[e] >= 0)
      vhalf[e] = push_edge(mid_of[e], g.edge(e).v, g.edge(e).w / 2, e);

  // Boundary cycles: consecutive subdivision vertices joined through the
  // faces the dual cycle passes.
  struct SideRef {
    const std::vector<int>* cross;
    std::vector<int> conn;  // connector edge ids, conn[j]: v(j) -> v(j+1)
  };
  std::vector<SideRef> sides;
  for (const auto& plan : plans)
    for (const auto* side : {&plan.cross1, &plan.cross2}) {
      SideRef sr;
      sr.cross = side;
      int L = int(side->size());
      if (L >= 2)
        for (int j = 0; j < L; ++j) {
          int a = mid_of[g.dart_edge((*side)[j])];
          int b = mid_of[g.dart_edge((*side)[(j + 1) % L])];
          sr.conn.push_back(push_edge(a, b, Rat(1), -1));
        }
      sides.push_back(std::move(sr));
    }

  int n2 = next_vertex, m2 = int(edges2.size());

  std::vector<std::vector<int>> rot2(n2);
  for (int v = 0; v < n; ++v)
    for (int d : g.darts_out(v)) {
      int e = g.dart_edge(d);
      if (mid_of[e] < 0)
        rot2[v].push_back(e);
      else
        rot2[v].push_back(v == g.edge(e).u ? e : vhalf[e]);
    }
  for (const auto& sr : sides) {
    int L = int(sr.cross->size());
    for (int j = 0; j < L; ++j) {
      int d = (*sr.cross)[j];
      int e = g.dart_edge(d);
      int ve = mid_of[e];
      int half_head = g.head(d) == g.edge(e).v ? vhalf[e] : e;
      int half_tail = g.head(d) == g.edge(e).v ? e : vhalf[e];
      rot2[ve] = {half_head};
      if (L >= 2) {
        rot2[ve].push_back(sr.conn[j]);
        rot2[ve].push_back(half_tail);
        rot2[ve].push_back(sr.conn[(j - 1 + L) % L]);
      } else {
        rot2[ve].push_back(half_tail);
      }
    }
  }

  int hint = g.face_walk(g.outer_face())[0];
  PlaneMultigraph g2 =
      PlaneMultigraph::build(n2, edges2, rot2, hint);

  // Annotations carry over by subdivision; connector edges stay empty.
  std::vector<std::vector<char>> ann2(k, std::vector<char>(2 * m2, 0));
  for (int i = 0; i < k; ++i)
    for (int e = 0; e < m; ++e) {
      ann2[i][2 * e] = base.annotations[i][2 * e];
      ann2[i][2 * e + 1] = base.annotations[i][2 * e + 1];
      if (mid_of[e] >= 0) {
        ann2[i][2 * vhalf[e]] = base.annotations[i][2 * e];
        ann2[i][2 * vhalf[e] + 1] = base.annotations[i][2 * e + 1];
      }
    }

  TransformedInstance ti;
  ti.inst = DapInstance{g2, ni.inst.terminals, ann2};
  ti.orig_vertex.assign(n2, -1);
  for (int v = 0; v < n; ++v) ti.orig_vertex[v] = v;
  ti.from_edge.assign(n2, -1);
  for (int e = 0; e < m; ++e)
    if (mid_of[e] >= 0) ti.from_edge[mid_of[e]] = e;
  ti.from_face.assign(n2, -1);
  ti.orig_edge = orig_of_edge;
  ti.edge_mid = mid_of;
  ti.edge_image.assign(m, -1);
  for (int e = 0; e < m; ++e)
    if (mid_of[e] < 0) ti.edge_image[e] = e;

  // The rerouted tree: the old tree outside ring interiors, the boundary
  // cycles, and one linkage path per ring.
  std::set<int> hedges;
  for (int e : tree.edges) {
    hedges.insert(e);
    if (mid_of[e] >= 0) hedges.insert(vhalf[e]);
  }
  auto touches_mid = [&](int e2) {
    for (int v : {edges2[e2].u, edges2[e2].v})
      if (v < n && in_mid_any[v]) return true;
    return false;
  };
  for (auto it = hedges.begin(); it != hedges.end();)
    it = touches_mid(*it) ? hedges.erase(it) : std::next(it);

  std::set<int> connector_set;
  for (const auto& sr : sides)
    for (int c : sr.conn) {
      hedges.insert(c);
      connector_set.insert(c);
    }

  RefineResult res;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const RingPlan& plan = plans[i];
    // The linkage in transformed ids: entry midpoint, interior, exit midpoint.
    std::vector<int> q{mid_of[plan.entry_edge]};
    int qside = g.edge(plan.entry_edge).u == plan.mid_path.front()
                    ? plan.entry_edge
                    : vhalf[plan.entry_edge];
    hedges.insert(qside);
    for (int v : plan.mid_path) q.push_back(v);
    for (std::size_t j = 0; j + 1 < plan.mid_path.size(); ++j) {
      auto e = g.find_edge(plan.mid_path[j], plan.mid_path[j + 1]);
      require(e.has_value() && mid_of[*e] < 0, ErrorCode::Internal,
              "linkage step is not an interior edge");
      hedges.insert(*e);
    }
    int xside = g.edge(plan.exit_edge).u == plan.mid_path.back()
                    ? plan.exit_edge
                    : vhalf[plan.exit_edge];
    hedges.insert(xside);
    q.push_back(mid_of[plan.exit_edge]);
    res.linkages.push_back(std::move(q));

    std::vector<int> c1, c2;
    for (int d : plan.cross1) c1.push_back(mid_of[g.dart_edge(d)]);
    for (int d : plan.cross2) c2.push_back(mid_of[g.dart_edge(d)]);
    res.cycle1.push_back(std::move(c1));
    res.cycle2.push_back(std::move(c2));
  }

  // Tree completion: the non-connector part must already be acyclic; add
  // connectors only where they do not close a cycle.
  UnionFind uf(n2);
  std::vector<int> kept;
  for (int e2 : hedges)
    if (!connector_set.count(e2)) {
      require(uf.join(edges2[e2].u, edges2[e2].v), ErrorCode::Internal,
              "rerouted tree has a cycle outside the boundary cycles");
      kept.push_back(e2);
    }
  for (int e2 : hedges)
    if (connector_set.count(e2) && uf.join(edges2[e2].u, edges2[e2].v))
      kept.push_back(e2);

  // Prune non-terminal leaves until the tree is tight.
  std::set<int> terminals;
  for (const auto& [s, t] : ni.inst.terminals) {
    terminals.insert(s);
    terminals.insert(t);
  }
  std::map<int, std::vector<std::pair<int, int>>> adj;
  for (int e2 : kept) {
    adj[edges2[e2].u].push_back({e2, edges2[e2].v});
    adj[edges2[e2].v].push_back({e2, edges2[e2].u});
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = adj.begin(); it != adj.end();) {
      if (it->second.size() == 1 && !terminals.count(it->first)) {
        auto [e2, w] = it->second[0];
        auto& wn = adj.at(w);
        wn.erase(std::find(wn.begin(), wn.end(), std::make_pair(e2, it->first)));
        it = adj.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  std::vector<int> pruned;
  for (const auto& [v, nb] : adj)
    for (const auto& [e2, w] : nb)
      if (v < w || (v == w)) pruned.push_back(e2);
  for (int t : terminals)
    require(adj.count(t), ErrorCode::Internal,
            "terminal lost while pruning the rerouted tree");

  std::vector<int> basis(terminals.begin(), terminals.end());
  res.tree = assemble_tree(g2, pruned, basis);
  res.ti = std::move(ti);
  return res;
}

std::vector<int> follow_walk(const PlaneMultigraph& g,
                             const std::vector<int>& path) {
  require(path.size() >= 2, ErrorCode::BadInput, "path too short to follow");
  std::vector<int> darts;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    auto d = g.find_dart(path[i], path[i + 1]);
    require(d.has_value(), ErrorCode::BadInput, "path step is not an edge");
    darts.push_back(*d);
  }
  std::vector<int> crossed;
  for (std::size_t i = 1; i < darts.size(); ++i) {
    int enter = darts[i - 1], leave = darts[i];
    // Sweep the stubs on the right-hand side of the turn, nearest to the
    // incoming edge first.
    for (int s = g.prev(g.pair_dart(enter)); s != leave; s = g.prev(s))
      crossed.push_back(s);
  }
  return crossed;
}

std::vector<int> follow_faces(const PlaneMultigraph& g,
                              const std::vector<int>& path) {
  std::vector<int> crossed = follow_walk(g, path);
  auto first = g.find_dart(path[0], path[1]);
  std::vector<int> faces{g.face_right(*first)};
  for (int s : crossed) {
    require(g.face_right(s) == faces.back(), ErrorCode::Internal,
            "followed walk left its face chain");
    faces.push_back(g.face_left(s));
  }
  auto last = g.find_dart(path[path.size() - 2], path.back());
  require(faces.back() == g.face_right(*last), ErrorCode::Internal,
          "followed walk missed the final face");
  return faces;
}

DualizeResult dualize_skeleton(const DapInstance& src,
                               const SteinerTree& tree) {
  const PlaneMultigraph& h = src.g;
  int nh = h.n(), mh = h.m(), k = src.k();

  std::set<int> terminals;
  for (const auto& [s, t] : src.terminals) {
    terminals.insert(s);
    terminals.insert(t);
  }
  std::vector<char> is_term_edge(mh, 0);
  for (int t : terminals) {
    require(h.degree(t) == 1, ErrorCode::BadInput,
            "terminal of degree != 1");
    int e = h.dart_edge(h.darts_out(t)[0]);
    require(!terminals.count(h.head(h.darts_out(t)[0])), ErrorCode::BadInput,
            "directly adjacent terminal pair cannot be dualized");
    is_term_edge[e] = 1;
  }

  // Reduced face walks: the walks of the graph with terminals detached.
  // Removing a pendant edge only shortens its face's walk, so faces keep
  // their identities.
  int F = h.face_count();
  std::vector<std::vector<int>> rwalk(F);
  std::vector<int> rpos(2 * mh, -1);
  for (int f = 0; f < F; ++f)
    for (int d : h.face_walk(f))
      if (!is_term_edge[h.dart_edge(d)]) {
        rpos[d] = int(rwalk[f].size());
        rwalk[f].push_back(d);
      }

  // Vertex layout: host vertices, then edge midpoints, then face hubs.
  std::vector<int> ve(mh, -1);
  int next_vertex = nh;
  for (int e = 0; e < mh; ++e)
    if (!is_term_edge[e]) ve[e] = next_vertex++;
  std::vector<int> vf(F, -1);
  for (int f = 0; f < F; ++f) {
    require(!rwalk[f].empty(), ErrorCode::BadInput,
            "face bounded only by terminal edges");
    vf[f] = next_vertex++;
  }

  std::vector<EdgeRec> edges2;
  std::vector<int> orig_of_edge;
  auto push_edge = [&](int u, int v, Rat w, int orig) {
    edges2.push_back({u, v, w});
    orig_of_edge.push_back(orig);
    return int(edges2.size()) - 1;
  };
  std::vector<int> half_u(mh, -1), half_v(mh, -1), tid(mh, -1);
  for (int e = 0; e < mh; ++e)
    if (!is_term_edge[e]) {
      half_u[e] = push_edge(h.edge(e).u, ve[e], h.edge(e).w / 2, e);
      half_v[e] = push_edge(ve[e], h.edge(e).v, h.edge(e).w / 2, e);
    }
  for (int e = 0; e < mh; ++e)
    if (is_term_edge[e])
      tid[e] = push_edge(h.edge(e).u, h.edge(e).v, h.edge(e).w, e);
  // Spokes: es joins the hub to a boundary edge's midpoint, cs joins it to
  // the vertex ending that walk step.
  std::vector<std::vector<int>> es(F), cs(F);
  for (int f = 0; f < F; ++f)
    for (int d : rwalk[f]) {
      es[f].push_back(push_edge(vf[f], ve[h.dart_edge(d)], Rat(1), -1));
      cs[f].push_back(push_edge(vf[f], h.head(d), Rat(1), -1));
    }

  int n2 = next_vertex, m2 = int(edges2.size());
  std::vector<std::vector<int>> rot2(n2);
  for (int x = 0; x < nh; ++x) {
    if (terminals.count(x)) {
      rot2[x] = {tid[h.dart_edge(h.darts_out(x)[0])]};
      continue;
    }
    const auto& out = h.darts_out(x);
    int deg = int(out.size());
    std::vector<int> nonterm;
    for (int j = 0; j < deg; ++j)
      if (!is_term_edge[h.dart_edge(out[j])]) nonterm.push_back(j);
    require(!nonterm.empty(), ErrorCode::BadInput,
            "vertex incident only to terminal edges");
    for (std::size_t a = 0; a < nonterm.size(); ++a) {
      int j = nonterm[a];
      int d = out[j];
      int e = h.dart_edge(d);
      rot2[x].push_back((d & 1) ? half_v[e] : half_u[e]);
      // Corner hub spoke, then any terminals that lived in this corner.
      int pd = h.pair_dart(d);
      int f = h.face_of(pd);
      rot2[x].push_back(cs[f][rpos[pd]]);
      int stop = nonterm[(a + 1) % nonterm.size()];
      for (int j2 = (j + 1) % deg; j2 != stop; j2 = (j2 + 1) % deg)
        rot2[x].push_back(tid[h.dart_edge(out[j2])]);
    }
  }
  for (int e = 0; e < mh; ++e) {
    if (is_term_edge[e]) continue;
    int fl = h.face_left(2 * e), fr = h.face_right(2 * e);
    rot2[ve[e]] = {half_v[e], es[fr][rpos[2 * e + 1]], half_u[e],
                   es[fl][rpos[2 * e]]};
  }
  for (int f = 0; f < F; ++f) {
    int L = int(rwalk[f].size());
    for (int j = L - 1; j >= 0; --j) {
      rot2[vf[f]].push_back(cs[f][j]);
      rot2[vf[f]].push_back(es[f][j]);
    }
  }

  int hint = 2 * es[h.outer_face()][0];
  PlaneMultigraph g2 = PlaneMultigraph::build(n2, edges2, rot2, hint);

  std::vector<std::vector<char>> ann2(k, std::vector<char>(2 * m2, 0));
  for (int i = 0; i < k; ++i)
    for (int e = 0; e < mh; ++e) {
      if (is_term_edge[e]) {
        ann2[i][2 * tid[e]] = src.annotations[i][2 * e];
        ann2[i][2 * tid[e] + 1] = src.annotations[i][2 * e + 1];
      } else {
        for (int half : {half_u[e], half_v[e]}) {
          ann2[i][2 * half] = src.annotations[i][2 * e];
          ann2[i][2 * half + 1] = src.annotations[i][2 * e + 1];
        }
      }
    }

  DualizeResult res;
  res.ti.inst = DapInstance{g2, src.terminals, ann2};
  res.ti.orig_vertex.assign(n2, -1);
  for (int v = 0; v < nh; ++v) res.ti.orig_vertex[v] = v;
  res.ti.from_edge.assign(n2, -1);
  res.ti.from_face.assign(n2, -1);
  for (int e = 0; e < mh; ++e)
    if (ve[e] >= 0) res.ti.from_edge[ve[e]] = e;
  for (int f = 0; f < F; ++f) res.ti.from_face[vf[f]] = f;
  res.ti.orig_edge = orig_of_edge;
  res.ti.edge_mid = ve;
  res.ti.edge_image.assign(mh, -1);
  for (int e = 0; e < mh; ++e)
    if (is_term_edge[e]) res.ti.edge_image[e] = tid[e];

  // Skeleton scaffold: followed spinal paths plus dual rings around branch
  // vertices.
  std::map<std::pair<int, int>, int> tree_edge;
  for (int e : tree.edges) {
    int a = h.edge(e).u, b = h.edge(e).v;
    tree_edge[{std::min(a, b), std::max(a, b)}] = e;
  }
  auto subdivided = [&](const std::vector<int>& q) {
    std::vector<int> out{q[0]};
    for (std::size_t i = 0; i + 1 < q.size(); ++i) {
      int e = tree_edge.at({std::min(q[i], q[i + 1]),
                            std::max(q[i], q[i + 1])});
      if (!is_term_edge[e]) out.push_back(ve[e]);
      out.push_back(q[i + 1]);
    }
    return out;
  };

  std::set<int> kedges;
  for (const auto& q : tree.spinal)
    for (int s : follow_walk(g2, subdivided(q)))
      kedges.insert(g2.dart_edge(s));
  std::map<int, int> tree_deg;
  for (int e : tree.edges) {
    tree_deg[h.edge(e).u] += 1;
    tree_deg[h.edge(e).v] += 1;
  }
  for (const auto& [v, deg] : tree_deg)
    if (deg >= 3)
      for (int d : g2.darts_out(v)) kedges.insert(g2.dart_edge(d));

  // Terminal faces of the transformed graph.
  std::vector<std::pair<int, int>> term_faces;
  for (const auto& [s, t] : src.terminals)
    term_faces.push_back({g2.face_left(g2.darts_out(s)[0]),
                          g2.face_left(g2.darts_out(t)[0])});

  std::map<int, std::vector<std::pair<int, int>>> dual_adj;
  for (int e : kedges) {
    int a = g2.face_left(2 * e), b = g2.face_right(2 * e);
    dual_adj[a].push_back({e, b});
    dual_adj[b].push_back({e, a});
  }
  for (auto& [f, nb] : dual_adj) std::sort(nb.begin(), nb.end());

  std::set<int> want;
  for (const auto& [a, b] : term_faces) {
    want.insert(a);
    want.insert(b);
  }
  if (kedges.empty()) {
    // The spinal follow crossed nothing, so both its endpoint faces agree
    // and the whole skeleton is that single face.
    require(want.size() == 1, ErrorCode::Internal,
            "empty scaffold but distinct terminal faces");
    Skeleton sk;
    sk.faces = {*want.begin()};
    sk.term_faces = term_faces;
    sk.principal = {*want.begin()};
    res.sk = std::move(sk);
    return res;
  }
  for (int f : want)
    require(dual_adj.count(f), ErrorCode::Internal,
            "terminal face missing from the skeleton scaffold");

  // Breadth-first tree over the scaffold, then strip leaves that are not
  // terminal faces.
  int root = *want.begin();
  std::map<int, std::pair<int, int>> par;  // face -> (edge, parent)
  par[root] = {-1, root};
  std::vector<int> queue{root};
  for (std::size_t qi = 0; qi < queue.size(); ++qi)
    for (const auto& [e, nf] : dual_adj[queue[qi]])
      if (!par.count(nf)) {
        par[nf] = {e, queue[qi]};
        queue.push_back(nf);
      }
  for (int f : want)
    require(par.count(f), ErrorCode::Internal,
            "skeleton scaffold is disconnected");

  std::map<int, std::vector<std::pair<int, int>>> kadj;
  std::set<int> kept_faces;
  for (const auto& [f, pe] : par) {
    if (f == root) continue;
    kadj[f].push_back({pe.first, pe.second});
    kadj[pe.second].push_back({pe.first, f});
  }
  kept_faces.insert(root);
  for (const auto& [f, pe] : par) kept_faces.insert(f);
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    for (auto it = kadj.begin(); it != kadj.end();) {
      if (it->second.size() == 1 && !want.count(it->first)) {
        auto [e, w] = it->second[0];
        auto& wn = kadj.at(w);
        wn.erase(std::find(wn.begin(), wn.end(), std::make_pair(e, it->first)));
        kept_faces.erase(it->first);
        it = kadj.erase(it);
        shrunk = true;
      } else {
        ++it;
      }
    }
  }
  if (kadj.empty()) {
    // All terminal faces coincide; the skeleton is a single dual vertex.
    require(want.size() == 1, ErrorCode::Internal,
            "skeleton pruning removed a needed branch");
    kept_faces = {root};
  }

  Skeleton sk;
  sk.faces.assign(kept_faces.begin(), kept_faces.end());
  sk.term_faces = term_faces;
  std::set<int> principal;
  for (int f : sk.faces) {
    std::size_t deg = kadj.count(f) ? kadj.at(f).size() : 0;
    if (want.count(f) || deg >= 3) principal.insert(f);
  }
  sk.principal.assign(principal.begin(), principal.end());
  for (auto& [f, nb] : kadj) {
    std::sort(nb.begin(), nb.end());
    for (const auto& [e, w] : nb) sk.dual_edges.push_back(e);
  }
  sk.dual_edges = sorted_unique(std::move(sk.dual_edges));

  for (const auto& q : spinal_split(kadj, principal)) {
    std::vector<int> crossings;
    for (std::size_t i = 0; i + 1 < q.size(); ++i) {
      int e = -1;
      for (const auto& [ce, w] : kadj.at(q[i]))
        if (w == q[i + 1]) {
          e = ce;
          break;
        }
      require(e >= 0, ErrorCode::Internal, "skeleton path lost an edge");
      crossings.push_back(g2.face_left(2 * e) == q[i] ? 2 * e : 2 * e + 1);
      require(g2.face_left(crossings.back()) == q[i] &&
                  g2.face_right(crossings.back()) == q[i + 1],
              ErrorCode::Internal, "dual edge does not join its faces");
    }
    sk.spinal_faces.push_back(q);
    sk.spinal_cross.push_back(std::move(crossings));
  }
  require(int(sk.spinal_faces.size()) <= 4 * k - 3, ErrorCode::Internal,
          "too many skeleton spinal paths");
  res.sk = std::move(sk);
  return res;
}

}  // namespace pdsp
