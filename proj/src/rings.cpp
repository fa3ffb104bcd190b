#include "pdsp/rings.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pdsp {
namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool contains(const std::vector<int>& sorted, int x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

bool subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

DagCut make_cut(const PlaneMultigraph& g, const std::vector<char>& in_x) {
  DagCut c;
  for (int v = 0; v < g.n(); ++v) (in_x[v] ? c.vx : c.vy).push_back(v);
  for (int e = 0; e < g.m(); ++e)
    if (in_x[g.edge(e).u] != in_x[g.edge(e).v]) c.cut_edges.push_back(e);
  return c;
}

}  // namespace

bool DagCut::below(const DagCut& o) const { return subset(vx, o.vx); }

std::optional<SplittingPartition> split_sets(
    const std::vector<std::pair<int, int>>& terminals,
    const std::vector<int>& X, const std::vector<int>& Y) {
  SplittingPartition p;
  p.X = sorted_unique(X);
  p.Y = sorted_unique(Y);
  require(!p.X.empty() && !p.Y.empty(), ErrorCode::BadInput,
          "both partition sides must be nonempty");
  for (int v : p.X)
    require(!contains(p.Y, v), ErrorCode::BadInput,
            "partition sides must be disjoint");
  for (auto& [s, t] : terminals) {
    bool sx = contains(p.X, s), sy = contains(p.Y, s);
    bool tx = contains(p.X, t), ty = contains(p.Y, t);
    require((sx || sy) && (tx || ty), ErrorCode::BadInput,
            "partition must cover all terminal vertices");
    if (sx && ty)
      p.split.push_back({s, t});
    else if (tx && sy)
      p.split.push_back({t, s});
  }
  if (p.split.empty()) return std::nullopt;
  auto add_pairs = [&p](const std::vector<int>& side) {
    for (size_t i = 0; i < side.size(); ++i)
      for (size_t j = i + 1; j < side.size(); ++j)
        p.same_side.push_back({side[i], side[j]});
  };
  add_pairs(p.X);
  add_pairs(p.Y);
  return p;
}

PartitionDags build_partition_dags(const NiceInstance& ni,
                                   const SplittingPartition& part) {
  PartitionDags pd;
  pd.part = part;
  for (auto& [s, t] : part.split)
    pd.split_dags.push_back(st_dag(ni.inst.g, *ni.oracle, s, t));
  for (auto& [s, t] : part.same_side)
    pd.sameside_dags.push_back(st_dag(ni.inst.g, *ni.oracle, s, t));
  return pd;
}

bool validate_dag_cut(const NiceInstance& ni, const PartitionDags& pd,
                      const std::vector<char>& in_x,
                      const std::vector<int>& W_X, const std::vector<int>& W_Y,
                      CutViolation* why) {
  const PlaneMultigraph& g = ni.inst.g;
  require((int)in_x.size() == g.n(), ErrorCode::BadInput,
          "membership vector has wrong size");
  auto report = [&](int cond, const std::string& detail) {
    if (why) {
      why->condition = cond;
      why->detail = detail;
    }
    return false;
  };
  for (int v : W_X)
    if (!in_x[v]) return report(1, "anchor vertex outside the X side");
  for (int v : W_Y)
    if (in_x[v]) return report(1, "anchor vertex outside the Y side");

  // Orient each crossing edge from the X side to the Y side and test dag
  // membership for split pairs; same-side dags must avoid both directions.
  for (int e = 0; e < g.m(); ++e) {
    int u = g.edge(e).u, v = g.edge(e).v;
    if (in_x[u] == in_x[v]) continue;
    int d = in_x[u] ? PlaneMultigraph::edge_dart(e, true)
                    : PlaneMultigraph::edge_dart(e, false);
    for (const auto& dag : pd.split_dags)
      if (!dag.has_arc(d))
        return report(2, "cut edge missing from a split pair's dag");
    for (const auto& dag : pd.sameside_dags)
      if (dag.has_edge(e))
        return report(3, "cut edge lies in a same-side pair's dag");
  }

  // Both sides connected: a consequence of the three conditions, so its
  // failure would indicate a bug rather than an invalid input.
  std::vector<int> xs, ys;
  for (int v = 0; v < g.n(); ++v) (in_x[v] ? xs : ys).push_back(v);
  if (xs.empty() || ys.empty()) return report(1, "a side is empty");
  require(induces_connected(g, xs) && induces_connected(g, ys),
          ErrorCode::Internal, "cut passed conditions but a side is split");
  if (why) *why = {};
  return true;
}

std::optional<std::pair<DagCut, DagCut>> maximally_pushed_cuts(
    const NiceInstance& ni, const PartitionDags& pd,
    const std::vector<int>& W_X, const std::vector<int>& W_Y) {
  const PlaneMultigraph& g = ni.inst.g;
  int n = g.n();

  // Edges usable by a cut: one orientation lies in every split dag and the
  // edge avoids every same-side dag.  Everything else must stay within one
  // side, which the auxiliary digraphs below encode: an arc (a, b) means "if
  // a is on this side, b must be too".
  std::vector<int> aligned(g.m(), -1);
  std::vector<char> usable(g.m(), 0);
  for (int e = 0; e < g.m(); ++e) {
    for (int fwd = 0; fwd < 2; ++fwd) {
      int d = PlaneMultigraph::edge_dart(e, fwd == 0);
      bool all = true;
      for (const auto& dag : pd.split_dags)
        if (!dag.has_arc(d)) {
          all = false;
          break;
        }
      if (all) {
        aligned[e] = d;
        break;
      }
    }
    if (aligned[e] < 0) continue;
    usable[e] = 1;
    for (const auto& dag : pd.sameside_dags)
      if (dag.has_edge(e)) {
        usable[e] = 0;
        break;
      }
  }

  // From the X anchors, expansion may not consume a usable edge forward
  // (that would strand it inside one side in the wrong direction), so the X
  // closure follows usable edges only against their orientation.  The Y
  // closure is symmetric.
  std::vector<std::vector<int>> adv_x(n), adv_y(n);
  for (int e = 0; e < g.m(); ++e) {
    int u = g.edge(e).u, v = g.edge(e).v;
    if (!usable[e]) {
      adv_x[u].push_back(v);
      adv_x[v].push_back(u);
      adv_y[u].push_back(v);
      adv_y[v].push_back(u);
    } else {
      int t = g.tail(aligned[e]), h = g.head(aligned[e]);
      adv_x[h].push_back(t);
      adv_y[t].push_back(h);
    }
  }
  auto closure = [&n](const std::vector<std::vector<int>>& adv,
                      const std::vector<int>& seed) {
    std::vector<char> in(n, 0);
    std::vector<int> stack;
    for (int v : seed)
      if (!in[v]) {
        in[v] = 1;
        stack.push_back(v);
      }
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adv[v])
        if (!in[w]) {
          in[w] = 1;
          stack.push_back(w);
        }
    }
    return in;
  };
  std::vector<char> cx = closure(adv_x, W_X), cy = closure(adv_y, W_Y);
  for (int v = 0; v < n; ++v)
    if (cx[v] && cy[v]) return std::nullopt;

  std::vector<char> in_x_min = cx, in_x_max(n);
  for (int v = 0; v < n; ++v) in_x_max[v] = !cy[v];
  if (!validate_dag_cut(ni, pd, in_x_min, W_X, W_Y)) return std::nullopt;
  if (!validate_dag_cut(ni, pd, in_x_max, W_X, W_Y)) return std::nullopt;
  return std::make_pair(make_cut(g, in_x_min), make_cut(g, in_x_max));
}

std::optional<DagRing> maximal_ring(const NiceInstance& ni,
                                    const PartitionDags& pd,
                                    const std::vector<int>& W_X,
                                    const std::vector<int>& W_Y) {
  const PlaneMultigraph& g = ni.inst.g;
  auto cuts = maximally_pushed_cuts(ni, pd, W_X, W_Y);
  if (!cuts) return std::nullopt;
  DagRing r;
  r.inner = cuts->first;
  r.outer = cuts->second;
  std::vector<char> in_ux(g.n(), 0), in_uy(g.n(), 0);
  for (int v : r.inner.vx) in_ux[v] = 1;
  for (int v : r.outer.vy) in_uy[v] = 1;
  for (int v = 0; v < g.n(); ++v) {
    if (in_ux[v])
      r.ux.push_back(v);
    else if (in_uy[v])
      r.uy.push_back(v);
    else
      r.umid.push_back(v);
  }

  // No edge may jump straight across the middle region.
  for (int e = 0; e < g.m(); ++e) {
    int u = g.edge(e).u, v = g.edge(e).v;
    if ((in_ux[u] && in_uy[v]) || (in_uy[u] && in_ux[v])) return std::nullopt;
  }

  // Every entry edge / exit edge combination must lie on a common shortest
  // path of every split pair, which reduces to an exact distance identity.
  struct Bd {
    int from, to;
    Rat w;
  };
  std::vector<Bd> entry, exit;
  for (int e = 0; e < g.m(); ++e) {
    int u = g.edge(e).u, v = g.edge(e).v;
    bool umid_u = !in_ux[u] && !in_uy[u], umid_v = !in_ux[v] && !in_uy[v];
    if (in_ux[u] && umid_v) entry.push_back({u, v, g.edge(e).w});
    if (in_ux[v] && umid_u) entry.push_back({v, u, g.edge(e).w});
    if (umid_u && in_uy[v]) exit.push_back({u, v, g.edge(e).w});
    if (umid_v && in_uy[u]) exit.push_back({v, u, g.edge(e).w});
  }
  DistanceOracle& oracle = *ni.oracle;
  for (size_t pi = 0; pi < pd.part.split.size(); ++pi) {
    auto [t, tp] = pd.part.split[pi];
    Rat total = pd.split_dags[pi].dist;
    for (const Bd& e1 : entry)
      for (const Bd& e2 : exit) {
        auto a = oracle.d(t, e1.from), b = oracle.d(e1.to, e2.from),
             c = oracle.d(e2.to, tp);
        if (!a || !b || !c) return std::nullopt;
        if (*a + e1.w + *b + e2.w + *c != total) return std::nullopt;
      }
  }

  r.cyc_inner = separating_dual_cycle(g, r.inner.vx);
  r.cyc_outer = separating_dual_cycle(g, r.outer.vx);
  r.footprint = region_footprint(g, r.cyc_inner, r.cyc_outer);
  return r;
}

DagStructure dag_structure(const NiceInstance& ni, const PartitionDags& pd,
                           const DagRing& ring) {
  const PlaneMultigraph& g = ni.inst.g;
  DagStructure s;
  s.verts = ring.umid;
  std::vector<char> mid(g.n(), 0), xside(g.n(), 0), yside(g.n(), 0);
  for (int v : ring.umid) mid[v] = 1;
  for (int v : ring.ux) xside[v] = 1;
  for (int v : ring.uy) yside[v] = 1;

  std::map<int, int> local;
  for (size_t i = 0; i < s.verts.size(); ++i) local[s.verts[i]] = (int)i;
  std::vector<std::vector<int>> out(s.verts.size());
  for (int e = 0; e < g.m(); ++e) {
    int u = g.edge(e).u, v = g.edge(e).v;
    if (!mid[u] || !mid[v]) continue;
    int dir = -1;
    for (int fwd = 0; fwd < 2; ++fwd) {
      int d = PlaneMultigraph::edge_dart(e, fwd == 0);
      bool all = true;
      for (const auto& dag : pd.split_dags)
        if (!dag.has_arc(d)) {
          all = false;
          break;
        }
      if (all) {
        dir = d;
        break;
      }
    }
    if (dir < 0)
      fail(ErrorCode::OrientationConflict,
           "middle edge lies in no common split direction");
    for (const auto& dag : pd.sameside_dags)
      require(!dag.has_edge(e), ErrorCode::Internal,
              "middle edge lies in a same-side dag");
    s.arcs.push_back({g.tail(dir), g.head(dir)});
    out[local[g.tail(dir)]].push_back(local[g.head(dir)]);
  }
  std::sort(s.arcs.begin(), s.arcs.end());

  for (int v : ring.umid) {
    bool tx = false, ty = false;
    for (int d : g.darts_out(v)) {
      if (xside[g.head(d)]) tx = true;
      if (yside[g.head(d)]) ty = true;
    }
    if (tx) s.tx.push_back(v);
    if (ty) s.ty.push_back(v);
  }

  // Acyclicity via Kahn's algorithm.
  std::vector<int> indeg(s.verts.size(), 0);
  for (size_t i = 0; i < out.size(); ++i)
    for (int j : out[i]) indeg[j]++;
  std::vector<int> queue;
  for (size_t i = 0; i < indeg.size(); ++i)
    if (!indeg[i]) queue.push_back((int)i);
  size_t seen = 0;
  while (!queue.empty()) {
    int i = queue.back();
    queue.pop_back();
    ++seen;
    for (int j : out[i])
      if (--indeg[j] == 0) queue.push_back(j);
  }
  require(seen == s.verts.size(), ErrorCode::Internal,
          "oriented middle region contains a cycle");
  return s;
}

std::optional<std::pair<std::vector<int>, std::vector<int>>> extension_anchors(
    const RingDecomposition& R, const SplittingPartition& part) {
  std::vector<int> wx = part.X, wy = part.Y;
  for (const auto& entry : R.entries) {
    const auto& Xi = entry.part.X;
    const auto& Yi = entry.part.Y;
    // On a shared ground set, "does not cross" means one of the four subset
    // relations below; the matching far side of that ring joins the anchors.
    if (subset(Xi, part.X))
      wx.insert(wx.end(), entry.ring.ux.begin(), entry.ring.ux.end());
    else if (subset(Yi, part.X))
      wx.insert(wx.end(), entry.ring.uy.begin(), entry.ring.uy.end());
    else if (subset(Xi, part.Y))
      wy.insert(wy.end(), entry.ring.ux.begin(), entry.ring.ux.end());
    else if (subset(Yi, part.Y))
      wy.insert(wy.end(), entry.ring.uy.begin(), entry.ring.uy.end());
    else
      return std::nullopt;
  }
  wx = sorted_unique(wx);
  wy = sorted_unique(wy);
  for (int v : wx)
    require(!contains(wy, v), ErrorCode::Internal,
            "extension anchors overlap");
  return std::make_pair(wx, wy);
}

RingDecomposition decompose(const NiceInstance& ni,
                            const std::vector<int>& superset) {
  std::vector<int> that = sorted_unique(superset);
  for (auto& [s, t] : ni.inst.terminals) {
    require(contains(that, s) && contains(that, t), ErrorCode::BadInput,
            "superset must contain every terminal vertex");
  }
  int r = (int)that.size();
  require(r >= 2 && r <= 20, ErrorCode::BadInput,
          "superset size out of supported range");

  // Candidate partitions: X always holds the least superset vertex, so each
  // unordered bipartition appears once.  Masks are over positions in the
  // sorted superset.
  struct Cand {
    unsigned mask;
    SplittingPartition part;
  };
  std::vector<Cand> cands;
  std::map<unsigned, PartitionDags> dag_cache;
  for (unsigned mask = 1; mask < (1u << r); mask += 2) {
    if (mask == (1u << r) - 1) continue;
    std::vector<int> X, Y;
    for (int i = 0; i < r; ++i) ((mask >> i) & 1 ? X : Y).push_back(that[i]);
    auto part = split_sets(ni.inst.terminals, X, Y);
    if (part) cands.push_back({mask, *part});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    int pa = __builtin_popcount(a.mask), pb = __builtin_popcount(b.mask);
    return pa != pb ? pa < pb : a.mask < b.mask;
  });

  RingDecomposition R;
  std::set<unsigned> used;
  while (true) {
    int best = -1;
    size_t best_size = 0;
    unsigned best_mask = 0;
    std::optional<DagRing> best_ring;
    for (size_t i = 0; i < cands.size(); ++i) {
      if (used.count(cands[i].mask)) continue;
      auto anchors = extension_anchors(R, cands[i].part);
      if (!anchors) continue;
      auto it = dag_cache.find(cands[i].mask);
      if (it == dag_cache.end())
        it = dag_cache
                 .emplace(cands[i].mask,
                          build_partition_dags(ni, cands[i].part))
                 .first;
      auto ring = maximal_ring(ni, it->second, anchors->first,
                               anchors->second);
      if (!ring) continue;
      size_t size = ring->umid.size();
      if (best < 0 || size > best_size ||
          (size == best_size && cands[i].mask < best_mask)) {
        best = (int)i;
        best_size = size;
        best_mask = cands[i].mask;
        best_ring = std::move(ring);
      }
    }
    if (best < 0) break;
    used.insert(cands[best].mask);
    R.entries.push_back({cands[best].part, std::move(*best_ring)});
  }
  R.exhaustive = true;
  require((int)R.entries.size() <= 2 * r - 2, ErrorCode::Internal,
          "decomposition exceeds the ring-count bound");
  for (size_t i = 0; i < R.entries.size(); ++i)
    for (size_t j = i + 1; j < R.entries.size(); ++j)
      require(R.entries[i].ring.footprint.disjoint(
                  R.entries[j].ring.footprint),
              ErrorCode::Internal, "ring regions overlap");
  return R;
}

std::vector<DagCut> brute_force_cuts(const NiceInstance& ni,
                                     const PartitionDags& pd,
                                     const std::vector<int>& W_X,
                                     const std::vector<int>& W_Y,
                                     int max_vertices) {
  const PlaneMultigraph& g = ni.inst.g;
  require(g.n() <= max_vertices, ErrorCode::LimitExceeded,
          "instance too large for exhaustive cut search");
  std::vector<DagCut> cuts;
  for (unsigned mask = 1; mask + 1 < (1u << g.n()); ++mask) {
    std::vector<char> in_x(g.n());
    for (int v = 0; v < g.n(); ++v) in_x[v] = (mask >> v) & 1;
    if (validate_dag_cut(ni, pd, in_x, W_X, W_Y))
      cuts.push_back(make_cut(g, in_x));
  }
  return cuts;
}

int crossing_count(const PlaneMultigraph& g, const std::vector<int>& path,
                   const DagCut& cut, PairClass cls) {
  int count = 0;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    auto e = g.find_edge(path[i], path[i + 1]);
    require(e.has_value(), ErrorCode::BadInput, "path uses a missing edge");
    if (contains(cut.cut_edges, *e)) ++count;
  }
  if (cls == PairClass::Split)
    require(count <= 1, ErrorCode::Internal,
            "split-pair geodesic crosses a cut twice");
  if (cls == PairClass::SameSide)
    require(count == 0, ErrorCode::Internal,
            "same-side geodesic crosses a cut");
  return count;
}

}  // namespace pdsp
