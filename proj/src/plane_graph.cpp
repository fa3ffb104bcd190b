#include "pdsp/plane_graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace pdsp {

PlaneMultigraph PlaneMultigraph::build(int n, std::vector<EdgeRec> edges,
                                       const std::vector<std::vector<int>>& rot_edges,
                                       std::optional<int> outer_hint) {
  require(int(rot_edges.size()) == n, ErrorCode::BadInput,
          "rotation table size does not match vertex count");
  std::vector<std::vector<int>> rot_darts(n);
  std::vector<int> loop_seen(edges.size(), 0);
  for (int v = 0; v < n; ++v) {
    for (int e : rot_edges[v]) {
      require(e >= 0 && e < int(edges.size()), ErrorCode::BadInput,
              "rotation refers to unknown edge");
      const auto& er = edges[e];
      int d;
      if (er.u == er.v) {
        require(v == er.u, ErrorCode::BadInput, "loop edge in wrong rotation");
        d = 2 * e + (loop_seen[e]++);
      } else if (v == er.u) {
        d = 2 * e;
      } else {
        require(v == er.v, ErrorCode::BadInput,
                "rotation lists edge at a non-endpoint");
        d = 2 * e + 1;
      }
      rot_darts[v].push_back(d);
    }
  }
  return build_darts(n, std::move(edges), std::move(rot_darts), outer_hint);
}

PlaneMultigraph PlaneMultigraph::build_darts(int n, std::vector<EdgeRec> edges,
                                             std::vector<std::vector<int>> rot_darts,
                                             std::optional<int> outer_hint) {
  PlaneMultigraph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.rot_ = std::move(rot_darts);
  require(int(g.rot_.size()) == n, ErrorCode::BadInput,
          "rotation table size does not match vertex count");
  for (const auto& er : g.edges_) {
    require(er.u >= 0 && er.u < n && er.v >= 0 && er.v < n,
            ErrorCode::BadInput, "edge endpoint out of range");
    require(er.w > Rat(0), ErrorCode::NonPositiveWeight,
            "edge weight must be positive");
  }
  g.finish(outer_hint);
  return g;
}

void PlaneMultigraph::finish(std::optional<int> outer_hint) {
  const int nd = dart_count();
  next_.assign(nd, -1);
  prev_.assign(nd, -1);
  std::vector<int> owner(nd, -1);
  for (int v = 0; v < n_; ++v) {
    const auto& r = rot_[v];
    for (size_t i = 0; i < r.size(); ++i) {
      int d = r[i];
      require(d >= 0 && d < nd, ErrorCode::BadInput, "rotation dart out of range");
      require(tail(d) == v, ErrorCode::BadInput,
              "rotation holds a dart of another vertex");
      require(owner[d] == -1, ErrorCode::DuplicateDart,
              "dart appears twice in the rotation system");
      owner[d] = v;
      next_[d] = r[(i + 1) % r.size()];
      prev_[d] = r[(i + r.size() - 1) % r.size()];
    }
  }
  for (int d = 0; d < nd; ++d)
    require(owner[d] != -1, ErrorCode::DuplicateDart,
            "dart missing from the rotation system");

  // Face orbits of d -> next(pair(d)).
  face_of_.assign(nd, -1);
  face_walks_.clear();
  for (int d0 = 0; d0 < nd; ++d0) {
    if (face_of_[d0] != -1) continue;
    int f = int(face_walks_.size());
    face_walks_.emplace_back();
    int d = d0;
    do {
      face_of_[d] = f;
      face_walks_[f].push_back(d);
      d = next_[pair_dart(d)];
    } while (d != d0);
  }

  // Connected components over vertices.
  comp_of_.assign(n_, -1);
  comp_count_ = 0;
  for (int s = 0; s < n_; ++s) {
    if (comp_of_[s] != -1) continue;
    int c = comp_count_++;
    std::vector<int> stack{s};
    comp_of_[s] = c;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int d : rot_[v]) {
        int u = head(d);
        if (comp_of_[u] == -1) {
          comp_of_[u] = c;
          stack.push_back(u);
        }
      }
    }
  }

  // Genus test per component: V - E + F = 2 whenever the component has an
  // edge.  (An isolated vertex has no darts and hence no faces of its own.)
  std::vector<int> cv(comp_count_, 0), ce(comp_count_, 0), cf(comp_count_, 0);
  for (int v = 0; v < n_; ++v) cv[comp_of_[v]]++;
  for (const auto& er : edges_) ce[comp_of_[er.u]]++;
  for (const auto& walk : face_walks_) cf[comp_of_[tail(walk[0])]]++;
  for (int c = 0; c < comp_count_; ++c) {
    if (ce[c] == 0) continue;
    require(cv[c] - ce[c] + cf[c] == 2, ErrorCode::EulerViolation,
            "rotation system is not a sphere embedding");
  }

  if (outer_hint) {
    require(*outer_hint >= 0 && *outer_hint < nd, ErrorCode::BadInput,
            "outer face hint dart out of range");
    outer_face_ = face_of_[*outer_hint];
  } else if (!face_walks_.empty()) {
    // Longest boundary walk; face ids already follow smallest-dart order,
    // so ties resolve deterministically.
    int best = 0;
    for (int f = 1; f < face_count(); ++f)
      if (face_walks_[f].size() > face_walks_[best].size()) best = f;
    outer_face_ = best;
  } else {
    outer_face_ = -1;
  }
}

PlaneMultigraph PlaneMultigraph::dual() const {
  std::vector<EdgeRec> dedges(m());
  for (int e = 0; e < m(); ++e)
    dedges[e] = EdgeRec{face_of_[2 * e], face_of_[2 * e + 1], Rat(1)};
  // The rotation around a face-vertex is the reversed face walk: those are
  // exactly the dual darts leaving it, in clockwise order on the other side.
  std::vector<std::vector<int>> drot(face_count());
  for (int f = 0; f < face_count(); ++f) {
    drot[f] = face_walks_[f];
    std::reverse(drot[f].begin(), drot[f].end());
  }
  return build_darts(face_count(), std::move(dedges), std::move(drot));
}

std::optional<int> PlaneMultigraph::find_edge(int u, int v) const {
  for (int d : rot_[u])
    if (head(d) == v) return dart_edge(d);
  return std::nullopt;
}

std::optional<int> PlaneMultigraph::find_dart(int u, int v) const {
  for (int d : rot_[u])
    if (head(d) == v) return d;
  return std::nullopt;
}

std::vector<std::vector<int>> components(const PlaneMultigraph& g) {
  std::vector<std::vector<int>> out(g.component_count());
  for (int v = 0; v < g.n(); ++v) out[g.component_of(v)].push_back(v);
  return out;
}

bool induces_connected(const PlaneMultigraph& g, const std::vector<int>& verts) {
  if (verts.empty()) return false;
  std::vector<char> in(g.n(), 0), seen(g.n(), 0);
  for (int v : verts) in[v] = 1;
  std::vector<int> stack{verts[0]};
  seen[verts[0]] = 1;
  size_t cnt = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int d : g.darts_out(v)) {
      int u = g.head(d);
      if (in[u] && !seen[u]) {
        seen[u] = 1;
        ++cnt;
        stack.push_back(u);
      }
    }
  }
  return cnt == verts.size();
}

DualCycle separating_dual_cycle(const PlaneMultigraph& g,
                                const std::vector<int>& side) {
  std::vector<char> in(g.n(), 0);
  for (int v : side) {
    require(v >= 0 && v < g.n(), ErrorCode::BadInput, "side vertex out of range");
    in[v] = 1;
  }
  std::vector<int> rest;
  for (int v = 0; v < g.n(); ++v)
    if (!in[v]) rest.push_back(v);
  require(!side.empty() && !rest.empty(), ErrorCode::SideNotConnected,
          "cut side may not be empty");
  require(induces_connected(g, side), ErrorCode::SideNotConnected,
          "cut side does not induce a connected subgraph");
  require(induces_connected(g, rest), ErrorCode::SideNotConnected,
          "cut complement does not induce a connected subgraph");

  // Both sides connected makes the cut a bond, so the crossed duals form a
  // simple dual cycle.  We orient it with `side` on the left, which means
  // crossing each cut edge along the dart whose head is in `side`.
  std::vector<int> crossing;
  for (int e = 0; e < g.m(); ++e) {
    int u = g.edge(e).u, v = g.edge(e).v;
    if (in[u] != in[v]) crossing.push_back(in[u] ? 2 * e + 1 : 2 * e);
  }
  require(!crossing.empty(), ErrorCode::Internal, "cut without crossing edges");

  // Chain: after crossing dart d we stand in face_right(d); leave that face
  // through the next crossed edge along its boundary walk after pair(d).
  std::vector<char> is_crossing(g.dart_count(), 0);
  for (int d : crossing) is_crossing[d] = 1;
  DualCycle cyc;
  cyc.inside = side;
  std::sort(cyc.inside.begin(), cyc.inside.end());
  std::vector<char> used(g.dart_count(), 0);
  int d = crossing[0];
  do {
    require(!used[d], ErrorCode::Internal, "dual cut walk revisits an edge");
    used[d] = 1;
    cyc.crossed.push_back(d);
    // After crossing d we stand in f = face_right(d).  The walk leaves f
    // through the unique crossing dart whose left face is f; every other
    // cut edge on f's boundary is the one we just came through.
    int f = g.face_right(d);
    const auto& walk = g.face_walk(f);
    size_t pos = 0;
    while (walk[pos] != PlaneMultigraph::pair_dart(d)) ++pos;
    int nd = -1;
    for (size_t k = 0; k < walk.size(); ++k) {
      int cand = walk[(pos + 1 + k) % walk.size()];
      if (is_crossing[cand]) {
        nd = cand;
        break;
      }
    }
    require(nd != -1, ErrorCode::Internal, "dual cut walk is stuck");
    d = nd;
  } while (d != crossing[0]);
  require(cyc.crossed.size() == crossing.size(), ErrorCode::Internal,
          "cut edges do not form a single dual cycle");

  for (int cd : cyc.crossed) cyc.edge_set.push_back(PlaneMultigraph::dart_edge(cd));
  std::sort(cyc.edge_set.begin(), cyc.edge_set.end());
  return cyc;
}

bool RegionFootprint::disjoint(const RegionFootprint& o) const {
  auto inter = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(out));
    return !out.empty();
  };
  return !inter(vertices, o.vertices) && !inter(edges, o.edges) &&
         !inter(faces, o.faces);
}

RegionFootprint region_footprint(const PlaneMultigraph& g, const DualCycle& c1,
                                 const DualCycle& c2) {
  RegionFootprint fp;
  if (c1.same_edges(c2)) return fp;

  std::vector<char> in1(g.n(), 0), in2(g.n(), 0);
  for (int v : c1.inside) in1[v] = 1;
  for (int v : c2.inside) in2[v] = 1;

  // Normalize both cycles to the side pair S1 strictly inside S2.
  auto subset = [&](const std::vector<char>& a, const std::vector<char>& b) {
    for (int v = 0; v < g.n(); ++v)
      if (a[v] && !b[v]) return false;
    return true;
  };
  std::vector<char> s1, s2;
  bool found = false;
  for (int flip1 = 0; flip1 < 2 && !found; ++flip1) {
    for (int flip2 = 0; flip2 < 2 && !found; ++flip2) {
      std::vector<char> a = in1, b = in2;
      if (flip1)
        for (auto& x : a) x = !x;
      if (flip2)
        for (auto& x : b) x = !x;
      if (subset(a, b)) {
        s1 = a;
        s2 = b;
        found = true;
      }
    }
  }
  require(found, ErrorCode::CyclesCross,
          "dual cycles do not bound an annulus");

  std::vector<char> between(g.n(), 0);
  for (int v = 0; v < g.n(); ++v) {
    between[v] = s2[v] && !s1[v];
    if (between[v]) fp.vertices.push_back(v);
  }

  std::vector<char> e1(g.m(), 0), e2(g.m(), 0);
  for (int e : c1.edge_set) e1[e] = 1;
  for (int e : c2.edge_set) e2[e] = 1;
  for (int e = 0; e < g.m(); ++e) {
    bool touch = between[g.edge(e).u] || between[g.edge(e).v];
    bool one_crossing = e1[e] != e2[e];
    if (touch || one_crossing) fp.edges.push_back(e);
  }

  // A face untouched by either curve has all boundary vertices on one side;
  // it lies in the annulus exactly when those vertices are between.
  std::vector<char> on_cycle(g.face_count(), 0);
  for (int e = 0; e < g.m(); ++e)
    if (e1[e] || e2[e]) {
      on_cycle[g.face_left(2 * e)] = 1;
      on_cycle[g.face_right(2 * e)] = 1;
    }
  for (int f = 0; f < g.face_count(); ++f) {
    if (on_cycle[f]) continue;
    if (between[g.tail(g.face_walk(f)[0])]) fp.faces.push_back(f);
  }
  return fp;
}

} // namespace pdsp
