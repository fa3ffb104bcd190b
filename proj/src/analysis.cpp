#include "pdsp/analysis.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>

namespace pdsp {

namespace {

// Edge ids along a vertex path, resolving parallel edges to the smallest id.
std::vector<int> path_edges(const PlaneMultigraph& g,
                            const std::vector<int>& p) {
  std::vector<int> out;
  out.reserve(p.size() > 0 ? p.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    int e = g.find_edge(p[i], p[i + 1]).value_or(-1);
    require(e >= 0, ErrorCode::BadInput,
            "path step " + std::to_string(p[i]) + "->" +
                std::to_string(p[i + 1]) + " is not an edge");
    out.push_back(e);
  }
  return out;
}

// Splits every face of the component into the two sides of a simple cycle
// by flooding the dual while refusing to cross the cycle's edges.  Returns
// 0/1 side labels indexed by face, -1 for faces of other components.
struct CycleSides {
  std::vector<int> side;
  // Side of a vertex that does not lie on the cycle: taken from any face
  // around it, all of which agree.
  int of_vertex(const PlaneMultigraph& g, int v) const {
    if (g.degree(v) == 0) return -1;
    return side[g.face_left(g.darts_out(v)[0])];
  }
};

CycleSides split_sides(const PlaneMultigraph& g,
                       const std::vector<int>& cycle_edges) {
  std::set<int> blocked(cycle_edges.begin(), cycle_edges.end());
  CycleSides cs;
  cs.side.assign(g.face_count(), -1);
  require(!cycle_edges.empty(), ErrorCode::BadInput, "empty cycle");
  int start = g.face_left(g.edge_dart(cycle_edges.front(), 0));
  int labels = 0;
  // Seed from both faces of the first cycle edge; they sit on opposite
  // sides, and together they reach every face of the component.
  for (int seed : {g.face_left(g.edge_dart(cycle_edges.front(), 0)),
                   g.face_right(g.edge_dart(cycle_edges.front(), 0))}) {
    if (cs.side[seed] != -1) continue;
    cs.side[seed] = labels;
    std::vector<int> queue{seed};
    while (!queue.empty()) {
      int f = queue.back();
      queue.pop_back();
      for (int d : g.face_walk(f)) {
        if (blocked.count(g.dart_edge(d))) continue;
        int nf = g.face_right(d);
        if (cs.side[nf] == -1) {
          cs.side[nf] = labels;
          queue.push_back(nf);
        }
      }
    }
    ++labels;
  }
  require(labels == 2, ErrorCode::Internal,
          "cycle does not separate its component");
  (void)start;
  return cs;
}

}  // namespace

std::vector<Handle> classify_handles(
    const PlaneMultigraph& g, const std::vector<int>& P,
    const std::vector<int>& Q,
    const std::vector<std::pair<int, int>>& terminals) {
  require(Q.size() >= 2, ErrorCode::BadInput, "reference path too short");
  std::vector<int> q_edges = path_edges(g, Q);
  std::vector<int> p_edges = path_edges(g, P);

  std::map<int, int> q_pos;
  for (std::size_t i = 0; i < Q.size(); ++i) {
    require(q_pos.emplace(Q[i], static_cast<int>(i)).second,
            ErrorCode::BadInput, "reference path revisits a vertex");
  }

  // Cut P at every vertex it shares with Q.  Each piece between two
  // consecutive cuts is a candidate handle.
  std::vector<int> hits;
  for (std::size_t i = 0; i < P.size(); ++i)
    if (q_pos.count(P[i])) hits.push_back(static_cast<int>(i));

  std::vector<Handle> out;
  for (std::size_t h = 0; h + 1 < hits.size(); ++h) {
    int a = hits[h], b = hits[h + 1];
    int pa = q_pos.at(P[a]), pb = q_pos.at(P[b]);
    bool internal_a = pa > 0 && pa + 1 < static_cast<int>(Q.size());
    bool internal_b = pb > 0 && pb + 1 < static_cast<int>(Q.size());
    if (!internal_a || !internal_b || pa == pb) continue;
    if (b == a + 1 && std::abs(pa - pb) == 1) {
      // Single step that may just run along Q; only a genuine parallel
      // edge closes a cycle.
      int via = p_edges[a];
      if (via == q_edges[std::min(pa, pb)]) continue;
    }

    Handle hd;
    hd.q_from = std::min(pa, pb);
    hd.q_to = std::max(pa, pb);
    hd.path.assign(P.begin() + a, P.begin() + b + 1);
    if (pa > pb) std::reverse(hd.path.begin(), hd.path.end());

    // The closing cycle: the replaced stretch of Q plus the handle.
    std::vector<int> cyc(q_edges.begin() + hd.q_from,
                         q_edges.begin() + hd.q_to);
    std::vector<int> h_edges = path_edges(g, hd.path);
    cyc.insert(cyc.end(), h_edges.begin(), h_edges.end());
    std::set<int> on_cycle(Q.begin() + hd.q_from, Q.begin() + hd.q_to + 1);
    for (std::size_t i = 1; i + 1 < hd.path.size(); ++i)
      on_cycle.insert(hd.path[i]);

    CycleSides cs = split_sides(g, cyc);
    int s1 = cs.of_vertex(g, Q.front());
    int s2 = cs.of_vertex(g, Q.back());
    require(s1 >= 0 && s2 >= 0, ErrorCode::Internal,
            "reference endpoints lost while classifying a handle");
    hd.winding = s1 != s2;
    if (!hd.winding) {
      int far_side = 1 - s1;
      hd.empty = true;
      for (const auto& [s, t] : terminals) {
        for (int v : {s, t}) {
          if (on_cycle.count(v)) continue;
          if (cs.of_vertex(g, v) == far_side) hd.empty = false;
        }
      }
    }
    out.push_back(std::move(hd));
  }
  return out;
}

std::vector<int> pull(const PlaneMultigraph& g, const std::vector<int>& Q,
                      const Handle& h) {
  require(!h.winding && h.empty, ErrorCode::NotEmptyHandle,
          "only empty regular handles can be pulled");
  require(h.q_from > 0 && h.q_to < static_cast<int>(Q.size()) - 1 &&
              h.q_from < h.q_to && !h.path.empty() &&
              Q[h.q_from] == h.path.front() && Q[h.q_to] == h.path.back(),
          ErrorCode::BadInput, "handle does not attach to this path");

  std::vector<int> out(Q.begin(), Q.begin() + h.q_from);
  out.insert(out.end(), h.path.begin(), h.path.end());
  out.insert(out.end(), Q.begin() + h.q_to + 1, Q.end());
  std::set<int> seen(out.begin(), out.end());
  require(seen.size() == out.size(), ErrorCode::Internal,
          "pull produced a non-simple path");
  path_edges(g, out);
  return out;
}

std::vector<int> boundary_edges(const PlaneMultigraph& g,
                                const std::vector<int>& Q) {
  std::set<int> on_q(Q.begin(), Q.end());
  std::vector<int> q_edges = path_edges(g, Q);
  std::set<int> skip(q_edges.begin(), q_edges.end());
  std::vector<int> out;
  for (int e = 0; e < g.m(); ++e) {
    if (skip.count(e)) continue;
    if (on_q.count(g.tail(2 * e)) || on_q.count(g.head(2 * e)))
      out.push_back(e);
  }
  return out;
}

namespace {

int load_against(const PlaneMultigraph& g, const Solution& sol,
                 const std::vector<int>& Q) {
  std::vector<int> bd = boundary_edges(g, Q);
  std::set<int> bset(bd.begin(), bd.end());
  int total = 0;
  for (const auto& p : sol)
    for (int e : path_edges(g, p))
      if (bset.count(e)) ++total;
  return total;
}

}  // namespace

LoadReport load_report(const PlaneMultigraph& g, const Solution& sol,
                       const std::vector<int>& Q,
                       const std::vector<std::pair<int, int>>& terminals) {
  LoadReport rep;
  rep.load = load_against(g, sol, Q);

  for (std::size_t i = 0; i < sol.size(); ++i) {
    for (Handle& h : classify_handles(g, sol[i], Q, terminals)) {
      h.source_path = static_cast<int>(i);
      ++rep.handles_total;
      if (h.winding) {
        ++rep.handles_winding;
      } else {
        ++rep.handles_regular;
        if (h.empty) ++rep.handles_empty;
      }
    }
  }

  // Greedy descent: pull the first empty regular handle available and
  // repeat.  For geodesic references every pull strictly lowers the load;
  // the explicit check keeps the loop finite for arbitrary input.
  std::vector<int> cur = Q;
  int cur_load = rep.load;
  for (;;) {
    Handle const* pick = nullptr;
    std::vector<Handle> found;
    for (std::size_t i = 0; i < sol.size() && !pick; ++i) {
      found = classify_handles(g, sol[i], cur, terminals);
      for (const Handle& h : found)
        if (!h.winding && h.empty) {
          pick = &h;
          break;
        }
    }
    if (!pick) break;
    std::vector<int> next = pull(g, cur, *pick);
    int next_load = load_against(g, sol, next);
    if (next_load >= cur_load) break;
    cur = std::move(next);
    cur_load = next_load;
    ++rep.pulls;
  }
  rep.pulled_load = cur_load;
  rep.final_path = std::move(cur);
  return rep;
}

int dual_load(const PlaneMultigraph& g, const Solution& sol,
              const std::vector<int>& crossed_edges) {
  std::set<int> used;
  for (const auto& p : sol)
    for (int e : path_edges(g, p)) used.insert(e);
  int total = 0;
  for (int e : crossed_edges)
    if (used.count(e)) ++total;
  return total;
}

RootedRing make_rooted_ring(const PlaneMultigraph& g, int outer_face,
                            int inner_face) {
  require(outer_face >= 0 && outer_face < g.face_count() && inner_face >= 0 &&
              inner_face < g.face_count(),
          ErrorCode::BadInput, "rooted ring face out of range");
  RootedRing r;
  r.c1 = outer_face;
  r.c2 = inner_face;
  if (outer_face == inner_face) return r;

  // Breadth-first in the dual, remembering the dart whose left-to-right
  // crossing realises each step.
  std::vector<int> via(g.face_count(), -1);
  std::vector<int> queue{outer_face};
  std::vector<char> seen(g.face_count(), 0);
  seen[outer_face] = 1;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int f = queue[qi];
    if (f == inner_face) break;
    for (int d : g.face_walk(f)) {
      int nf = g.face_right(d);
      if (!seen[nf]) {
        seen[nf] = 1;
        via[nf] = d;
        queue.push_back(nf);
      }
    }
  }
  require(seen[inner_face], ErrorCode::BadInput,
          "faces lie in different components");
  std::vector<int> rev;
  for (int f = inner_face; f != outer_face; f = g.face_left(via[f]))
    rev.push_back(via[f]);
  r.crossed.assign(rev.rbegin(), rev.rend());
  return r;
}

int winding_number(const PlaneMultigraph& g, const std::vector<int>& path,
                   const RootedRing& ring) {
  // Direction the path takes over each of its edges.
  std::map<int, int> travel;  // edge -> dart
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    int e = g.find_edge(path[i], path[i + 1]).value_or(-1);
    require(e >= 0, ErrorCode::BadInput, "path step is not an edge");
    int d = g.tail(2 * e) == path[i] ? 2 * e : 2 * e + 1;
    travel[e] = d;
  }
  int total = 0;
  for (int w : ring.crossed) {
    auto it = travel.find(g.dart_edge(w));
    if (it == travel.end()) continue;
    // The curve step runs left(w) -> right(w); a path taking pair(w)
    // passes the curve from its left side to its right.
    total += it->second == g.pair_dart(w) ? 1 : -1;
  }
  return total;
}

}  // namespace pdsp
