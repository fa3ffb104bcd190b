#include "pdsp/homology.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "pdsp/brute_force.hpp"

namespace pdsp {

namespace {

int pd(int d) { return PlaneMultigraph::pair_dart(d); }
int de(int d) { return PlaneMultigraph::dart_edge(d); }

// ---------------------------------------------------------------------------
// Clockwise walk around the skeleton.
//
// Thicken the skeleton tree slightly and walk its boundary curve clockwise.
// Combinatorially: every crossed dart has an angular position in the walk of
// the face it leaves, the curve enters a face at the position of the skeleton
// edge it arrives on and leaves through the angularly preceding skeleton
// edge, and terminal spurs are passed while sweeping the positions in
// between (downwards, since clockwise means decreasing walk position).
// ---------------------------------------------------------------------------

struct RawItem {
  int q = -1, j = -1;
  bool fwd = false;
  int term = 0;
};

std::vector<TourBlock> coalesce(const std::vector<RawItem>& raw,
                                const Skeleton& sk) {
  std::vector<TourBlock> blocks;
  int lastj = -1;
  auto closes = [&](const TourBlock& b) {
    int len = int(sk.spinal_cross[b.spinal].size());
    require(b.forward ? lastj == len - 1 : lastj == 0, ErrorCode::Internal,
            "tour leaves a spinal path before its end");
  };
  for (const RawItem& r : raw) {
    if (r.term != 0) {
      if (!blocks.empty() && blocks.back().spinal >= 0) closes(blocks.back());
      blocks.push_back({-1, false, r.term});
      continue;
    }
    if (!blocks.empty() && blocks.back().spinal == r.q &&
        blocks.back().forward == r.fwd && lastj == (r.fwd ? r.j - 1 : r.j + 1)) {
      lastj = r.j;
      continue;
    }
    if (!blocks.empty() && blocks.back().spinal >= 0) closes(blocks.back());
    int len = int(sk.spinal_cross[r.q].size());
    require(r.fwd ? r.j == 0 : r.j == len - 1, ErrorCode::Internal,
            "tour enters a spinal path in the middle");
    blocks.push_back({r.q, r.fwd, 0});
    lastj = r.j;
  }
  if (!blocks.empty() && blocks.back().spinal >= 0) closes(blocks.back());
  return blocks;
}

}  // namespace

std::vector<TourBlock> skeleton_tour(const DapInstance& inst,
                                     const Skeleton& sk) {
  const PlaneMultigraph& g = inst.g;
  const int k = inst.k();
  require(int(sk.term_faces.size()) == k, ErrorCode::BadInput,
          "skeleton and instance disagree on the pair count");
  require(sk.spinal_faces.size() == sk.spinal_cross.size(), ErrorCode::BadInput,
          "malformed skeleton");

  // Doubled angular position of every dart in its face walk; odd keys in
  // between are reserved for terminal spurs.
  std::vector<int> pos2(g.dart_count(), -1);
  for (int f = 0; f < g.face_count(); ++f) {
    const auto& w = g.face_walk(f);
    for (int i = 0; i < int(w.size()); ++i) pos2[w[i]] = 2 * i;
  }

  // Terminal visits, keyed at the tip of the spur: just after the arc into
  // the terminal, which the face walk follows directly with the arc out.
  std::map<int, std::vector<std::pair<int, int>>> events;
  auto add_event = [&](int v, int sym) {
    require(g.degree(v) == 1, ErrorCode::BadInput, "terminal degree");
    int din = pd(g.darts_out(v)[0]);
    events[g.face_of(din)].push_back({pos2[din] + 1, sym});
  };
  for (int i = 0; i < k; ++i) {
    add_event(inst.terminals[i].first, i + 1);
    add_event(inst.terminals[i].second, -(i + 1));
  }
  for (auto& [f, ev] : events) std::sort(ev.begin(), ev.end());

  // Skeleton-edge incidences per face, each crossing seen from both sides.
  struct Inc {
    int key, q, j, other;
    bool fwd;
  };
  std::map<int, std::vector<Inc>> kinc;
  int steps = 0;
  for (int q = 0; q < int(sk.spinal_cross.size()); ++q) {
    const auto& cr = sk.spinal_cross[q];
    const auto& fs = sk.spinal_faces[q];
    require(fs.size() == cr.size() + 1, ErrorCode::BadInput,
            "malformed spinal path");
    for (int j = 0; j < int(cr.size()); ++j, ++steps) {
      int d = cr[j];
      int fl = g.face_left(d), fr = g.face_right(d);
      require(fl == fs[j] && fr == fs[j + 1], ErrorCode::Internal,
              "spinal crossing darts out of order");
      kinc[fl].push_back({pos2[d], q, j, fr, true});
      kinc[fr].push_back({pos2[pd(d)], q, j, fl, false});
    }
  }
  for (auto& [f, inc] : kinc)
    std::sort(inc.begin(), inc.end(),
              [](const Inc& a, const Inc& b) { return a.key < b.key; });

  std::vector<RawItem> raw;
  if (steps == 0) {
    // One-face skeleton: the walk just circles that face.
    require(sk.faces.size() == 1, ErrorCode::Internal, "tour needs a base face");
    auto& ev = events[sk.faces[0]];
    require(int(ev.size()) == 2 * k, ErrorCode::Internal,
            "terminal events missing from the base face");
    for (auto it = ev.rbegin(); it != ev.rend(); ++it)
      raw.push_back({-1, -1, false, it->second});
  } else {
    // Where each crossing's two incidences live: [0] the forward side.
    std::map<std::pair<int, int>, std::array<std::pair<int, int>, 2>> side;
    for (auto& [f, inc] : kinc)
      for (int i = 0; i < int(inc.size()); ++i)
        side[{inc[i].q, inc[i].j}][inc[i].fwd ? 0 : 1] = {f, i};

    int f0 = sk.term_faces[0].first;
    require(kinc.count(f0), ErrorCode::Internal,
            "base terminal face off the skeleton");
    int cf = f0, ci = 0;
    for (int it = 0; it < 2 * steps; ++it) {
      const Inc dep = kinc[cf][ci];
      raw.push_back({dep.q, dep.j, dep.fwd, 0});
      auto [nf, ai] = side[{dep.q, dep.j}][dep.fwd ? 1 : 0];
      auto& inc = kinc[nf];
      int di = (ai + int(inc.size()) - 1) % int(inc.size());
      int akey = inc[ai].key, dkey = inc[di].key;
      if (auto evit = events.find(nf); evit != events.end()) {
        const auto& ev = evit->second;
        if (dkey < akey) {
          for (auto e = ev.rbegin(); e != ev.rend(); ++e)
            if (e->first > dkey && e->first < akey)
              raw.push_back({-1, -1, false, e->second});
        } else {
          for (auto e = ev.rbegin(); e != ev.rend(); ++e)
            if (e->first < akey) raw.push_back({-1, -1, false, e->second});
          for (auto e = ev.rbegin(); e != ev.rend(); ++e)
            if (e->first > dkey) raw.push_back({-1, -1, false, e->second});
        }
      }
      cf = nf;
      ci = di;
    }
    require(cf == f0 && ci == 0, ErrorCode::Internal, "tour failed to close");
  }

  std::vector<TourBlock> blocks = coalesce(raw, sk);

  // Rotate the cyclic sequence so the source of pair 1 leads.
  int at = -1;
  for (int i = 0; i < int(blocks.size()); ++i)
    if (blocks[i].spinal < 0 && blocks[i].terminal == 1) at = i;
  require(at >= 0, ErrorCode::Internal, "first source missing from the tour");
  std::rotate(blocks.begin(), blocks.begin() + at, blocks.end());

  // Every directed spinal path once, every terminal once.
  std::set<std::pair<int, bool>> seen_q;
  std::set<int> seen_t;
  for (const TourBlock& b : blocks) {
    if (b.spinal >= 0)
      require(seen_q.insert({b.spinal, b.forward}).second, ErrorCode::Internal,
              "spinal path repeated in the tour");
    else
      require(seen_t.insert(b.terminal).second, ErrorCode::Internal,
              "terminal repeated in the tour");
  }
  require(int(seen_q.size()) == 2 * int(sk.spinal_cross.size()) &&
              int(seen_t.size()) == 2 * k,
          ErrorCode::Internal, "tour misses part of the skeleton");
  return blocks;
}

// ---------------------------------------------------------------------------
// Candidate enumeration.
// ---------------------------------------------------------------------------

std::vector<HomologyCandidate> enumerate_candidates(const DapInstance& inst,
                                                    const Skeleton& sk,
                                                    int budget) {
  require(budget >= 0, ErrorCode::BadInput, "negative crossing budget");
  const int nq = int(sk.spinal_cross.size());
  const std::vector<TourBlock> tour = skeleton_tour(inst, sk);

  std::vector<int> cap(nq);
  for (int q = 0; q < nq; ++q)
    cap[q] = std::min<int>(budget, int(sk.spinal_cross[q].size()));

  std::vector<HomologyCandidate> out;
  std::set<std::vector<int>> seen;

  struct Pos {
    int sym = 0;  // fixed terminal symbol, 0 for crossing slots
    int q = -1;
    bool fwd = false;
  };

  auto expand = [&](const std::vector<int>& lens) {
    // Lay the tour word out as positions with block ids.
    std::vector<Pos> pos;
    std::vector<int> block_of;
    int bid = 0;
    for (const TourBlock& b : tour) {
      if (b.spinal < 0) {
        pos.push_back({b.terminal, -1, false});
        block_of.push_back(bid++);
        continue;
      }
      int len = lens[b.spinal];
      if (len == 0) continue;
      for (int i = 0; i < len; ++i) {
        pos.push_back({0, b.spinal, b.forward});
        block_of.push_back(bid);
      }
      ++bid;
    }
    const int p = int(pos.size());

    // Segment pairings over all positions.
    std::vector<Matching> ns = noncrossing_jumping_matchings(block_of);
    if (ns.empty()) return;

    // Crossing pairings over the non-terminal positions only; non-crossing
    // on a subsequence is non-crossing in the full cyclic order.
    std::vector<int> sp, sub_block;
    for (int i = 0; i < p; ++i)
      if (pos[i].sym == 0) {
        sp.push_back(i);
        sub_block.push_back(block_of[i]);
      }
    std::vector<Matching> ms = noncrossing_jumping_matchings(sub_block);
    if (ms.empty()) return;

    std::vector<int> mate_n(p), mate_m(p), sym(p);
    std::vector<char> vis(p);
    for (const Matching& n : ns) {
      std::fill(mate_n.begin(), mate_n.end(), -1);
      for (auto [a, b] : n) mate_n[a] = b, mate_n[b] = a;
      for (const Matching& msub : ms) {
        std::fill(mate_m.begin(), mate_m.end(), -1);
        for (auto [a, b] : msub)
          mate_m[sp[a]] = sp[b], mate_m[sp[b]] = sp[a];

        // The union must form one alternating source-to-target path per
        // pair.  Walk from each source; the sign flips on every step, so a
        // walk can only stop at its own target.
        std::fill(vis.begin(), vis.end(), 0);
        std::fill(sym.begin(), sym.end(), 0);
        bool ok = true;
        int visited = 0;
        for (int s = 0; s < p && ok; ++s) {
          if (pos[s].sym <= 0) continue;
          int cur = s, val = pos[s].sym;
          vis[s] = 1;
          ++visited;
          while (true) {
            int a = mate_n[cur];
            val = -val;
            if (vis[a]) {
              ok = false;
              break;
            }
            vis[a] = 1;
            ++visited;
            if (pos[a].sym != 0) {
              ok = (pos[a].sym == val);
              break;
            }
            sym[a] = val;
            int b = mate_m[a];
            val = -val;
            if (vis[b]) {
              ok = false;
              break;
            }
            vis[b] = 1;
            ++visited;
            sym[b] = val;
            cur = b;
          }
        }
        if (!ok || visited != p) continue;  // a leftover cycle or bad ends

        // Words per directed spinal path, in tour order within each block.
        std::vector<std::array<std::vector<int>, 2>> raws(nq);
        for (int i = 0; i < p; ++i)
          if (pos[i].q >= 0) raws[pos[i].q][pos[i].fwd ? 0 : 1].push_back(sym[i]);

        HomologyCandidate cand;
        cand.words.resize(nq);
        bool regular = true;
        for (int q = 0; q < nq && regular; ++q) {
          cand.words[q][0] = reduce(raws[q][0]);
          cand.words[q][1] = reduce(raws[q][1]);
          regular = cand.words[q][1] == cand.words[q][0].inverse();
        }
        if (!regular) continue;

        std::vector<int> ser;
        for (int q = 0; q < nq; ++q) {
          ser.insert(ser.end(), cand.words[q][0].syms.begin(),
                     cand.words[q][0].syms.end());
          ser.push_back(0);
        }
        if (!seen.insert(ser).second) continue;

        cand.total_len = p;
        cand.lens = lens;
        cand.n = n;
        cand.m.clear();
        for (auto [a, b] : msub) cand.m.push_back({sp[a], sp[b]});
        out.push_back(std::move(cand));
      }
    }
  };

  std::vector<int> lens(nq, 0);
  while (true) {
    expand(lens);
    int q = 0;
    while (q < nq && lens[q] == cap[q]) lens[q++] = 0;
    if (q == nq) break;
    ++lens[q];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Compact labellings.
// ---------------------------------------------------------------------------

namespace {

// The scaffold shared by reconstruction and shift pushing: one chosen edge
// per spinal path, a spanning tree L of the graph minus all crossed edges
// pruned to the terminals and the chosen edges' endpoints, and their union.
struct CompactScaffold {
  std::vector<char> crossed, in_l, in_lhat;  // per edge
  std::vector<int> eq, a_fwd;                // per spinal path
};

CompactScaffold build_scaffold(const DapInstance& inst, const Skeleton& sk) {
  const PlaneMultigraph& g = inst.g;
  CompactScaffold sc;
  sc.crossed.assign(g.m(), 0);
  for (const auto& cr : sk.spinal_cross)
    for (int d : cr) sc.crossed[de(d)] = 1;

  const int nq = int(sk.spinal_cross.size());
  sc.eq.resize(nq);
  sc.a_fwd.resize(nq);
  for (int q = 0; q < nq; ++q) {
    require(!sk.spinal_cross[q].empty(), ErrorCode::Internal,
            "empty spinal path");
    sc.a_fwd[q] = pd(sk.spinal_cross[q][0]);
    sc.eq[q] = de(sc.a_fwd[q]);
  }

  std::vector<int> want;
  for (const auto& [s, t] : inst.terminals) {
    want.push_back(s);
    want.push_back(t);
  }
  for (int e : sc.eq) {
    want.push_back(g.edge(e).u);
    want.push_back(g.edge(e).v);
  }
  std::sort(want.begin(), want.end());
  want.erase(std::unique(want.begin(), want.end()), want.end());
  require(!want.empty(), ErrorCode::BadInput, "instance without terminals");

  // Crossed edges cannot disconnect the graph: their duals form a forest,
  // never an edge cut.  Span what is left and keep the paths to `want`.
  std::vector<int> par(g.n(), -2);
  std::queue<int> bfs;
  par[want[0]] = -1;
  bfs.push(want[0]);
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (int d : g.darts_out(v)) {
      int u = g.head(d);
      if (par[u] != -2 || sc.crossed[de(d)]) continue;
      par[u] = d;
      bfs.push(u);
    }
  }
  sc.in_l.assign(g.m(), 0);
  for (int w : want) {
    require(par[w] != -2, ErrorCode::Internal,
            "crossing-free spanning walk missing");
    for (int v = w; par[v] != -1;) {
      int d = par[v];
      if (sc.in_l[de(d)]) break;
      sc.in_l[de(d)] = 1;
      v = g.tail(d);
    }
  }
  sc.in_lhat = sc.in_l;
  for (int e : sc.eq) sc.in_lhat[e] = 1;
  return sc;
}

}  // namespace

std::optional<Labelling> reconstruct_compact(
    const DapInstance& inst, const Skeleton& sk,
    const std::vector<std::array<GroupWord, 2>>& words) {
  const PlaneMultigraph& g = inst.g;
  const int k = inst.k();
  const int nq = int(sk.spinal_cross.size());
  require(int(words.size()) == nq, ErrorCode::BadInput,
          "one word pair per spinal path");
  for (const auto& w : words)
    require(w[1] == w[0].inverse(), ErrorCode::BadInput, "irregular word pair");

  CompactScaffold sc = build_scaffold(inst, sk);
  Labelling xi = Labelling::identity(g.dart_count());

  std::vector<char> is_term(g.n(), 0);
  for (int i = 0; i < k; ++i) {
    auto [s, t] = inst.terminals[i];
    require(g.degree(s) == 1 && g.degree(t) == 1, ErrorCode::BadInput,
            "terminal degree");
    is_term[s] = is_term[t] = 1;
    xi.set_arc(pd(g.darts_out(s)[0]), GroupWord::gen(i + 1, true));
    xi.set_arc(pd(g.darts_out(t)[0]), GroupWord::gen(i + 1));
  }
  for (int q = 0; q < nq; ++q) xi.set_arc(sc.a_fwd[q], words[q][0]);

  // Unknown labels sit on the tree edges away from terminals; peel leaves,
  // forcing each from cleanliness of its vertex.
  std::vector<char> unknown(g.m(), 0);
  std::vector<int> ucnt(g.n(), 0);
  int nunk = 0;
  for (int e = 0; e < g.m(); ++e) {
    const EdgeRec& er = g.edge(e);
    if (!sc.in_l[e] || is_term[er.u] || is_term[er.v]) continue;
    unknown[e] = 1;
    ++nunk;
    ++ucnt[er.u];
    ++ucnt[er.v];
  }
  std::queue<int> qu;
  for (int v = 0; v < g.n(); ++v)
    if (!is_term[v] && ucnt[v] == 1) qu.push(v);
  while (!qu.empty()) {
    int v = qu.front();
    qu.pop();
    if (ucnt[v] != 1) continue;
    const auto& rot = g.darts_out(v);
    int idx = -1;
    for (int i = 0; i < int(rot.size()); ++i)
      if (unknown[de(rot[i])]) idx = i;
    require(idx >= 0, ErrorCode::Internal, "unknown count out of sync");
    std::vector<int> acc;
    for (int s = 1; s < int(rot.size()); ++s) {
      const GroupWord& w = xi.at(pd(rot[(idx + s) % rot.size()]));
      acc.insert(acc.end(), w.syms.begin(), w.syms.end());
    }
    int d = rot[idx];
    xi.set_arc(pd(d), reduce(acc).inverse());
    unknown[de(d)] = 0;
    --nunk;
    --ucnt[v];
    int u = g.head(d);
    if (--ucnt[u] == 1 && !is_term[u]) qu.push(u);
  }
  require(nunk == 0, ErrorCode::Internal, "label propagation stalled");

  // Peeling guarantees cleanliness at forced vertices; the roots of the
  // peel and the untouched vertices carry the one real constraint.
  for (int v = 0; v < g.n(); ++v)
    if (!is_term[v] && !is_clean(g, xi, v)) return std::nullopt;
  require(xi.valid(), ErrorCode::Internal, "labelling invariant broken");
  return xi;
}

std::optional<HfInstance> build_hf_instance(
    const DapInstance& inst, const Skeleton& sk,
    const std::vector<std::array<GroupWord, 2>>& words) {
  auto xi = reconstruct_compact(inst, sk, words);
  if (!xi) return std::nullopt;
  HfInstance hf;
  hf.inst = &inst;
  hf.sk = &sk;
  hf.xi = std::move(*xi);
  hf.words = words;
  for (const auto& [a, b] : sk.term_faces) {
    hf.fixed_faces.push_back(a);
    hf.fixed_faces.push_back(b);
  }
  std::sort(hf.fixed_faces.begin(), hf.fixed_faces.end());
  hf.fixed_faces.erase(
      std::unique(hf.fixed_faces.begin(), hf.fixed_faces.end()),
      hf.fixed_faces.end());
  return hf;
}

// ---------------------------------------------------------------------------
// Feasibility.
// ---------------------------------------------------------------------------

bool hf_conforms(const HfInstance& hf, const Labelling& lam) {
  const PlaneMultigraph& g = hf.inst->g;
  const int k = hf.inst->k();

  for (int d = 0; d < g.dart_count(); ++d) {
    const GroupWord& w = lam.at(d);
    if (w.syms.size() > 1) return false;
    if (w.syms.size() == 1) {
      int s = w.syms[0];
      int i = std::abs(s) - 1;
      if (i >= k) return false;
      int a = s > 0 ? d : pd(d);
      if (!hf.inst->annotations[i][a]) return false;
    }
  }

  // Every clockwise run of in-arc labels must multiply to at most one
  // symbol.
  for (int v = 0; v < g.n(); ++v) {
    const auto& rot = g.darts_out(v);
    const int deg = int(rot.size());
    std::vector<const GroupWord*> in(deg);
    for (int j = 0; j < deg; ++j) in[j] = &lam.at(pd(rot[j]));
    for (int s = 0; s < deg; ++s) {
      GroupWord prod;
      for (int l = 0; l < deg; ++l) {
        prod = prod * *in[(s + l) % deg];
        if (prod.syms.size() > 1) return false;
      }
    }
  }
  return true;
}

namespace {

// Turns a solution labelling into a shift: faces reachable from each other
// without crossing the scaffold form pockets, each pocket gets a base (its
// principal face when it has one), and values accumulate along a spanning
// forest that prefers skeleton-crossed edges so the tree stays close to the
// dual of the skeleton.
Shift push_shift(const HfInstance& hf, const Labelling& lamP) {
  const PlaneMultigraph& g = hf.inst->g;
  const Skeleton& sk = *hf.sk;
  CompactScaffold sc = build_scaffold(*hf.inst, sk);

  std::vector<int> uf(g.face_count());
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };

  std::vector<std::vector<std::pair<int, int>>> fadj(g.face_count());
  auto consider = [&](int e) {
    int a = find(g.face_left(2 * e)), b = find(g.face_right(2 * e));
    if (a == b) return;
    uf[a] = b;
    fadj[g.face_left(2 * e)].push_back({g.face_right(2 * e), e});
    fadj[g.face_right(2 * e)].push_back({g.face_left(2 * e), e});
  };
  for (int e = 0; e < g.m(); ++e)
    if (!sc.in_lhat[e] && sc.crossed[e]) consider(e);
  for (int e = 0; e < g.m(); ++e)
    if (!sc.in_lhat[e] && !sc.crossed[e]) consider(e);

  std::vector<char> isprin(g.face_count(), 0);
  for (int f : sk.principal) isprin[f] = 1;
  std::vector<int> base(g.face_count(), -1);
  for (int f = 0; f < g.face_count(); ++f)
    if (isprin[f]) {
      int r = find(f);
      require(base[r] == -1, ErrorCode::Internal,
              "two principal faces share a pocket");
      base[r] = f;
    }
  for (int f = 0; f < g.face_count(); ++f)
    if (base[find(f)] == -1) base[find(f)] = f;

  Shift psi = Shift::identity(g.face_count());
  std::vector<char> done(g.face_count(), 0);
  for (int f = 0; f < g.face_count(); ++f) {
    if (base[find(f)] != f || done[f]) continue;
    done[f] = 1;
    std::queue<int> bfs;
    bfs.push(f);
    while (!bfs.empty()) {
      int cur = bfs.front();
      bfs.pop();
      for (auto [nf, e] : fadj[cur]) {
        if (done[nf]) continue;
        int a = g.face_left(2 * e) == nf ? 2 * e : 2 * e + 1;
        require(g.face_left(a) == nf && g.face_right(a) == cur,
                ErrorCode::Internal, "pocket forest arc mismatch");
        psi.by_face[nf] = psi.by_face[cur] * lamP.at(a);
        done[nf] = 1;
        bfs.push(nf);
      }
    }
  }
  for (int f = 0; f < g.face_count(); ++f)
    require(done[f], ErrorCode::Internal, "pocket forest misses a face");
  psi.stable_faces = hf.fixed_faces;
  return psi;
}

std::optional<Shift> solve_path(const HfInstance& hf, const HfBudgets& b) {
  const PlaneMultigraph& g = hf.inst->g;
  const Skeleton& sk = *hf.sk;
  std::vector<std::vector<int>> fwd_arcs(sk.spinal_cross.size());
  for (int q = 0; q < int(sk.spinal_cross.size()); ++q)
    for (int d : sk.spinal_cross[q]) fwd_arcs[q].push_back(pd(d));

  std::optional<Shift> found;
  BruteLimits bl;
  bl.max_nodes = b.max_nodes;
  brute_force_enumerate(
      *hf.inst,
      [&](const Solution& sol) {
        Labelling lam = solution_labelling(g, sol);
        for (int q = 0; q < int(fwd_arcs.size()); ++q)
          if (char_word(lam, fwd_arcs[q]) != hf.words[q][0]) return true;
        Shift psi = push_shift(hf, lam).inverted();
        psi.stable_faces = hf.fixed_faces;
        require(psi.stable_ok(), ErrorCode::Internal,
                "pushed shift moves a fixed face");
        require(hf_conforms(hf, apply_shift(g, hf.xi, psi)),
                ErrorCode::Internal, "pushed shift fails conformance");
        found = std::move(psi);
        return false;
      },
      bl);
  return found;
}

std::optional<Shift> solve_shift(const HfInstance& hf, const HfBudgets& b) {
  const PlaneMultigraph& g = hf.inst->g;
  const int k = hf.inst->k();
  const int F = g.face_count();
  require(!hf.fixed_faces.empty(), ErrorCode::BadInput,
          "shift search needs a fixed face");

  std::vector<char> fixed(F, 0);
  for (int f : hf.fixed_faces) fixed[f] = 1;

  // Dual adjacency, arcs oriented right-to-left as seen from the current
  // face.
  std::vector<std::vector<std::pair<int, int>>> fadj(F);
  for (int e = 0; e < g.m(); ++e) {
    fadj[g.face_right(2 * e)].push_back({g.face_left(2 * e), 2 * e});
    fadj[g.face_right(2 * e + 1)].push_back({g.face_left(2 * e + 1), 2 * e + 1});
  }

  // Spanning tree rooted at a fixed face.
  int root = hf.fixed_faces[0];
  std::vector<int> order, par_face(F, -1), par_arc(F, -1);
  std::vector<char> seen(F, 0);
  seen[root] = 1;
  order.push_back(root);
  for (int at = 0; at < int(order.size()); ++at) {
    int f = order[at];
    for (auto [nf, a] : fadj[f]) {
      if (seen[nf]) continue;
      seen[nf] = 1;
      par_face[nf] = f;
      par_arc[nf] = a;
      order.push_back(nf);
    }
  }
  require(int(order.size()) == F, ErrorCode::Internal, "dual not connected");

  // Candidate run values per tree arc.
  auto deltas = [&](int a) {
    std::vector<GroupWord> ds{GroupWord::one()};
    for (int i = 0; i < k; ++i) {
      if (hf.inst->annotations[i][a]) ds.push_back(GroupWord::gen(i + 1));
      if (hf.inst->annotations[i][pd(a)])
        ds.push_back(GroupWord::gen(i + 1, true));
    }
    return ds;
  };

  // Arcs whose both faces are assigned once `order[pos]` is, for pruning.
  std::vector<int> rank(F);
  for (int i = 0; i < F; ++i) rank[order[i]] = i;
  std::vector<std::vector<int>> closing(F);
  for (int d = 0; d < g.dart_count(); ++d) {
    int hi = std::max(rank[g.face_left(d)], rank[g.face_right(d)]);
    if (rank[g.face_left(d)] == hi) closing[order[hi]].push_back(d);
  }

  std::vector<GroupWord> val(F);
  long long nodes = 0;

  auto arc_ok = [&](int a) {
    // Shifted label of arc a with both face values known.
    GroupWord w = val[g.face_right(a)] * hf.xi.at(a) *
                  val[g.face_left(a)].inverse();
    if (w.syms.size() > 1) return false;
    if (w.syms.size() == 1) {
      int s = w.syms[0];
      int i = std::abs(s) - 1;
      if (i >= k) return false;
      return hf.inst->annotations[i][s > 0 ? a : pd(a)] != 0;
    }
    return true;
  };

  std::optional<Shift> found;
  auto dfs = [&](auto&& self, int pos) -> bool {
    if (found) return true;
    if (pos == F) {
      Shift psi;
      psi.by_face = val;
      psi.stable_faces = hf.fixed_faces;
      if (!hf_conforms(hf, apply_shift(g, hf.xi, psi))) return false;
      require(psi.stable_ok(), ErrorCode::Internal, "search broke stability");
      found = std::move(psi);
      return true;
    }
    int f = order[pos];
    for (const GroupWord& w : deltas(par_arc[f])) {
      if (++nodes > b.max_nodes)
        fail(ErrorCode::LimitExceeded, "shift search budget exhausted");
      // psi[xi](par_arc) = w forces the face value.
      val[f] = w.inverse() * val[par_face[f]] * hf.xi.at(par_arc[f]);
      if (fixed[f] && !val[f].is_identity()) continue;
      bool ok = true;
      for (int a : closing[f])
        if (!arc_ok(a) || !arc_ok(pd(a))) {
          ok = false;
          break;
        }
      if (ok && self(self, pos + 1)) return true;
    }
    return false;
  };

  val[root] = GroupWord::one();
  bool okroot = true;
  for (int a : closing[root])
    if (!arc_ok(a) || !arc_ok(pd(a))) okroot = false;
  if (okroot) dfs(dfs, 1);
  return found;
}

}  // namespace

std::optional<Shift> solve_hf(const HfInstance& hf, HfBackend backend,
                              const HfBudgets& budgets) {
  require(hf.inst && hf.sk, ErrorCode::BadInput, "unbound feasibility instance");
  if (backend == HfBackend::PathSearch) return solve_path(hf, budgets);
  return solve_shift(hf, budgets);
}

// ---------------------------------------------------------------------------
// Solution extraction.
// ---------------------------------------------------------------------------

Solution extract_solution(const HfInstance& hf, const Shift& psi) {
  const PlaneMultigraph& g = hf.inst->g;
  const int k = hf.inst->k();
  require(psi.stable_ok(), ErrorCode::BadInput, "shift moves a fixed face");
  Labelling lam = apply_shift(g, hf.xi, psi);
  require(hf_conforms(hf, lam), ErrorCode::BadInput, "shift does not conform");

  Solution sol(k);
  for (int i = 0; i < k; ++i) {
    const int sym = i + 1;
    std::vector<std::vector<int>> out(g.n());
    for (int d = 0; d < g.dart_count(); ++d) {
      const GroupWord& w = lam.at(d);
      if (w.syms.size() == 1 && w.syms[0] == sym) out[g.tail(d)].push_back(d);
    }
    for (auto& lst : out)
      std::sort(lst.begin(), lst.end(), [&](int a, int b) {
        return std::pair(g.head(a), a) < std::pair(g.head(b), b);
      });

    // The labelled arcs are balanced everywhere except at the endpoints, so
    // the maximal walk from the source can only stop at the target.
    auto [s, t] = hf.inst->terminals[i];
    std::vector<int> ptr(g.n(), 0), walk{s};
    int cur = s;
    long long guard = g.dart_count() + 2;
    while (true) {
      require(--guard > 0, ErrorCode::Internal, "label walk does not close");
      if (ptr[cur] >= int(out[cur].size())) break;
      int d = out[cur][ptr[cur]++];
      cur = g.head(d);
      walk.push_back(cur);
    }
    require(cur == t, ErrorCode::Internal, "label walk strands off its target");

    // Shortcut revisits into a simple path.
    std::vector<int> at(g.n(), -1), path;
    for (int v : walk) {
      if (at[v] >= 0)
        while (int(path.size()) > at[v] + 1) {
          at[path.back()] = -1;
          path.pop_back();
        }
      else {
        at[v] = int(path.size());
        path.push_back(v);
      }
    }
    sol[i] = std::move(path);
  }

  require(check_solution(*hf.inst, sol).ok(true), ErrorCode::Internal,
          "extracted paths fail validation");
  return sol;
}

}  // namespace pdsp
