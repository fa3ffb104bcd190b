#include "pdsp/generators.hpp"

#include <random>
#include <stdexcept>

namespace pdsp {
namespace {

int parse_count(const std::string& s, const std::string& prefix) {
  if (s.rfind(prefix, 0) != 0) return -1;
  try {
    size_t pos = 0;
    int k = std::stoi(s.substr(prefix.size()), &pos);
    if (pos != s.size() - prefix.size() || k <= 0) return -1;
    return k;
  } catch (const std::exception&) {
    return -1;
  }
}

}  // namespace

DspInstance gen_grid(int rows, int cols, const std::string& weights,
                     const std::string& terminals, std::uint64_t seed) {
  require(rows >= 1 && cols >= 1 && rows * cols >= 2, ErrorCode::BadInput,
          "gen_grid: need at least two vertices");
  int n = rows * cols;
  auto vid = [&](int r, int c) { return r * cols + c; };

  // Edge ids in scan order: for each cell, first the edge to the east, then
  // the edge to the south.
  std::vector<std::vector<int>> east(rows, std::vector<int>(cols, -1));
  std::vector<std::vector<int>> south(rows, std::vector<int>(cols, -1));
  std::vector<EdgeRec> edges;
  std::mt19937_64 rng(seed);
  auto weight = [&]() -> Rat {
    if (weights == "unit") return Rat(1);
    if (weights == "random")
      return Rat((long long)(rng() % 5 + 1));
    fail(ErrorCode::BadInput, "gen_grid: unknown weight scheme " + weights);
  };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) {
        east[r][c] = (int)edges.size();
        edges.push_back({vid(r, c), vid(r, c + 1), weight()});
      }
      if (r + 1 < rows) {
        south[r][c] = (int)edges.size();
        edges.push_back({vid(r, c), vid(r + 1, c), weight()});
      }
    }

  // Clockwise on screen (y grows downward): north, east, south, west.
  std::vector<std::vector<int>> rot(n);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      auto& list = rot[vid(r, c)];
      if (r > 0) list.push_back(south[r - 1][c]);
      if (c + 1 < cols) list.push_back(east[r][c]);
      if (r + 1 < rows) list.push_back(south[r][c]);
      if (c > 0) list.push_back(east[r][c - 1]);
    }

  DspInstance inst{PlaneMultigraph::build(n, edges, rot, std::nullopt), {}};
  if (terminals == "corners") {
    inst.terminals = {{0, n - 1}};
  } else if (terminals == "corners2") {
    require(rows >= 2 && cols >= 2, ErrorCode::BadInput,
            "gen_grid: corners2 needs a 2x2 grid or larger");
    inst.terminals = {{0, n - 1}, {cols - 1, n - cols}};
  } else if (int k = parse_count(terminals, "rows"); k > 0) {
    require(k <= rows && cols >= 2, ErrorCode::BadInput,
            "gen_grid: not enough rows for the requested pairs");
    for (int i = 0; i < k; ++i)
      inst.terminals.push_back({vid(i, 0), vid(i, cols - 1)});
  } else if (int kr = parse_count(terminals, "random"); kr > 0) {
    require(2 * kr <= n, ErrorCode::BadInput,
            "gen_grid: not enough vertices for the requested pairs");
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i) {
      int j = (int)(rng() % (std::uint64_t)(i + 1));
      std::swap(perm[i], perm[j]);
    }
    for (int i = 0; i < kr; ++i)
      inst.terminals.push_back({perm[2 * i], perm[2 * i + 1]});
  } else {
    fail(ErrorCode::BadInput, "gen_grid: unknown terminal scheme " + terminals);
  }
  return inst;
}

namespace {

// Appends a component to (edges, rot), returning the ids of the new pair's
// terminals.  connect_from < 0 means this is the first component; otherwise a
// weight-1000 edge ties the component's first vertex to connect_from so the
// instance stays connected while no shortest path ever leaves its component.
struct Assembly {
  std::vector<EdgeRec> edges;
  std::vector<std::vector<int>> rot;
  int n = 0;

  int add_vertex() {
    rot.push_back({});
    return n++;
  }
  int add_edge(int u, int v, Rat w) {
    edges.push_back({u, v, w});
    return (int)edges.size() - 1;
  }
  void tie(int a, int b) {
    int e = add_edge(a, b, Rat(1000));
    rot[a].push_back(e);
    rot[b].push_back(e);
  }
};

// Nested half circles v_0..v_{2w} around a centre, arc edges weight 1 and
// chord edges (i, i+2) weight 2.  Every edge lies on a shortest v_0-v_{2w}
// path: chords skip two weight-1 arcs at the same cost.
std::pair<int, int> add_spiral(Assembly& a, int w) {
  int base = a.n;
  for (int i = 0; i <= 2 * w; ++i) a.add_vertex();
  std::vector<int> arc(2 * w), chord(2 * w - 1);
  for (int i = 0; i < 2 * w; ++i)
    arc[i] = a.add_edge(base + i, base + i + 1, Rat(1));
  for (int i = 0; i + 2 <= 2 * w; ++i)
    chord[i] = a.add_edge(base + i, base + i + 2, Rat(2));
  // Clockwise order at v_i: next arc, outward chord, previous arc, inward
  // chord.  The same cyclic list is correct on both sides of the centre.
  for (int i = 0; i <= 2 * w; ++i) {
    auto& r = a.rot[base + i];
    if (i + 1 <= 2 * w) r.push_back(arc[i]);
    if (i + 2 <= 2 * w) r.push_back(chord[i]);
    if (i - 1 >= 0) r.push_back(arc[i - 1]);
    if (i - 2 >= 0) r.push_back(chord[i - 2]);
  }
  return {base, base + 2 * w};
}

// Chain of w diamonds: hubs a_0..a_w, each consecutive pair joined by an
// upper and a lower two-edge route.  All edges lie on shortest a_0-a_w paths.
std::pair<int, int> add_chain(Assembly& a, int w) {
  std::vector<int> hub(w + 1), up(w), lo(w);
  for (int i = 0; i <= w; ++i) hub[i] = a.add_vertex();
  for (int i = 0; i < w; ++i) up[i] = a.add_vertex();
  for (int i = 0; i < w; ++i) lo[i] = a.add_vertex();
  std::vector<int> hu(w), ua(w), hl(w), la(w);
  for (int i = 0; i < w; ++i) {
    hu[i] = a.add_edge(hub[i], up[i], Rat(1));
    ua[i] = a.add_edge(up[i], hub[i + 1], Rat(1));
    hl[i] = a.add_edge(hub[i], lo[i], Rat(1));
    la[i] = a.add_edge(lo[i], hub[i + 1], Rat(1));
  }
  for (int i = 0; i <= w; ++i) {
    auto& r = a.rot[hub[i]];
    if (i < w) {
      r.push_back(hu[i]);
      r.push_back(hl[i]);
    }
    if (i > 0) {
      r.push_back(la[i - 1]);
      r.push_back(ua[i - 1]);
    }
  }
  for (int i = 0; i < w; ++i) {
    a.rot[up[i]] = {ua[i], hu[i]};
    a.rot[lo[i]] = {la[i], hl[i]};
  }
  return {hub[0], hub[w]};
}

}  // namespace

DspInstance gen_spiral(int turns, int k) {
  require(turns >= 0 && k >= 1 && k <= 3, ErrorCode::BadInput,
          "gen_spiral: need turns >= 0 and 1 <= k <= 3");
  if (turns == 0)
    return gen_grid(std::max(2, k), 3, "unit", "rows" + std::to_string(k), 0);
  int w = turns + 1;
  Assembly a;
  DspInstance inst;
  auto [s1, t1] = add_spiral(a, w);
  inst.terminals.push_back({s1, t1});
  int prev_last = t1;
  for (int j = 1; j < k; ++j) {
    auto [s, t] = add_chain(a, w);
    a.tie(prev_last, s);
    inst.terminals.push_back({s, t});
    prev_last = t;
  }
  inst.g = PlaneMultigraph::build(a.n, a.edges, a.rot, std::nullopt);
  return inst;
}

DspInstance gen_crafted(const std::string& name) {
  if (name == "cross3") return gen_grid(3, 3, "unit", "corners2", 0);
  if (name == "gate") {
    // Four leaves around one hub; both pairs need the hub.
    std::vector<EdgeRec> edges = {
        {0, 1, Rat(1)}, {0, 2, Rat(1)}, {0, 3, Rat(1)}, {0, 4, Rat(1)}};
    std::vector<std::vector<int>> rot = {{0, 1, 2, 3}, {0}, {1}, {2}, {3}};
    return {PlaneMultigraph::build(5, edges, rot, std::nullopt),
            {{1, 3}, {2, 4}}};
  }
  if (name == "theta") {
    std::vector<EdgeRec> edges = {{0, 2, Rat(1)}, {2, 1, Rat(1)},
                                  {0, 3, Rat(1)}, {3, 1, Rat(1)},
                                  {0, 4, Rat(1)}, {4, 1, Rat(1)}};
    std::vector<std::vector<int>> rot = {
        {0, 2, 4}, {5, 3, 1}, {0, 1}, {2, 3}, {4, 5}};
    return {PlaneMultigraph::build(5, edges, rot, std::nullopt), {{0, 1}}};
  }
  if (name == "twocyc") {
    // Cube graph drawn as two nested squares with spokes.
    std::vector<EdgeRec> edges = {
        {0, 1, Rat(1)},  // 0
        {1, 2, Rat(1)},  // 1
        {2, 3, Rat(1)},  // 2
        {0, 3, Rat(1)},  // 3
        {4, 5, Rat(1)},  // 4
        {5, 6, Rat(1)},  // 5
        {6, 7, Rat(1)},  // 6
        {4, 7, Rat(1)},  // 7
        {0, 4, Rat(1)},  // 8
        {1, 5, Rat(1)},  // 9
        {2, 6, Rat(1)},  // 10
        {3, 7, Rat(1)}   // 11
    };
    std::vector<std::vector<int>> rot = {
        {0, 8, 3},   // 0: east, inward, south
        {1, 9, 0},   // 1
        {1, 2, 10},  // 2
        {3, 11, 2},  // 3
        {4, 7, 8},   // 4: east, south, outward
        {9, 5, 4},   // 5
        {5, 10, 6},  // 6
        {7, 6, 11}   // 7
    };
    return {PlaneMultigraph::build(8, edges, rot, std::nullopt), {{0, 6}}};
  }
  if (name == "tight") {
    // 3x4 grid; rows 0 and 1 carry straight pairs, and the third pair has to
    // cross the fully occupied row 1, so there is no solution.
    DspInstance inst = gen_grid(3, 4, "unit", "rows2", 0);
    inst.terminals.push_back({8, 2});
    return inst;
  }
  fail(ErrorCode::BadInput, "gen_crafted: unknown name " + name);
}

std::vector<std::string> crafted_names() {
  return {"cross3", "gate", "theta", "twocyc", "tight"};
}

}  // namespace pdsp
