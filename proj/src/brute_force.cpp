#include "pdsp/brute_force.hpp"

#include <algorithm>

#include "pdsp/geodesics.hpp"

namespace pdsp {
namespace {

struct Searcher {
  const DapInstance& inst;
  const BruteLimits& limits;
  const std::function<bool(const Solution&)>* visit;  // null: stop at first
  long long nodes = 0;
  std::vector<char> used;
  Solution current;
  std::optional<Solution> first;
  bool stopped = false;

  Searcher(const DapInstance& i, const BruteLimits& l)
      : inst(i), limits(l), visit(nullptr), used(i.g.n(), 0) {}

  void tick() {
    if (++nodes > limits.max_nodes)
      fail(ErrorCode::LimitExceeded, "brute force budget exhausted");
  }

  // Neighbors are tried in increasing head-vertex order, so within one pair
  // the path vertex sequences come out in lexicographic order and the whole
  // search emits solutions lexicographically.
  void extend(int pair_idx, int at) {
    if (stopped) return;
    int t = inst.terminals[pair_idx].second;
    if (at == t) {
      current.push_back({});
      current.back() = path_so_far[pair_idx];
      next_pair(pair_idx + 1);
      current.pop_back();
      return;
    }
    std::vector<int> heads;
    for (int d : inst.g.darts_out(at))
      if (inst.annotations[pair_idx][d] && !used[inst.g.head(d)])
        heads.push_back(inst.g.head(d));
    std::sort(heads.begin(), heads.end());
    heads.erase(std::unique(heads.begin(), heads.end()), heads.end());
    for (int h : heads) {
      if (stopped) return;
      tick();
      used[h] = 1;
      path_so_far[pair_idx].push_back(h);
      extend(pair_idx, h);
      path_so_far[pair_idx].pop_back();
      used[h] = 0;
    }
  }

  void next_pair(int pair_idx) {
    if (stopped) return;
    if (pair_idx == (int)inst.terminals.size()) {
      if (visit) {
        if (!(*visit)(current)) stopped = true;
      } else {
        first = current;
        stopped = true;
      }
      return;
    }
    int s = inst.terminals[pair_idx].first;
    if (used[s]) return;
    used[s] = 1;
    path_so_far[pair_idx] = {s};
    extend(pair_idx, s);
    used[s] = 0;
  }

  std::vector<std::vector<int>> path_so_far;

  void run() {
    path_so_far.resize(inst.terminals.size());
    next_pair(0);
  }
};

}  // namespace

std::optional<Solution> brute_force_solve(const DapInstance& inst,
                                          const BruteLimits& limits) {
  Searcher s(inst, limits);
  s.run();
  return s.first;
}

std::optional<Solution> brute_force_solve(const DspInstance& inst,
                                          const BruteLimits& limits) {
  DapInstance annotated = annotate(inst);
  return brute_force_solve(annotated, limits);
}

void brute_force_enumerate(const DapInstance& inst,
                           const std::function<bool(const Solution&)>& visit,
                           const BruteLimits& limits) {
  Searcher s(inst, limits);
  s.visit = &visit;
  s.run();
}

}  // namespace pdsp
