#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "pdsp/instances.hpp"

namespace pdsp {

// Budget for the exhaustive solvers.  max_nodes counts extensions tried in
// the backtracking search; exceeding it throws Error{LimitExceeded}.
struct BruteLimits {
  long long max_nodes = 50'000'000;
};

// Exhaustive solver for the disjoint-paths problem on annotated instances:
// one vertex-disjoint directed path per pair, each path using only arcs from
// that pair's annotation.  Returns the lexicographically least solution
// (compare path vertex sequences pair by pair), or nullopt if none exists.
std::optional<Solution> brute_force_solve(const DapInstance& inst,
                                          const BruteLimits& limits = {});

// Exhaustive solver for disjoint shortest paths.  Builds the shortest-path
// annotation for every pair and delegates to the annotated solver, so the
// result is the lexicographically least family of vertex-disjoint geodesics.
std::optional<Solution> brute_force_solve(const DspInstance& inst,
                                          const BruteLimits& limits = {});

// Visits every solution of the annotated instance in lexicographic order.
// The callback returns false to stop early.  Used by tests that need counts
// or the full solution set rather than a single witness.
void brute_force_enumerate(const DapInstance& inst,
                           const std::function<bool(const Solution&)>& visit,
                           const BruteLimits& limits = {});

}  // namespace pdsp
