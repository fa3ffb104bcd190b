#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdsp/instances.hpp"

namespace pdsp {

// rows x cols grid with row-major vertex ids.  weights: "unit" for all-one
// weights or "random" for integer weights in 1..5 drawn from a seeded mt19937.
// terminals: "corners" (single pair: top-left to bottom-right), "corners2"
// (both diagonal corner pairs; these cross, so the instance is usually
// unsolvable), "rows<k>" (k pairs, pair i runs across row i), or "random<k>"
// (k pairs of distinct random vertices).  The same arguments always produce
// the same instance.
DspInstance gen_grid(int rows, int cols, const std::string& weights,
                     const std::string& terminals, std::uint64_t seed);

// Family whose shortest-path structure wraps around a central region.  The
// first pair lives on a polyline v_0..v_{2w} (w = turns + 1) drawn as nested
// half circles, with weight-1 arc edges (i, i+1) and weight-2 chord edges
// (i, i+2); every edge lies on a shortest v_0-v_{2w} path.  Additional pairs
// (k up to 3) get their own chain-of-diamonds component, tied to the previous
// component by a weight-1000 edge that no shortest path ever uses.
// turns = 0 degenerates to a plain grid with k straight row pairs.
DspInstance gen_spiral(int turns, int k);

// Small hand-built instances used to round out the test corpus.  Names:
//   "cross3"   3x3 grid, both diagonal pairs: no solution.
//   "gate"     two pairs forced through one middle vertex: no solution.
//   "theta"    theta graph, one pair, three parallel routes.
//   "twocyc"   two nested squares joined by spokes, one pair.
//   "tight"    4x4 grid, two row pairs plus one crossing pair: no solution.
DspInstance gen_crafted(const std::string& name);

std::vector<std::string> crafted_names();

}  // namespace pdsp
