#pragma once

#include <utility>
#include <vector>

namespace pdsp {

// A matching of positions 0..p-1: pairs (a, b) with a < b, listed in
// ascending order of a.
using Matching = std::vector<std::pair<int, int>>;

// block_of[j] is the id of the contiguous block containing position j; ids
// must be non-decreasing along positions.  Returns every perfect matching
// that is non-crossing (no a < b < c < d with {a,c} and {b,d} matched) and
// jumping (no pair within one block).  Enumerated through the prefix
// encoding: within each block the right (closing) elements form a prefix,
// so a block contributes only length+1 shapes, and every valid bracket
// word decodes to exactly one matching.
std::vector<Matching> noncrossing_jumping_matchings(
    const std::vector<int>& block_of);

// Reference oracle: filters all perfect matchings.  Test sizes only.
std::vector<Matching> noncrossing_jumping_matchings_brute(
    const std::vector<int>& block_of);

bool is_noncrossing(const Matching& m);
bool is_jumping(const Matching& m, const std::vector<int>& block_of);

}  // namespace pdsp
