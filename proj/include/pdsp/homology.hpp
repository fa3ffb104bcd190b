#pragma once

#include <array>
#include <optional>
#include <vector>

#include "pdsp/instances.hpp"
#include "pdsp/matchings.hpp"
#include "pdsp/skeleton.hpp"
#include "pdsp/words.hpp"

namespace pdsp {

// One block of the word read while walking once around the skeleton tree:
// either a terminal visit or one directed traversal of a spinal path.
struct TourBlock {
  int spinal = -1;       // spinal path index, or -1 for a terminal visit
  bool forward = false;  // true: faces visited in stored order
  int terminal = 0;      // +i: source of pair i (1-based), -i: target
};

// The clockwise walk around the skeleton, as the cyclic block sequence
// rotated so the source terminal of pair 1 comes first.  Each spinal path
// appears exactly once per direction; each terminal exactly once.
std::vector<TourBlock> skeleton_tour(const DapInstance& inst,
                                     const Skeleton& sk);

// A candidate assignment of one reduced word per directed spinal path.
struct HomologyCandidate {
  // words[q][0]: along spinal_faces[q] in stored order; [1]: reversed.
  std::vector<std::array<GroupWord, 2>> words;

  // provenance, kept for diagnostics only
  int total_len = 0;      // positions in the generating tour word
  std::vector<int> lens;  // chosen crossing count per spinal path
  Matching m, n;          // crossing pairing and segment pairing
};

// Every candidate word assignment with at most `budget` crossings per
// directed spinal path (further capped by the path's length, since disjoint
// paths cannot cross a dual path more often than it has edges).  The raw
// tuples are (per-path crossing counts, segment matching N over all
// positions, crossing matching M over the non-terminal positions); a tuple
// survives when M together with N forms one alternating path per terminal
// pair, and the words induced by labelling those paths are regular.
// Deduplicated by the word mapping; deterministic order.
std::vector<HomologyCandidate> enumerate_candidates(const DapInstance& inst,
                                                    const Skeleton& sk,
                                                    int budget);

// The unique arc labelling that is identity outside a small scaffold
// (a spanning tree of the graph minus the edges crossed by the skeleton,
// pruned to terminals and one chosen edge per spinal path), realizes the
// given words on the chosen edges, labels terminal arcs by their pair
// symbol, and has every non-terminal vertex clean.  nullopt when the
// propagated labels leave some vertex unclean.
std::optional<Labelling> reconstruct_compact(
    const DapInstance& inst, const Skeleton& sk,
    const std::vector<std::array<GroupWord, 2>>& words);

// A feasibility instance: find a shift, identity on the fixed faces, whose
// application to xi puts every arc label in its allowed set and every
// clockwise run of in-arc labels at a vertex in {identity, single symbol}.
struct HfInstance {
  const DapInstance* inst = nullptr;  // annotated instance, caller-owned
  const Skeleton* sk = nullptr;       // caller-owned
  Labelling xi;                       // compact labelling
  std::vector<int> fixed_faces;
  std::vector<std::array<GroupWord, 2>> words;  // target per spinal path
};

// nullopt: no compact labelling matches the words, so no solution has
// these characteristic words.
std::optional<HfInstance> build_hf_instance(
    const DapInstance& inst, const Skeleton& sk,
    const std::vector<std::array<GroupWord, 2>>& words);

enum class HfBackend { PathSearch, ShiftSearch };

struct HfBudgets {
  long long max_nodes = 20'000'000;  // search nodes before giving up
};

// The conformance predicate for shifted labellings.
bool hf_conforms(const HfInstance& hf, const Labelling& lam);

// A fixed-face-stable shift whose application to xi passes hf_conforms, or
// nullopt when none exists.  Both backends are complete; LimitExceeded is
// thrown when the node budget runs out before either conclusion, and means
// "unknown", never "no".
//
// PathSearch looks directly for vertex-disjoint annotated paths whose
// characteristic words equal the targets, then turns the witness into a
// shift by pushing its labelling onto the scaffold.  ShiftSearch assigns
// face values along a dual spanning tree; each tree arc admits at most
// 2k+1 values, so the assignment space is finite.
std::optional<Shift> solve_hf(const HfInstance& hf,
                              HfBackend backend = HfBackend::PathSearch,
                              const HfBudgets& budgets = {});

// Reads the solution off a verified shift: per pair, the arcs labelled with
// the pair's symbol form a graph with an Eulerian source-to-target walk;
// shortcutting repeated vertices yields the path.  The result is validated
// against the instance before it is returned.
Solution extract_solution(const HfInstance& hf, const Shift& psi);

}  // namespace pdsp
