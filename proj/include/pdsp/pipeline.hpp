#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdsp/homology.hpp"
#include "pdsp/rings.hpp"
#include "pdsp/skeleton.hpp"

namespace pdsp {

struct PipelineConfig {
  HfBackend backend = HfBackend::PathSearch;
  std::vector<int> budgets = {4, 8, 16, 32};  // crossing budgets, increasing
  int parallelism = 1;
  long long max_nodes = 50'000'000;  // per exhaustive search
  unsigned seed = 0;                 // embedded in reports

  void validate() const;  // BadInput on a malformed configuration
};

enum class Verdict { Yes, No, BudgetExhausted };
std::string verdict_name(Verdict v);

// One nice part carried through the structural stages.  Parts whose shape
// the skeleton construction cannot host (adjacent terminal pairs, vertices
// or faces carrying only terminal edges) are marked `micro` and later
// decided by the exhaustive solver directly; they are constant-sized
// degenerate shapes, not a shortcut around the pipeline.
struct PartSetup {
  NiceInstance ni;
  SteinerTree tree;  // pre-refinement, spinal paths geodesic
  RingDecomposition dec;
  std::optional<RefineResult> refined;  // nullopt: a ring lacks a linkage
  bool micro = false;
  std::string micro_reason;
  std::optional<DualizeResult> dual;  // set unless micro or unrefined
};

struct Setup {
  bool no_instance = false;  // the reduction itself refuted the instance
  std::string reason;
  std::vector<PartSetup> parts;
};

// make_nice plus per-part tree, ring decomposition, refinement and
// dualization.  Shared by the solver and the inspection subcommands.
Setup prepare(const DspInstance& inst);

// One enumeration round at a configured crossing budget.
struct LRound {
  int budget = 0;        // configured L
  int effective = 0;     // min(L, longest spinal path)
  int enumerated = 0;    // candidates produced at this budget
  int fresh = 0;         // not already tried at a smaller budget
  int incompatible = 0;  // fresh candidates with no compact labelling
};

struct PartReport {
  int k = 0;
  std::string route;  // "skeleton" or "micro: <reason>"
  int rings = 0;
  int superset = 0;              // principal vertices fed to decompose
  int spinal_paths = 0;          // |Q(K)|
  std::vector<int> spinal_load;  // enumeration cap per spinal path
  bool spinal_geodesic = true;   // pre-refinement spinal paths re-checked
  std::vector<LRound> rounds;
  int accepted_budget = -1;         // L of the winning round
  int accepted_load = -1;           // longest word of the winning candidate
  std::vector<int> accepted_lens;   // its crossing counts per spinal path
};

struct RunReport {
  Verdict verdict = Verdict::No;
  std::optional<Solution> solution;  // original-instance paths when yes
  std::string reason;                // for no / budget-exhausted
  unsigned seed = 0;
  bool validated = false;  // attached solution passed full validation
  std::vector<std::pair<std::string, double>> timings;  // stage, seconds
  std::vector<std::pair<std::string, bool>> checks;     // checklist
  std::vector<PartReport> parts;
};

// End-to-end solver.  "yes" always carries a solution that passed the
// validator on the original instance.  "no" is only reported when every
// stage that refuted the instance was complete: the reduction, a ring
// without a full linkage, or candidate enumeration at a budget covering
// the longest spinal path with the complete feasibility backend.
// Otherwise exhausted budgets yield the budget-exhausted verdict.
RunReport solve_pipeline(const DspInstance& inst,
                         const PipelineConfig& cfg = {});

// Exhaustive reference solver wrapped in the same report shape.
RunReport solve_oracle(const DspInstance& inst,
                       long long max_nodes = 50'000'000);

}  // namespace pdsp
