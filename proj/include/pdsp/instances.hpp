#pragma once

#include "pdsp/geodesics.hpp"

#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace pdsp {

// Disjoint-shortest-paths instance: plane graph plus terminal pairs.
struct DspInstance {
  PlaneMultigraph g;
  std::vector<std::pair<int, int>> terminals;

  int k() const { return int(terminals.size()); }
};

// Annotated variant: per pair an oriented subgraph D_i; a solution path for
// pair i must be a directed path in D_i.
struct DapInstance {
  PlaneMultigraph g;
  std::vector<std::pair<int, int>> terminals;
  std::vector<std::vector<char>> annotations; // [pair][dart]

  int k() const { return int(terminals.size()); }
};

// One path per pair, as a vertex sequence from s_i to t_i.
using Solution = std::vector<std::vector<int>>;

// Output of the nice-instance reduction.  Vertices carry provenance so that
// solutions can be transported back to the original instance.
struct NiceInstance {
  DspInstance inst;
  std::shared_ptr<DistanceOracle> oracle;   // of inst.g
  std::vector<int> orig_vertex; // inst vertex -> original vertex, -1 for pendants
  std::vector<int> orig_pair;   // inst pair index -> original pair index
};

struct MakeNiceResult {
  bool no_instance = false;     // definitive "no" discovered during reduction
  std::string reason;           // why, when no_instance
  std::vector<NiceInstance> parts;
};

// Pendant-terminal attachment, removal of edges on no terminal dag, split
// into components.  The input is solvable iff every part is solvable.
MakeNiceResult make_nice(const DspInstance& inst);

// Checks Def.-style niceness directly: connected, distinct terminals, all
// terminals degree 1, every edge on some terminal dag.
bool is_nice(const DspInstance& inst, std::string* why = nullptr);

// D_i := shortest-path dag of pair i.
DapInstance annotate(const DspInstance& inst);
DapInstance annotate(const DspInstance& inst, const DistanceOracle& oracle);

// Planar-DAG reduction.  The input digraph is given as a PlaneMultigraph
// whose every edge record (u,v) is the arc u->v.  Produces a unit-weight
// undirected instance by subdividing arc (v_i,v_j) of the fixed topological
// order into j-i edges, together with the vertex map original -> new id.
struct DagReduction {
  DspInstance inst;
  std::vector<int> vertex_map;  // original vertex -> new id
  std::vector<int> topo_pos;    // original vertex -> topological position
};
std::optional<DagReduction> reduce_dag_to_dsp(
    const PlaneMultigraph& dag, const std::vector<std::pair<int, int>>& pairs);

// Lifts a solution of a nice part back to original vertex ids (pendant
// endpoints dropped).  Paths are keyed by original pair index.
void transport_back(const NiceInstance& part, const Solution& sol,
                    Solution& into_original);

// Solution validation, one verdict per invariant.
struct CheckReport {
  bool paths_exist = false;     // every sequence is a path of the graph
  bool endpoints_match = false; // P_i runs s_i -> t_i
  bool disjoint = false;        // pairwise vertex-disjoint
  bool geodesic = false;        // PDSP: each path shortest
  bool in_annotation = false;   // PDAP: each path directed in D_i
  bool ok(bool annotated) const {
    return paths_exist && endpoints_match && disjoint &&
           (annotated ? in_annotation : geodesic);
  }
};
CheckReport check_solution(const DspInstance& inst, const Solution& sol);
CheckReport check_solution(const DapInstance& inst, const Solution& sol);

} // namespace pdsp
