// Command-line front end: solving, oracles, structural inspection,
// generation, validation, benchmarks.  File formats are the canonical JSON
// ones from the library; every subcommand exits 0 once it produced a
// verdict, 1 on usage or parse problems, 2 on internal invariant failures.
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdsp/analysis.hpp"
#include "pdsp/brute_force.hpp"
#include "pdsp/generators.hpp"
#include "pdsp/json_io.hpp"
#include "pdsp/pipeline.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

struct SolveFlags {
  std::string backend = "path-search";
  std::string budgets = "4,8,16,32";
  int parallel = 1;
  long long max_nodes = 50'000'000;
  unsigned seed = 0;

  pdsp::PipelineConfig config() const {
    pdsp::PipelineConfig cfg;
    if (backend == "path-search") {
      cfg.backend = pdsp::HfBackend::PathSearch;
    } else if (backend == "shift-search") {
      cfg.backend = pdsp::HfBackend::ShiftSearch;
    } else {
      pdsp::fail(pdsp::ErrorCode::BadInput,
                 "unknown backend '" + backend + "'");
    }
    cfg.budgets.clear();
    std::stringstream ss(budgets);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) cfg.budgets.push_back(std::stoi(tok));
    cfg.parallelism = parallel;
    cfg.max_nodes = max_nodes;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
  }
};

void add_solve_flags(CLI::App* cmd, SolveFlags& fl) {
  cmd->add_option("--backend", fl.backend,
                  "feasibility backend: path-search | shift-search");
  cmd->add_option("--budget-L", fl.budgets,
                  "comma-separated increasing crossing budgets");
  cmd->add_option("--parallel", fl.parallel, "candidate worker threads");
  cmd->add_option("--max-nodes", fl.max_nodes, "search node budget");
  cmd->add_option("--seed", fl.seed, "seed embedded in the report");
}

ordered_json report_json(const pdsp::RunReport& rep) {
  ordered_json j;
  j["verdict"] = pdsp::verdict_name(rep.verdict);
  if (!rep.reason.empty()) j["reason"] = rep.reason;
  j["seed"] = rep.seed;
  j["validated"] = rep.validated;
  if (rep.solution) j["solution"] = *rep.solution;
  ordered_json checks = ordered_json::object();
  for (const auto& [name, ok] : rep.checks) checks[name] = ok;
  j["checks"] = checks;
  ordered_json parts = ordered_json::array();
  for (const pdsp::PartReport& pr : rep.parts) {
    ordered_json p;
    p["k"] = pr.k;
    p["route"] = pr.route;
    p["rings"] = pr.rings;
    p["superset"] = pr.superset;
    p["spinal_paths"] = pr.spinal_paths;
    p["spinal_load"] = pr.spinal_load;
    p["spinal_geodesic"] = pr.spinal_geodesic;
    ordered_json rounds = ordered_json::array();
    for (const pdsp::LRound& r : pr.rounds)
      rounds.push_back({{"budget", r.budget},
                        {"effective", r.effective},
                        {"enumerated", r.enumerated},
                        {"fresh", r.fresh},
                        {"incompatible", r.incompatible}});
    p["rounds"] = rounds;
    p["accepted_budget"] = pr.accepted_budget;
    p["accepted_load"] = pr.accepted_load;
    p["accepted_lens"] = pr.accepted_lens;
    parts.push_back(p);
  }
  j["parts"] = parts;
  ordered_json times = ordered_json::array();
  for (const auto& [stage, sec] : rep.timings)
    times.push_back({{"stage", stage}, {"seconds", sec}});
  j["timings"] = times;
  return j;
}

void print_report(const pdsp::RunReport& rep, bool as_json) {
  if (as_json) {
    std::cout << report_json(rep).dump(2) << "\n";
    return;
  }
  std::cout << "verdict: " << pdsp::verdict_name(rep.verdict) << "\n";
  if (!rep.reason.empty()) std::cout << "reason: " << rep.reason << "\n";
  for (const auto& [name, ok] : rep.checks)
    std::cout << "check " << name << ": " << (ok ? "ok" : "FAIL") << "\n";
  for (const pdsp::PartReport& pr : rep.parts) {
    std::cout << "part k=" << pr.k << " route=" << pr.route
              << " rings=" << pr.rings << " |Q(K)|=" << pr.spinal_paths;
    if (pr.accepted_budget >= 0)
      std::cout << " accepted at L=" << pr.accepted_budget
                << " load=" << pr.accepted_load;
    std::cout << "\n";
    for (const pdsp::LRound& r : pr.rounds)
      std::cout << "  L=" << r.budget << " (effective " << r.effective
                << "): " << r.enumerated << " candidates, " << r.fresh
                << " fresh, " << r.incompatible << " incompatible\n";
  }
  if (rep.solution) {
    for (std::size_t i = 0; i < rep.solution->size(); ++i) {
      std::cout << "path " << i << ":";
      for (int v : (*rep.solution)[i]) std::cout << " " << v;
      std::cout << "\n";
    }
  }
  for (const auto& [stage, sec] : rep.timings)
    std::cout << "time " << stage << ": " << sec << "s\n";
}

void maybe_save_solution(const pdsp::RunReport& rep, const std::string& out) {
  if (out.empty() || !rep.solution) return;
  pdsp::save_text(out, pdsp::solution_to_json(*rep.solution));
  std::cout << "solution written to " << out << "\n";
}

std::vector<fs::path> corpus_files(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (name.size() > 10 && name.ends_with(".pdsp.json"))
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

int run_solve(const std::string& file, const SolveFlags& fl, bool as_json,
              const std::string& out) {
  pdsp::RunReport rep = pdsp::solve_pipeline(pdsp::load_dsp(file), fl.config());
  print_report(rep, as_json);
  maybe_save_solution(rep, out);
  return 0;
}

int run_oracle(const std::string& file, long long max_nodes, bool as_json,
               const std::string& out) {
  pdsp::RunReport rep = pdsp::solve_oracle(pdsp::load_dsp(file), max_nodes);
  print_report(rep, as_json);
  maybe_save_solution(rep, out);
  return 0;
}

int run_differential(const std::string& dir, const SolveFlags& fl) {
  auto files = corpus_files(dir);
  pdsp::PipelineConfig cfg = fl.config();
  int mismatches = 0, skipped = 0;
  for (const auto& path : files) {
    pdsp::DspInstance inst = pdsp::load_dsp(path.string());
    pdsp::RunReport a = pdsp::solve_pipeline(inst, cfg);
    pdsp::RunReport b = pdsp::solve_oracle(inst, cfg.max_nodes);
    if (a.verdict == pdsp::Verdict::BudgetExhausted ||
        b.verdict == pdsp::Verdict::BudgetExhausted) {
      ++skipped;
      std::cout << path.filename().string() << ": skipped (budget)\n";
      continue;
    }
    bool same = a.verdict == b.verdict;
    std::cout << path.filename().string() << ": solve="
              << pdsp::verdict_name(a.verdict)
              << " oracle=" << pdsp::verdict_name(b.verdict)
              << (same ? "" : "  MISMATCH") << "\n";
    if (!same) {
      ++mismatches;
      std::cout << "--- mismatching instance " << path.string() << " ---\n"
                << pdsp::dsp_to_json(inst) << "--- end instance ---\n";
    }
  }
  std::cout << files.size() << " instances, " << mismatches << " mismatches, "
            << skipped << " skipped\n";
  return mismatches == 0 ? 0 : 2;
}

int run_rings(const std::string& file) {
  pdsp::Setup su = pdsp::prepare(pdsp::load_dsp(file));
  if (su.no_instance) {
    std::cout << "no-instance during reduction: " << su.reason << "\n";
    return 0;
  }
  for (std::size_t pi = 0; pi < su.parts.size(); ++pi) {
    const pdsp::PartSetup& ps = su.parts[pi];
    std::cout << "part " << pi << ": k=" << ps.ni.inst.k();
    if (ps.micro) {
      std::cout << " (degenerate: " << ps.micro_reason << ")\n";
      continue;
    }
    std::cout << " superset=" << ps.tree.principal.size()
              << " rings=" << ps.dec.entries.size()
              << (ps.dec.exhaustive ? " exhaustive" : "") << "\n";
    for (std::size_t i = 0; i < ps.dec.entries.size(); ++i) {
      const auto& en = ps.dec.entries[i];
      std::cout << "  ring " << i << ": |X|=" << en.part.X.size()
                << " |Y|=" << en.part.Y.size()
                << " split=" << en.part.split.size()
                << " |U_X|=" << en.ring.ux.size()
                << " |U_mid|=" << en.ring.umid.size()
                << " |U_Y|=" << en.ring.uy.size() << "\n";
    }
    if (!ps.refined)
      std::cout << "  refinement: a ring admits no full linkage\n";
  }
  return 0;
}

int run_skeleton(const std::string& file) {
  pdsp::Setup su = pdsp::prepare(pdsp::load_dsp(file));
  if (su.no_instance) {
    std::cout << "no-instance during reduction: " << su.reason << "\n";
    return 0;
  }
  for (std::size_t pi = 0; pi < su.parts.size(); ++pi) {
    const pdsp::PartSetup& ps = su.parts[pi];
    std::cout << "part " << pi << ": k=" << ps.ni.inst.k();
    if (ps.micro) {
      std::cout << " (degenerate: " << ps.micro_reason << ")\n";
      continue;
    }
    if (!ps.refined) {
      std::cout << " refinement infeasible\n";
      continue;
    }
    const pdsp::SteinerTree& t = ps.tree;
    std::cout << "\n  tree: " << t.vertices.size() << " vertices, "
              << t.edges.size() << " edges, " << t.principal.size()
              << " principal, " << t.spinal.size() << " spinal paths\n";
    const pdsp::Skeleton& sk = ps.dual->sk;
    std::cout << "  skeleton: " << sk.faces.size() << " faces, |Q(K)|="
              << sk.spinal_cross.size() << ", loads:";
    for (const auto& cr : sk.spinal_cross) std::cout << " " << cr.size();
    std::cout << "\n  dual graph: " << ps.dual->ti.inst.g.n() << " vertices, "
              << ps.dual->ti.inst.g.m() << " edges\n";
  }
  return 0;
}

int run_enum(const std::string& file, const SolveFlags& fl) {
  pdsp::Setup su = pdsp::prepare(pdsp::load_dsp(file));
  pdsp::PipelineConfig cfg = fl.config();
  if (su.no_instance) {
    std::cout << "no-instance during reduction: " << su.reason << "\n";
    return 0;
  }
  for (std::size_t pi = 0; pi < su.parts.size(); ++pi) {
    const pdsp::PartSetup& ps = su.parts[pi];
    std::cout << "part " << pi << ":\n";
    if (ps.micro || !ps.refined) {
      std::cout << "  no skeleton ("
                << (ps.micro ? ps.micro_reason : "refinement infeasible")
                << ")\n";
      continue;
    }
    for (int budget : cfg.budgets) {
      auto cands = pdsp::enumerate_candidates(ps.dual->ti.inst, ps.dual->sk,
                                              budget);
      std::cout << "  L=" << budget << ": " << cands.size() << " candidates\n";
      std::map<std::vector<int>, int> by_shape;
      for (const auto& c : cands) ++by_shape[c.lens];
      for (const auto& [lens, count] : by_shape) {
        std::cout << "    lens=[";
        for (std::size_t i = 0; i < lens.size(); ++i)
          std::cout << (i ? "," : "") << lens[i];
        std::cout << "]: " << count << "\n";
      }
    }
  }
  return 0;
}

int run_analyze(const std::string& file, const std::string& solfile) {
  pdsp::DspInstance inst = pdsp::load_dsp(file);
  pdsp::Solution sol;
  if (!solfile.empty()) {
    sol = pdsp::load_solution(solfile);
  } else {
    auto s = pdsp::brute_force_solve(inst);
    if (!s) {
      std::cout << "instance has no solution; nothing to analyze\n";
      return 0;
    }
    sol = *s;
  }
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const std::vector<int>& q = sol[i];
    pdsp::Solution others;
    for (std::size_t j = 0; j < sol.size(); ++j)
      if (j != i) others.push_back(sol[j]);
    pdsp::LoadReport lr =
        pdsp::load_report(inst.g, others, q, inst.terminals);
    std::cout << "path " << i << ": load=" << lr.load
              << " pulled=" << lr.pulled_load << " pulls=" << lr.pulls
              << " handles=" << lr.handles_total << " (winding "
              << lr.handles_winding << ", regular " << lr.handles_regular
              << ", empty " << lr.handles_empty << ")\n";
  }
  if (!sol.empty() && !sol[0].empty()) {
    const pdsp::PlaneMultigraph& g = inst.g;
    int s0 = sol[0].front(), t0 = sol[0].back();
    if (g.degree(s0) > 0 && g.degree(t0) > 0) {
      int fs = g.face_of(g.darts_out(s0)[0]);
      int ft = g.face_of(g.darts_out(t0)[0]);
      if (fs != ft) {
        pdsp::RootedRing ring = pdsp::make_rooted_ring(g, fs, ft);
        for (std::size_t i = 1; i < sol.size(); ++i)
          std::cout << "winding of path " << i << " vs pair-0 ring: "
                    << pdsp::winding_number(g, sol[i], ring) << "\n";
      }
    }
  }
  return 0;
}

int run_gen(const std::string& family, const std::vector<int>& dims,
            const std::string& weights, const std::string& terminals,
            std::uint64_t seed, const std::string& name,
            const std::string& out) {
  pdsp::DspInstance inst;
  if (family == "grid") {
    if (dims.size() != 2)
      pdsp::fail(pdsp::ErrorCode::BadInput, "grid needs --dims R,C");
    inst = pdsp::gen_grid(dims[0], dims[1], weights, terminals, seed);
  } else if (family == "spiral") {
    if (dims.size() != 2)
      pdsp::fail(pdsp::ErrorCode::BadInput, "spiral needs --dims turns,k");
    inst = pdsp::gen_spiral(dims[0], dims[1]);
  } else if (family == "crafted") {
    if (name.empty()) {
      std::cout << "crafted families:";
      for (const auto& n : pdsp::crafted_names()) std::cout << " " << n;
      std::cout << "\n";
      return 0;
    }
    inst = pdsp::gen_crafted(name);
  } else {
    pdsp::fail(pdsp::ErrorCode::BadInput, "unknown family '" + family + "'");
  }
  std::string text = pdsp::dsp_to_json(inst);
  if (out.empty()) {
    std::cout << text;
  } else {
    pdsp::save_text(out, text);
    std::cout << "instance written to " << out << "\n";
  }
  return 0;
}

int run_check(const std::string& instfile, const std::string& solfile) {
  pdsp::Solution sol = pdsp::load_solution(solfile);
  pdsp::CheckReport rep;
  bool annotated = instfile.ends_with(".pdap.json");
  if (annotated)
    rep = pdsp::check_solution(pdsp::load_dap(instfile), sol);
  else
    rep = pdsp::check_solution(pdsp::load_dsp(instfile), sol);
  auto line = [](const char* what, bool ok) {
    std::cout << what << ": " << (ok ? "ok" : "FAIL") << "\n";
  };
  line("paths exist", rep.paths_exist);
  line("endpoints match", rep.endpoints_match);
  line("vertex-disjoint", rep.disjoint);
  if (annotated)
    line("inside annotations", rep.in_annotation);
  else
    line("all geodesic", rep.geodesic);
  std::cout << "verdict: " << (rep.ok(annotated) ? "valid" : "invalid")
            << "\n";
  return 0;
}

int run_bench(const std::string& dir, const SolveFlags& fl) {
  auto files = corpus_files(dir);
  pdsp::PipelineConfig cfg = fl.config();
  double total = 0;
  for (const auto& path : files) {
    pdsp::RunReport rep = pdsp::solve_pipeline(pdsp::load_dsp(path.string()), cfg);
    double sec = 0;
    for (const auto& [stage, s] : rep.timings) sec += s;
    total += sec;
    std::cout << path.filename().string() << ": "
              << pdsp::verdict_name(rep.verdict) << " in " << sec << "s\n";
  }
  std::cout << files.size() << " instances in " << total << "s total\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planar disjoint shortest paths toolkit"};
  app.require_subcommand(1);

  std::string file, dir, out, solfile;
  bool as_json = false;
  SolveFlags fl;
  long long oracle_nodes = 50'000'000;

  auto* solve = app.add_subcommand("solve", "run the structural solver");
  solve->add_option("instance", file, "*.pdsp.json input")->required();
  add_solve_flags(solve, fl);
  solve->add_flag("--json", as_json, "structured report");
  solve->add_option("--out", out, "write the solution file");

  auto* oracle = app.add_subcommand("oracle", "run the exhaustive solver");
  oracle->add_option("instance", file, "*.pdsp.json input")->required();
  oracle->add_option("--max-nodes", oracle_nodes, "search node budget");
  oracle->add_flag("--json", as_json, "structured report");
  oracle->add_option("--out", out, "write the solution file");

  auto* diff = app.add_subcommand("differential",
                                  "compare solver and oracle over a corpus");
  diff->add_option("corpus", dir, "directory of *.pdsp.json files")
      ->required();
  add_solve_flags(diff, fl);

  auto* rings = app.add_subcommand("rings", "print the ring decomposition");
  rings->add_option("instance", file, "*.pdsp.json input")->required();

  auto* skel = app.add_subcommand("skeleton", "print tree and skeleton data");
  skel->add_option("instance", file, "*.pdsp.json input")->required();

  auto* enumh = app.add_subcommand("enum-homology",
                                   "print candidate statistics per budget");
  enumh->add_option("instance", file, "*.pdsp.json input")->required();
  add_solve_flags(enumh, fl);

  auto* analyze = app.add_subcommand("analyze",
                                     "handle and load diagnostics");
  analyze->add_option("instance", file, "*.pdsp.json input")->required();
  analyze->add_option("--solution", solfile, "solution to analyze");

  std::string family, weights = "unit", terminals = "corners", name;
  std::vector<int> dims;
  std::uint64_t gseed = 1;
  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("family", family, "grid | spiral | crafted")->required();
  gen->add_option("--dims", dims, "grid R,C or spiral turns,k")
      ->delimiter(',');
  gen->add_option("--weights", weights, "unit | random");
  gen->add_option("--terminals", terminals,
                  "corners | corners2 | rows<k> | random<k>");
  gen->add_option("--seed", gseed, "generator seed");
  gen->add_option("--name", name, "crafted instance name");
  gen->add_option("--out", out, "output path");

  auto* check = app.add_subcommand("check", "validate a solution file");
  check->add_option("instance", file, "*.pdsp.json or *.pdap.json")
      ->required();
  check->add_option("solution", solfile, "*.sol.json")->required();

  auto* bench = app.add_subcommand("bench", "time the solver over a corpus");
  bench->add_option("corpus", dir, "directory of *.pdsp.json files")
      ->required();
  add_solve_flags(bench, fl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed()) return run_solve(file, fl, as_json, out);
    if (oracle->parsed()) return run_oracle(file, oracle_nodes, as_json, out);
    if (diff->parsed()) return run_differential(dir, fl);
    if (rings->parsed()) return run_rings(file);
    if (skel->parsed()) return run_skeleton(file);
    if (enumh->parsed()) return run_enum(file, fl);
    if (analyze->parsed()) return run_analyze(file, solfile);
    if (gen->parsed())
      return run_gen(family, dims, weights, terminals, gseed, name, out);
    if (check->parsed()) return run_check(file, solfile);
    if (bench->parsed()) return run_bench(dir, fl);
  } catch (const pdsp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code == pdsp::ErrorCode::BadInput ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
