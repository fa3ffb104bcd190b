#include "pdsp/json_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pdsp {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json graph_to_json(const PlaneMultigraph& g, const char* format) {
  ordered_json j;
  j["format"] = format;
  j["version"] = 1;
  j["vertices"] = g.n();
  ordered_json edges = ordered_json::array();
  for (const EdgeRec& e : g.edges()) {
    ordered_json je;
    je["u"] = e.u;
    je["v"] = e.v;
    je["num"] = (long long)e.w.numerator();
    je["den"] = (long long)e.w.denominator();
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  ordered_json rots = ordered_json::array();
  for (int v = 0; v < g.n(); ++v) {
    ordered_json r = ordered_json::array();
    for (int d : g.darts_out(v)) r.push_back(PlaneMultigraph::dart_edge(d));
    rots.push_back(std::move(r));
  }
  j["rotations"] = std::move(rots);
  // Canonical hint: the smallest dart bordering the outer face.
  int hint = -1;
  for (int d = 0; d < g.dart_count() && hint < 0; ++d)
    if (g.face_of(d) == g.outer_face()) hint = d;
  if (hint >= 0) j["outer_face_hint"] = hint;
  return j;
}

ordered_json terminals_to_json(const std::vector<std::pair<int, int>>& ts) {
  ordered_json a = ordered_json::array();
  for (auto& [s, t] : ts) a.push_back(ordered_json::array({s, t}));
  return a;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json parse(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::BadInput, std::string("json parse: ") + e.what());
  }
}

void check_format(const ordered_json& j, const char* format) {
  require(j.is_object(), ErrorCode::BadInput, "json root must be an object");
  require(j.value("format", std::string()) == format, ErrorCode::BadInput,
          std::string("expected format \"") + format + "\"");
  require(j.value("version", 0) == 1, ErrorCode::BadInput,
          "unsupported format version");
}

PlaneMultigraph graph_from_json(const ordered_json& j) {
  try {
    int n = j.at("vertices").get<int>();
    std::vector<EdgeRec> edges;
    for (const auto& je : j.at("edges")) {
      long long num = je.at("num").get<long long>();
      long long den = je.at("den").get<long long>();
      require(den > 0, ErrorCode::BadInput, "edge weight denominator <= 0");
      edges.push_back(
          {je.at("u").get<int>(), je.at("v").get<int>(), Rat(num, den)});
    }
    std::vector<std::vector<int>> rots;
    for (const auto& jr : j.at("rotations"))
      rots.push_back(jr.get<std::vector<int>>());
    std::optional<int> hint;
    if (j.contains("outer_face_hint")) hint = j.at("outer_face_hint").get<int>();
    return PlaneMultigraph::build(n, edges, rots, hint);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::BadInput, std::string("instance json: ") + e.what());
  }
}

std::vector<std::pair<int, int>> terminals_from_json(const ordered_json& j,
                                                     int n) {
  std::vector<std::pair<int, int>> ts;
  try {
    for (const auto& jp : j.at("terminals")) {
      require(jp.is_array() && jp.size() == 2, ErrorCode::BadInput,
              "terminal entries must be [s, t]");
      int s = jp[0].get<int>(), t = jp[1].get<int>();
      require(0 <= s && s < n && 0 <= t && t < n, ErrorCode::BadInput,
              "terminal out of range");
      ts.push_back({s, t});
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::BadInput, std::string("terminals json: ") + e.what());
  }
  return ts;
}

}  // namespace

std::string dsp_to_json(const DspInstance& inst) {
  ordered_json j = graph_to_json(inst.g, "pdsp");
  j["terminals"] = terminals_to_json(inst.terminals);
  return dump(j);
}

std::string dap_to_json(const DapInstance& inst) {
  ordered_json j = graph_to_json(inst.g, "pdap");
  j["terminals"] = terminals_to_json(inst.terminals);
  // Per pair, the annotated arcs as sorted dart ids.
  ordered_json ann = ordered_json::array();
  for (const auto& arcs : inst.annotations) {
    ordered_json a = ordered_json::array();
    for (int d = 0; d < (int)arcs.size(); ++d)
      if (arcs[d]) a.push_back(d);
    ann.push_back(std::move(a));
  }
  j["annotations"] = std::move(ann);
  return dump(j);
}

std::string solution_to_json(const Solution& sol) {
  ordered_json j;
  j["format"] = "sol";
  j["version"] = 1;
  ordered_json paths = ordered_json::array();
  for (const auto& p : sol) paths.push_back(p);
  j["paths"] = std::move(paths);
  return dump(j);
}

DspInstance dsp_from_json(const std::string& text) {
  ordered_json j = parse(text);
  check_format(j, "pdsp");
  DspInstance inst;
  inst.g = graph_from_json(j);
  inst.terminals = terminals_from_json(j, inst.g.n());
  return inst;
}

DapInstance dap_from_json(const std::string& text) {
  ordered_json j = parse(text);
  check_format(j, "pdap");
  DapInstance inst;
  inst.g = graph_from_json(j);
  inst.terminals = terminals_from_json(j, inst.g.n());
  try {
    for (const auto& ja : j.at("annotations")) {
      std::vector<char> arcs(inst.g.dart_count(), 0);
      for (const auto& jd : ja) {
        int d = jd.get<int>();
        require(0 <= d && d < inst.g.dart_count(), ErrorCode::BadInput,
                "annotation dart out of range");
        arcs[d] = 1;
      }
      inst.annotations.push_back(std::move(arcs));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::BadInput, std::string("annotations json: ") + e.what());
  }
  require(inst.annotations.size() == inst.terminals.size(),
          ErrorCode::BadInput, "one annotation set per terminal pair required");
  return inst;
}

Solution solution_from_json(const std::string& text) {
  ordered_json j = parse(text);
  check_format(j, "sol");
  Solution sol;
  try {
    for (const auto& jp : j.at("paths"))
      sol.push_back(jp.get<std::vector<int>>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::BadInput, std::string("solution json: ") + e.what());
  }
  return sol;
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require((bool)out, ErrorCode::BadInput, "cannot open for writing: " + path);
  out << text;
  require((bool)out, ErrorCode::BadInput, "write failed: " + path);
}

std::string load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require((bool)in, ErrorCode::BadInput, "cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DspInstance load_dsp(const std::string& path) {
  return dsp_from_json(load_text(path));
}
DapInstance load_dap(const std::string& path) {
  return dap_from_json(load_text(path));
}
Solution load_solution(const std::string& path) {
  return solution_from_json(load_text(path));
}

}  // namespace pdsp
