#pragma once

#include <string>

#include "pdsp/instances.hpp"

namespace pdsp {

// Canonical JSON text for each artifact.  Serialization is deterministic
// (fixed key order, 2-space indent, trailing newline), so
// save(load(text)) == text holds for any canonical file.
std::string dsp_to_json(const DspInstance& inst);
std::string dap_to_json(const DapInstance& inst);
std::string solution_to_json(const Solution& sol);

DspInstance dsp_from_json(const std::string& text);
DapInstance dap_from_json(const std::string& text);
Solution solution_from_json(const std::string& text);

// File helpers; failures surface as Error{BadInput}.
void save_text(const std::string& path, const std::string& text);
std::string load_text(const std::string& path);

DspInstance load_dsp(const std::string& path);
DapInstance load_dap(const std::string& path);
Solution load_solution(const std::string& path);

}  // namespace pdsp
