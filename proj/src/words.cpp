#include "pdsp/words.hpp"

#include <sstream>

namespace pdsp {

GroupWord GroupWord::gen(int i, bool inv) {
  require(i != 0, ErrorCode::BadInput, "generator index must be nonzero");
  GroupWord w;
  w.syms.push_back(inv ? -i : i);
  return w;
}

GroupWord GroupWord::inverse() const {
  GroupWord w;
  w.syms.reserve(syms.size());
  for (auto it = syms.rbegin(); it != syms.rend(); ++it) w.syms.push_back(-*it);
  return w;
}

std::string GroupWord::str() const {
  if (syms.empty()) return "e";
  std::ostringstream ss;
  for (size_t i = 0; i < syms.size(); ++i) {
    if (i) ss << ' ';
    ss << syms[i];
  }
  return ss.str();
}

GroupWord reduce(const std::vector<int>& raw) {
  GroupWord w;
  for (int s : raw) {
    require(s != 0, ErrorCode::BadInput, "word symbols must be nonzero");
    if (!w.syms.empty() && w.syms.back() == -s)
      w.syms.pop_back();
    else
      w.syms.push_back(s);
  }
  return w;
}

GroupWord concat(const GroupWord& u, const GroupWord& v) {
  GroupWord w = u;
  for (int s : v.syms) {
    if (!w.syms.empty() && w.syms.back() == -s)
      w.syms.pop_back();
    else
      w.syms.push_back(s);
  }
  return w;
}

std::size_t WordHash::operator()(const GroupWord& w) const {
  std::size_t h = 1469598103934665603ull;
  for (int s : w.syms) {
    h ^= (std::size_t)(s + 0x9e3779b9);
    h *= 1099511628211ull;
  }
  return h;
}

void Labelling::set_arc(int dart, const GroupWord& w) {
  by_dart[dart] = w;
  by_dart[dart ^ 1] = w.inverse();
}

bool Labelling::valid() const {
  for (size_t d = 0; d + 1 < by_dart.size(); d += 2)
    if (by_dart[d].inverse() != by_dart[d + 1]) return false;
  return true;
}

Labelling solution_labelling(const PlaneMultigraph& g, const Solution& sol) {
  Labelling lam = Labelling::identity(g.dart_count());
  for (size_t i = 0; i < sol.size(); ++i) {
    const auto& p = sol[i];
    for (size_t j = 0; j + 1 < p.size(); ++j) {
      auto d = g.find_dart(p[j], p[j + 1]);
      require(d.has_value(), ErrorCode::BadInput,
              "solution path uses a missing edge");
      require(lam.at(*d).is_identity(), ErrorCode::BadInput,
              "solution paths share an edge");
      lam.set_arc(*d, GroupWord::gen((int)i + 1));
    }
  }
  return lam;
}

bool is_clean(const PlaneMultigraph& g, const Labelling& lam, int v) {
  GroupWord prod;
  for (int d : g.darts_out(v))
    prod = concat(prod, lam.at(PlaneMultigraph::pair_dart(d)));
  return prod.is_identity();
}

GroupWord char_word(const Labelling& lam, const std::vector<int>& walk_arcs) {
  GroupWord prod;
  for (int a : walk_arcs) prod = concat(prod, lam.at(a));
  return prod;
}

std::vector<int> cycle_char_arcs(const DualCycle& c) {
  std::vector<int> arcs;
  arcs.reserve(c.crossed.size());
  for (int d : c.crossed) arcs.push_back(PlaneMultigraph::pair_dart(d));
  return arcs;
}

bool Shift::stable_ok() const {
  for (int f : stable_faces)
    if (!by_face[f].is_identity()) return false;
  return true;
}

Shift Shift::inverted() const {
  Shift s;
  s.stable_faces = stable_faces;
  s.by_face.reserve(by_face.size());
  for (const auto& w : by_face) s.by_face.push_back(w.inverse());
  return s;
}

Labelling apply_shift(const PlaneMultigraph& g, const Labelling& lam,
                      const Shift& psi) {
  require((int)psi.by_face.size() == g.face_count(), ErrorCode::BadInput,
          "shift has wrong number of faces");
  require((int)lam.by_dart.size() == g.dart_count(), ErrorCode::BadInput,
          "labelling has wrong number of arcs");
  Labelling out = lam;
  for (int d = 0; d < g.dart_count(); ++d) {
    const GroupWord& right = psi.by_face[g.face_right(d)];
    const GroupWord& left = psi.by_face[g.face_left(d)];
    out.by_dart[d] = concat(concat(right, lam.at(d)), left.inverse());
  }
  return out;
}

}  // namespace pdsp
