#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pdsp/instances.hpp"
#include "pdsp/plane_graph.hpp"

namespace pdsp {

// Reduced word in the free group on generators 1..k.  Symbols are nonzero
// ints: +i is generator i, -i its inverse.  The invariant is that no two
// adjacent entries cancel; all operations preserve it.
struct GroupWord {
  std::vector<int> syms;

  static GroupWord one() { return {}; }
  static GroupWord gen(int i, bool inv = false);

  bool is_identity() const { return syms.empty(); }
  int length() const { return (int)syms.size(); }
  GroupWord inverse() const;
  std::string str() const;

  bool operator==(const GroupWord&) const = default;
  bool operator<(const GroupWord& o) const { return syms < o.syms; }
};

// Free reduction of an arbitrary symbol sequence.
GroupWord reduce(const std::vector<int>& raw);

// Reduced product.
GroupWord concat(const GroupWord& u, const GroupWord& v);
inline GroupWord operator*(const GroupWord& u, const GroupWord& v) {
  return concat(u, v);
}

struct WordHash {
  std::size_t operator()(const GroupWord& w) const;
};

// Group element per arc (dart), with label(a⁻¹) = label(a)⁻¹.
struct Labelling {
  std::vector<GroupWord> by_dart;

  static Labelling identity(int dart_count) {
    Labelling l;
    l.by_dart.assign(dart_count, GroupWord::one());
    return l;
  }
  const GroupWord& at(int dart) const { return by_dart[dart]; }
  // Sets the label of one arc and of its reverse.
  void set_arc(int dart, const GroupWord& w);
  bool valid() const;
};

// Labels each arc by the index of the path traversing it: +i along the
// path's direction, -i against it, identity elsewhere.  Paths are vertex
// sequences; pairs index symbols 1..k in order.
Labelling solution_labelling(const PlaneMultigraph& g, const Solution& sol);

// Product of the labels of all arcs with head v, in clockwise order around
// v, equals the identity.  The start arc does not matter.
bool is_clean(const PlaneMultigraph& g, const Labelling& lam, int v);

// A walk in the dual graph described by primal arcs: each step crosses the
// primal arc `a` moving from the face on a's right to the face on a's left,
// and contributes label(a).  Returns the reduced product over the walk.
GroupWord char_word(const Labelling& lam, const std::vector<int>& walk_arcs);

// The steps of a separating dual cycle in the above form.  The cycle's
// crossing lists store darts whose left->right face direction the cycle
// follows, so each step's contributing arc is the reverse dart.
std::vector<int> cycle_char_arcs(const DualCycle& c);

// Group element per face.  Applying a shift to a labelling conjugates each
// arc label by the incident face values; stable faces must carry identity.
struct Shift {
  std::vector<GroupWord> by_face;
  std::vector<int> stable_faces;

  static Shift identity(int face_count) {
    Shift s;
    s.by_face.assign(face_count, GroupWord::one());
    return s;
  }
  bool stable_ok() const;
  Shift inverted() const;
};

// psi[lam](a) = psi(face right of a) * lam(a) * psi(face left of a)^{-1}.
// Preserves the labelling invariant and cleanliness of clean vertices.
Labelling apply_shift(const PlaneMultigraph& g, const Labelling& lam,
                      const Shift& psi);

}  // namespace pdsp
