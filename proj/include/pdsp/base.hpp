#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pdsp {

// Exact edge weights.  Weight sums stay tiny at the instance sizes this
// library targets, so a machine-word rational is plenty; boost::rational
// keeps everything normalized and throws on zero denominators.
using Rat = boost::rational<long long>;

inline Rat rat(long long num, long long den = 1) { return Rat(num, den); }

enum class ErrorCode {
  BadInput,          // malformed file / argument
  DuplicateDart,     // a dart appears in more than one rotation slot
  NonPositiveWeight, // edge weight <= 0
  EulerViolation,    // rotation system is not a sphere embedding
  Disconnected,      // operation needs a connected (sub)graph
  SideNotConnected,  // a cut side fails the connectivity requirement
  CyclesCross,       // region bounded by two cycles is not an annulus
  NoReport,          // instance outside the supported fragment
  LimitExceeded,     // configured search budget exhausted
  OrientationConflict, // ring interior edge fits no consistent direction
  NotEmptyHandle,    // pull applied to a winding or non-empty handle
  Internal,          // invariant violation inside the library
};

struct Error : std::runtime_error {
  ErrorCode code;
  Error(ErrorCode c, const std::string& what)
      : std::runtime_error(what), code(c) {}
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& what) {
  throw Error(c, what);
}

inline void require(bool ok, ErrorCode c, const std::string& what) {
  if (!ok) fail(c, what);
}

} // namespace pdsp
