#pragma once

#include "kicktop/spin_algebra.hpp"

#include <numbers>

namespace kicktop {

// One drive period: a rotation about jy followed by a torsion kick about jz.
// Defaults reproduce the standard strongly-kicked configuration.
struct TopParameters {
  double j = 18.0;
  double kick_strength = 3.0;
  double rotation_angle = std::numbers::pi / 2.0;
};

struct FloquetOperator {
  Matrix matrix;  // unitary, dim x dim
  TopParameters params;
};

// exp(-i (k/2j) jz^2) exp(-i p jy). The kick factor is diagonal in the
// jz eigenbasis and is applied as exact per-level phases.
FloquetOperator build_floquet(const TopParameters& params);

// u.matrix * v; preserves the 2-norm up to roundoff.
Vector apply(const FloquetOperator& u, const Vector& v);

}  // namespace kicktop
