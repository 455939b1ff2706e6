#include "kicktop/kicked_top.hpp"

#include <cmath>
#include <stdexcept>

namespace kicktop {

FloquetOperator build_floquet(const TopParameters& params) {
  if (!std::isfinite(params.kick_strength) || !std::isfinite(params.rotation_angle)) {
    throw std::invalid_argument("build_floquet: kick strength and rotation angle must be finite");
  }
  const SpinSystem sys = build_spin_system(params.j);

  Eigen::VectorXcd kick_phases(sys.dim);
  const double coeff = params.kick_strength / (2.0 * params.j);
  for (int i = 0; i < sys.dim; ++i) {
    const double m = params.j - i;
    kick_phases(i) = std::polar(1.0, -coeff * m * m);
  }
  const Matrix rotation = hermitian_exp(sys.jy, Complex(0.0, -params.rotation_angle));

  FloquetOperator u;
  u.params = params;
  u.matrix = kick_phases.asDiagonal() * rotation;  // kick acts after the rotation
  return u;
}

Vector apply(const FloquetOperator& u, const Vector& v) {
  if (v.size() != u.matrix.cols()) {
    throw std::invalid_argument("apply: vector length does not match operator dimension");
  }
  return u.matrix * v;
}

}  // namespace kicktop
