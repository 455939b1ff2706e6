#pragma once

#include <Eigen/Dense>

#include <complex>

namespace kicktop {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Angular momentum operators for a spin-j system in the J_z eigenbasis.
// Basis order is m = j, j-1, ..., -j, so |j,j> is the first basis vector.
// Immutable after construction; safe to share across threads read-only.
struct SpinSystem {
  double j = 0.0;
  int dim = 0;  // 2j + 1
  Matrix jx, jy, jz;
};

// Normalized state vector over |j,m>, same basis order as SpinSystem.
struct PureState {
  Vector amplitudes;
};

// Unit vector on the sphere of mean angular momentum directions.
struct BlochPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Coherent-state parameters; theta in [0, pi], phi in (-pi, pi].
struct SphereAngles {
  double theta = 0.0;
  double phi = 0.0;
};

// True when 2j is a nonnegative integer and j >= 1/2.
bool is_half_integer_spin(double j);

// Builds jx, jy, jz from the ladder operators
// <j,m+-1|J+-|j,m> = sqrt(j(j+1) - m(m+-1)). Throws on invalid j.
SpinSystem build_spin_system(double j);

// exp(scale * h) for Hermitian h via eigendecomposition h = V diag(w) V^dag.
// Throws if h deviates from Hermitian by more than 1e-10 elementwise.
// For purely imaginary scale the result is unitary up to roundoff.
Matrix hermitian_exp(const Matrix& h, Complex scale);

// Spin coherent state exp(i theta (jx cos(phi) - jy sin(phi))) |j,j>.
PureState coherent_state(const SpinSystem& sys, double theta, double phi);

// Direction of (<jx>, <jy>, <jz>), normalized to the unit sphere.
// Throws if the mean vector vanishes (never happens for coherent states,
// whose mean has length j).
BlochPoint coherent_mean(const SpinSystem& sys, const PureState& psi);

// Inverse of the coherent-state placement: returns (theta, phi) such that
// coherent_mean(coherent_state(sys, theta, phi)) == p for any valid sys.
// Poles map to theta in {0, pi} with phi = 0.
SphereAngles point_to_angles(const BlochPoint& p);

// Great-circle angle between two unit vectors, in [0, pi].
double angular_distance(const BlochPoint& a, const BlochPoint& b);

}  // namespace kicktop
