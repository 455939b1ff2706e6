#include "kicktop/spin_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kicktop {

namespace {
constexpr double kHermitianTol = 1e-10;
constexpr double kStateNormTol = 1e-10;
}  // namespace

bool is_half_integer_spin(double j) {
  if (!std::isfinite(j) || j < 0.5) return false;
  const double twice = 2.0 * j;
  return std::abs(twice - std::round(twice)) < 1e-9;
}

SpinSystem build_spin_system(double j) {
  if (!is_half_integer_spin(j)) {
    throw std::invalid_argument(
        "build_spin_system: j must be a half-integer >= 1/2, got " + std::to_string(j));
  }
  const int dim = static_cast<int>(std::lround(2.0 * j)) + 1;

  // index i holds m = j - i; J+ maps m -> m+1, i.e. column i to row i-1
  Matrix jplus = Matrix::Zero(dim, dim);
  for (int i = 1; i < dim; ++i) {
    const double m = j - i;
    jplus(i - 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  const Matrix jminus = jplus.adjoint();

  SpinSystem sys;
  sys.j = j;
  sys.dim = dim;
  sys.jx = (jplus + jminus) / 2.0;
  sys.jy = (jplus - jminus) / Complex(0.0, 2.0);
  sys.jz = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) sys.jz(i, i) = j - i;
  return sys;
}

Matrix hermitian_exp(const Matrix& h, Complex scale) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw std::invalid_argument("hermitian_exp: matrix must be square and nonempty");
  }
  const double deviation = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (deviation > kHermitianTol) {
    throw std::invalid_argument(
        "hermitian_exp: matrix deviates from Hermitian by " + std::to_string(deviation));
  }
  if (scale == Complex(0.0, 0.0)) {
    return Matrix::Identity(h.rows(), h.cols());  // exp(0 h) = I exactly
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_exp: eigendecomposition failed");
  }
  const Eigen::VectorXcd phases =
      (scale * solver.eigenvalues().array().cast<Complex>()).exp().matrix();
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

PureState coherent_state(const SpinSystem& sys, double theta, double phi) {
  if (!std::isfinite(theta) || !std::isfinite(phi)) {
    throw std::invalid_argument("coherent_state: angles must be finite");
  }
  const Matrix generator = std::cos(phi) * sys.jx - std::sin(phi) * sys.jy;
  const Matrix rotation = hermitian_exp(generator, Complex(0.0, theta));
  PureState psi;
  psi.amplitudes = rotation.col(0);  // rotation applied to |j,j>
  return psi;
}

BlochPoint coherent_mean(const SpinSystem& sys, const PureState& psi) {
  if (psi.amplitudes.size() != sys.dim) {
    throw std::invalid_argument("coherent_mean: state/system dimension mismatch");
  }
  if (std::abs(psi.amplitudes.norm() - 1.0) > kStateNormTol) {
    throw std::invalid_argument("coherent_mean: state is not normalized");
  }
  const Vector& a = psi.amplitudes;
  const double mx = a.dot(sys.jx * a).real();
  const double my = a.dot(sys.jy * a).real();
  const double mz = a.dot(sys.jz * a).real();
  const double len = std::sqrt(mx * mx + my * my + mz * mz);
  if (len < 1e-12) {
    throw std::invalid_argument("coherent_mean: mean angular momentum vector vanishes");
  }
  return {mx / len, my / len, mz / len};
}

SphereAngles point_to_angles(const BlochPoint& p) {
  const double r2 = p.x * p.x + p.y * p.y + p.z * p.z;
  if (std::abs(r2 - 1.0) > 1e-9) {
    throw std::invalid_argument("point_to_angles: point is not on the unit sphere");
  }
  const double theta = std::acos(std::clamp(p.z, -1.0, 1.0));
  if (std::hypot(p.x, p.y) < 1e-15) {
    return {p.z > 0.0 ? 0.0 : theta, 0.0};  // pole convention
  }
  // the coherent-state mean sits at (sin t sin f, sin t cos f, cos t)
  return {theta, std::atan2(p.x, p.y)};
}

double angular_distance(const BlochPoint& a, const BlochPoint& b) {
  const double dot = a.x * b.x + a.y * b.y + a.z * b.z;
  return std::acos(std::clamp(dot, -1.0, 1.0));
}

}  // namespace kicktop
