#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kicktop/spin_algebra.hpp"
#include "oracle.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace kicktop;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

PureState basis_state(const SpinSystem& sys, int index) {
  PureState psi;
  psi.amplitudes = Vector::Zero(sys.dim);
  psi.amplitudes(index) = 1.0;
  return psi;
}

}  // namespace

TEST_CASE("half-integer validation") {
  CHECK(is_half_integer_spin(0.5));
  CHECK(is_half_integer_spin(1.0));
  CHECK(is_half_integer_spin(2.5));
  CHECK(is_half_integer_spin(18.0));
  CHECK_FALSE(is_half_integer_spin(0.3));
  CHECK_FALSE(is_half_integer_spin(2.3));
  CHECK_FALSE(is_half_integer_spin(0.0));
  CHECK_FALSE(is_half_integer_spin(-1.0));
}

TEST_CASE("build_spin_system basics") {
  const SpinSystem half = build_spin_system(0.5);
  CHECK(half.dim == 2);
  CHECK(half.jz(0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(half.jz(1, 1).real() == doctest::Approx(-0.5).epsilon(1e-14));

  const SpinSystem big = build_spin_system(18.0);
  CHECK(big.dim == 37);

  const SpinSystem one = build_spin_system(1.0);
  CHECK(std::abs(one.jx(0, 1) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-14);
  CHECK(std::abs(one.jx(1, 0) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-14);
  CHECK(std::abs(one.jx(0, 0)) < 1e-14);
  CHECK(std::abs(one.jx(0, 2)) < 1e-14);

  CHECK_THROWS_AS(build_spin_system(0.3), std::invalid_argument);
  CHECK_THROWS_AS(build_spin_system(0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_spin_system(-1.0), std::invalid_argument);
}

TEST_CASE("angular momentum algebra for several j") {
  for (const double j : {0.5, 1.0, 1.5, 2.0, 18.0}) {
    CAPTURE(j);
    const SpinSystem sys = build_spin_system(j);
    const Matrix eye = Matrix::Identity(sys.dim, sys.dim);
    const Complex iu(0.0, 1.0);

    CHECK(max_abs(sys.jx - sys.jx.adjoint()) < 1e-12);
    CHECK(max_abs(sys.jy - sys.jy.adjoint()) < 1e-12);
    CHECK(max_abs(sys.jz - sys.jz.adjoint()) < 1e-12);

    CHECK(max_abs(commutator(sys.jx, sys.jy) - iu * sys.jz) < 1e-10);
    CHECK(max_abs(commutator(sys.jy, sys.jz) - iu * sys.jx) < 1e-10);
    CHECK(max_abs(commutator(sys.jz, sys.jx) - iu * sys.jy) < 1e-10);

    CHECK(max_abs(sys.jx * sys.jx + sys.jy * sys.jy + sys.jz * sys.jz - j * (j + 1.0) * eye) <
          1e-10);
  }
}

TEST_CASE("hermitian_exp closed forms") {
  const SpinSystem half = build_spin_system(0.5);

  // zero exponent
  CHECK(max_abs(hermitian_exp(half.jx, Complex(0.0, 0.0)) -
                Matrix::Identity(2, 2)) < 1e-14);

  // diagonal case
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 1.0;
  diag(1, 1) = -1.0;
  const Matrix exp_diag = hermitian_exp(diag, Complex(0.0, kPi));
  CHECK(std::abs(exp_diag(0, 0) - Complex(-1.0, 0.0)) < 1e-12);
  CHECK(std::abs(exp_diag(1, 1) - Complex(-1.0, 0.0)) < 1e-12);
  CHECK(std::abs(exp_diag(0, 1)) < 1e-12);

  // exp(i pi jx) at j=1/2 equals i * (2 jx), the hand-computable 2x2 case
  const Matrix rot = hermitian_exp(half.jx, Complex(0.0, kPi));
  CHECK(std::abs(rot(0, 0)) < 1e-12);
  CHECK(std::abs(rot(0, 1) - Complex(0.0, 1.0)) < 1e-12);
  CHECK(std::abs(rot(1, 0) - Complex(0.0, 1.0)) < 1e-12);
  CHECK(std::abs(rot(1, 1)) < 1e-12);
}

TEST_CASE("hermitian_exp rejects non-Hermitian input") {
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = 1.0;  // missing conjugate partner
  CHECK_THROWS_AS(hermitian_exp(bad, Complex(0.0, 1.0)), std::invalid_argument);
}

TEST_CASE("hermitian_exp gives unitaries for imaginary scale") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 6);
    Matrix h(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) h(r, c) = Complex(coeff(rng), coeff(rng));
    }
    h = (h + h.adjoint()).eval() / 2.0;
    const Matrix u = hermitian_exp(h, Complex(0.0, coeff(rng) * 3.0));
    CHECK(max_abs(u.adjoint() * u - Matrix::Identity(d, d)) < 1e-10);
  }
}

TEST_CASE("hermitian_exp agrees with a power-series exponential") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 3;
    Matrix h(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) h(r, c) = Complex(coeff(rng), coeff(rng));
    }
    h = (h + h.adjoint()).eval() / 2.0;
    const Complex scale(coeff(rng), coeff(rng));
    CHECK(max_abs(hermitian_exp(h, scale) - oracle::power_series_exp(scale * h)) < 1e-12);
  }
}

TEST_CASE("coherent_state seeds and closed forms") {
  const SpinSystem sys = build_spin_system(18.0);

  // theta = 0 leaves |j,j> untouched, any phi
  for (const double phi : {0.0, 0.9, -2.4}) {
    const PureState psi = coherent_state(sys, 0.0, phi);
    CHECK(std::abs(psi.amplitudes(0) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(psi.amplitudes.tail(sys.dim - 1).norm() < 1e-12);
  }

  // full flip at j=1/2: global phase i on |1/2,-1/2>
  const SpinSystem half = build_spin_system(0.5);
  const PureState flipped = coherent_state(half, kPi, 0.0);
  CHECK(std::abs(flipped.amplitudes(0)) < 1e-12);
  CHECK(std::abs(flipped.amplitudes(1) - Complex(0.0, 1.0)) < 1e-12);

  // the stock regular state is normalized
  const PureState regular = coherent_state(sys, 2.25, 0.63);
  CHECK(std::abs(regular.amplitudes.norm() - 1.0) < 1e-10);
}

TEST_CASE("coherent_state norm across random angles") {
  const SpinSystem sys = build_spin_system(4.5);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> theta_dist(0.0, kPi);
  std::uniform_real_distribution<double> phi_dist(-kPi, kPi);
  for (int trial = 0; trial < 100; ++trial) {
    const PureState psi = coherent_state(sys, theta_dist(rng), phi_dist(rng));
    CHECK(std::abs(psi.amplitudes.norm() - 1.0) < 1e-10);
  }
}

TEST_CASE("coherent_state matches the power-series rotation") {
  for (const double j : {0.5, 1.0, 2.5}) {
    const SpinSystem sys = build_spin_system(j);
    const PureState psi = coherent_state(sys, 1.3, -0.8);
    const oracle::VectorC expected =
        oracle::coherent_rotation(j, 1.3, -0.8).col(0);
    CHECK((psi.amplitudes - expected).norm() < 1e-12);
  }
}

TEST_CASE("coherent_mean on eigenstates and coherent states") {
  const SpinSystem sys = build_spin_system(2.0);

  const BlochPoint north = coherent_mean(sys, basis_state(sys, 0));
  CHECK(north.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(north.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(north.z == doctest::Approx(1.0).epsilon(1e-12));

  const BlochPoint south = coherent_mean(sys, basis_state(sys, sys.dim - 1));
  CHECK(south.z == doctest::Approx(-1.0).epsilon(1e-12));

  // m = 0 eigenstate has no mean direction
  CHECK_THROWS_AS(coherent_mean(sys, basis_state(sys, 2)), std::invalid_argument);

  // coherent state means have length j before normalization
  const SpinSystem big = build_spin_system(18.0);
  const PureState psi = coherent_state(big, 2.25, 0.63);
  const Vector& a = psi.amplitudes;
  const double mx = a.dot(big.jx * a).real();
  const double my = a.dot(big.jy * a).real();
  const double mz = a.dot(big.jz * a).real();
  CHECK(std::sqrt(mx * mx + my * my + mz * mz) == doctest::Approx(18.0).epsilon(1e-8));

  const BlochPoint p = coherent_mean(big, psi);
  CHECK(p.z == doctest::Approx(std::cos(2.25)).epsilon(1e-10));
  CHECK(p.z < 0.0);
}

TEST_CASE("point_to_angles poles and octant placement") {
  const SphereAngles north = point_to_angles({0.0, 0.0, 1.0});
  CHECK(north.theta == doctest::Approx(0.0));
  CHECK(north.phi == doctest::Approx(0.0));

  const SphereAngles south = point_to_angles({0.0, 0.0, -1.0});
  CHECK(south.theta == doctest::Approx(kPi));
  CHECK(south.phi == doctest::Approx(0.0));

  CHECK_THROWS_AS(point_to_angles({0.5, 0.5, 0.5}), std::invalid_argument);

  // the elliptic fixed point parameters land in the x>0, y>0, z<0 octant
  const SpinSystem sys = build_spin_system(18.0);
  const BlochPoint fp = coherent_mean(sys, coherent_state(sys, 2.25, 0.63));
  CHECK(fp.x > 0.0);
  CHECK(fp.y > 0.0);
  CHECK(fp.z < 0.0);
}

TEST_CASE("round trip between sphere points and coherent angles") {
  const SpinSystem sys = build_spin_system(2.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    double x = unit(rng), y = unit(rng), z = unit(rng);
    const double r = std::sqrt(x * x + y * y + z * z);
    if (r < 0.1) continue;
    x /= r;
    y /= r;
    z /= r;
    const SphereAngles angles = point_to_angles({x, y, z});
    CHECK(angles.theta >= 0.0);
    CHECK(angles.theta <= kPi);
    const BlochPoint back = coherent_mean(sys, coherent_state(sys, angles.theta, angles.phi));
    CHECK(std::abs(back.x - x) < 1e-8);
    CHECK(std::abs(back.y - y) < 1e-8);
    CHECK(std::abs(back.z - z) < 1e-8);
  }

  // also at the working size
  const SpinSystem big = build_spin_system(18.0);
  std::uniform_real_distribution<double> theta_dist(0.05, kPi - 0.05);
  std::uniform_real_distribution<double> phi_dist(-kPi, kPi);
  for (int trial = 0; trial < 10; ++trial) {
    const double theta = theta_dist(rng);
    const double phi = phi_dist(rng);
    const BlochPoint p = coherent_mean(big, coherent_state(big, theta, phi));
    const SphereAngles angles = point_to_angles(p);
    const BlochPoint back = coherent_mean(big, coherent_state(big, angles.theta, angles.phi));
    CHECK(std::abs(back.x - p.x) < 1e-8);
    CHECK(std::abs(back.y - p.y) < 1e-8);
    CHECK(std::abs(back.z - p.z) < 1e-8);
  }
}

TEST_CASE("angular_distance") {
  const BlochPoint ex{1.0, 0.0, 0.0};
  const BlochPoint ey{0.0, 1.0, 0.0};
  const BlochPoint minus_ex{-1.0, 0.0, 0.0};
  CHECK(angular_distance(ex, ex) == doctest::Approx(0.0));
  CHECK(angular_distance(ex, minus_ex) == doctest::Approx(kPi));
  CHECK(angular_distance(ex, ey) == doctest::Approx(kPi / 2.0));
}
