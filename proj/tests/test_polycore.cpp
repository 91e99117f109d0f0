#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "lab/eig.hpp"
#include "lab/errors.hpp"
#include "lab/polynomial.hpp"
#include "lab/roots.hpp"

using namespace lab;
using Complex = std::complex<double>;

TEST_CASE("evaluate: root, constant, and bell-polynomial values") {
  PolynomialD p({-1.0, 0.0, 1.0});  // y^2 - 1
  CHECK(evaluate(p, 1.0) == doctest::Approx(0.0));

  PolynomialC one({Complex(1, 0)});
  CHECK(evaluate(one, Complex(5, 2)) == Complex(1, 0));

  // lambda^3 y^3 - 3 lambda y^2 at lambda = 1 vanishes at y = 3
  PolynomialD h3({0.0, 0.0, -3.0, 1.0});
  CHECK(evaluate(h3, 3.0) == doctest::Approx(0.0));
}

TEST_CASE("derivative: degree drop and coefficients") {
  PolynomialD sq({0.0, 0.0, 1.0});
  CHECK(derivative(sq) == PolynomialD({0.0, 2.0}));

  CHECK(derivative(PolynomialD::constant(7.0)).is_zero());

  // (1 - lambda^2) y^2 + y at lambda = 2  ->  -6y + 1
  PolynomialD g({0.0, 1.0, -3.0});
  CHECK(derivative(g) == PolynomialD({1.0, -6.0}));
}

TEST_CASE("find_roots: quadratics with known roots") {
  RootSet rs = find_roots(PolynomialD({-1.0, 0.0, 1.0}));
  REQUIRE(rs.roots.size() == 2);
  CHECK(rs.real_flags[0]);
  CHECK(rs.real_flags[1]);
  std::vector<double> reals = rs.real_roots();
  std::sort(reals.begin(), reals.end());
  CHECK(reals[0] == doctest::Approx(-1.0));
  CHECK(reals[1] == doctest::Approx(1.0));

  // a^2 - a + 1 = 0: the critical equation of the logistic map at lambda = s = 1
  rs = find_roots(PolynomialD({1.0, -1.0, 1.0}));
  REQUIRE(rs.roots.size() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(!rs.real_flags[static_cast<size_t>(i)]);
    CHECK(std::abs(rs.roots[i].real() - 0.5) < 1e-12);
    CHECK(std::abs(std::abs(rs.roots[i].imag()) - std::sqrt(3.0) / 2) < 1e-12);
  }
}

TEST_CASE("find_roots: cubic with an exact zero root") {
  // lambda (lambda^2 - 6 lambda + 6): the 3x3 arrowhead characteristic polynomial
  RootSet rs = find_roots(PolynomialD({0.0, 6.0, -6.0, 1.0}));
  REQUIRE(rs.roots.size() == 3);
  std::vector<double> reals = rs.real_roots();
  std::sort(reals.begin(), reals.end());
  REQUIRE(reals.size() == 3);
  CHECK(reals[0] == doctest::Approx(0.0));
  CHECK(reals[1] == doctest::Approx(3.0 - std::sqrt(3.0)));
  CHECK(reals[2] == doctest::Approx(3.0 + std::sqrt(3.0)));
}

TEST_CASE("find_roots: error cases") {
  CHECK_THROWS_AS(find_roots(PolynomialD::zero()), ZeroPolynomial);
  CHECK_THROWS_AS(find_roots(PolynomialD::constant(3.0)), Error);
}

TEST_CASE("find_roots: residual contract on random rational-coefficient polynomials") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-40, 40);
  std::uniform_int_distribution<int> deg(1, 12);
  for (int trial = 0; trial < 60; ++trial) {
    int d = deg(rng);
    PolynomialQ::CoeffVector c(d + 1);
    for (int k = 0; k <= d; ++k) c[k] = Rational(num(rng), 1 + (trial % 7));
    if (c[d] == 0) c[d] = Rational(1);
    PolynomialQ p(std::move(c));
    RootSet rs = find_roots(p);
    REQUIRE(rs.roots.size() == p.degree());
    CHECK(rs.residuals.maxCoeff() <= 1e-10);

    // Monic reconstruction from the roots, coefficient by coefficient.
    std::vector<Complex> roots(rs.roots.data(), rs.roots.data() + rs.roots.size());
    PolynomialC recon = from_roots(roots);
    PolynomialD monic = p.cast<double>();
    double lead = monic.coeff(monic.degree());
    double scale = 0;
    for (int k = 0; k <= monic.degree(); ++k)
      scale = std::max(scale, std::abs(monic.coeff(k) / lead));
    for (int k = 0; k <= monic.degree(); ++k)
      CHECK(std::abs(recon.coeff(k) - Complex(monic.coeff(k) / lead, 0.0)) <=
            1e-8 * std::max(1.0, scale));
  }
}

TEST_CASE("sym_eig: diagonal, coupled, and single-entry matrices") {
  Eigen::Matrix3d D = Eigen::Vector3d(3, 1, 2).asDiagonal();
  SymmetricEig eig = sym_eig(D);
  CHECK(eig.eigenvalues[0] == doctest::Approx(1));
  CHECK(eig.eigenvalues[1] == doctest::Approx(2));
  CHECK(eig.eigenvalues[2] == doctest::Approx(3));

  // Direction-projected quadratic form of the convection system at y=3, z=4.
  Eigen::Matrix3d Q;
  Q << 0, 4, -3, 4, 0, 0, -3, 0, 0;
  eig = sym_eig(Q);
  CHECK(eig.eigenvalues[0] == doctest::Approx(-5));
  CHECK(eig.eigenvalues[1] == doctest::Approx(0).epsilon(1e-12));
  CHECK(eig.eigenvalues[2] == doctest::Approx(5));

  Eigen::MatrixXd single(1, 1);
  single(0, 0) = -2.5;
  eig = sym_eig(single);
  CHECK(eig.eigenvalues[0] == doctest::Approx(-2.5));
  CHECK(std::abs(eig.basis(0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig: rejects asymmetric input") {
  Eigen::Matrix2d M;
  M << 1, 2, 3, 4;
  CHECK_THROWS_AS(sym_eig(M), NotSymmetric);
}

TEST_CASE("sym_eig: trace, determinant, orthogonality on random symmetric matrices") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    int d = 1 + trial % 6;
    Eigen::MatrixXd A(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) A(i, j) = gauss(rng);
    Eigen::MatrixXd M = 0.5 * (A + A.transpose());
    SymmetricEig eig = sym_eig(M);

    double norm = std::max(1.0, M.cwiseAbs().maxCoeff());
    CHECK((eig.basis.transpose() * eig.basis - Eigen::MatrixXd::Identity(d, d))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
    CHECK((M * eig.basis - eig.basis * eig.eigenvalues.asDiagonal().toDenseMatrix())
              .cwiseAbs()
              .maxCoeff() <= 1e-10 * norm);
    CHECK(std::abs(eig.eigenvalues.sum() - M.trace()) <= 1e-10 * norm);
    double det = M.determinant();
    if (std::abs(det) > 1e-6)
      CHECK(eig.eigenvalues.prod() == doctest::Approx(det).epsilon(1e-8));
  }
}

TEST_CASE("derivative consistency with centered finite differences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_real_distribution<double> pt(-2.0, 2.0);
  const double h = 1e-6;
  for (int trial = 0; trial < 30; ++trial) {
    int d = 1 + trial % 9;
    PolynomialD::CoeffVector c(d + 1);
    for (int k = 0; k <= d; ++k) c[k] = coeff(rng);
    PolynomialD p(std::move(c));
    PolynomialD dp = derivative(p);
    for (int rep = 0; rep < 4; ++rep) {
      double x = pt(rng);
      double fd = (evaluate(p, x + h) - evaluate(p, x - h)) / (2 * h);
      CHECK(std::abs(fd - evaluate(dp, x)) <= 1e-7 * (1.0 + std::abs(evaluate(dp, x))));
    }
  }
}

TEST_CASE("find_roots: multiple roots merge into clusters") {
  // (y - 1)^3 (y + 2)
  std::vector<double> roots = {1.0, 1.0, 1.0, -2.0};
  PolynomialD p = from_roots(roots);
  RootSet rs = find_roots(p, RootOptions{1e-7, 1e-6, 1e-4});
  REQUIRE(rs.roots.size() == 4);
  int triple = 0;
  for (size_t i = 0; i < 4; ++i)
    if (rs.multiplicities[i] == 3) ++triple;
  CHECK(triple == 3);
}
