#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lab/errors.hpp"
#include "lab/odeflow.hpp"
#include "lab/saddle.hpp"

using namespace lab;

namespace {
constexpr double kPi = 3.14159265358979323846;

VectorFieldSystem decay_1d() {
  MultiPolyQ f(1);
  f.add_term({1}, Rational(-1));
  return VectorFieldSystem(1, {f}, "decay");
}

VectorFieldSystem growth_1d() {
  MultiPolyQ f(1);
  f.add_term({1}, Rational(1));
  return VectorFieldSystem(1, {f}, "growth");
}

VectorFieldSystem harmonic() {
  // F(p, q) = (-q, p)
  MultiPolyQ f0(2), f1(2);
  f0.add_term({0, 1}, Rational(-1));
  f1.add_term({1, 0}, Rational(1));
  return VectorFieldSystem(2, {f0, f1}, "harmonic");
}
}  // namespace

TEST_CASE("differential_iteration: identity, contraction, convection components") {
  VectorFieldSystem zero(1, {MultiPolyQ(1)}, "zero");
  DifferentialIteration id = differential_iteration(zero, 0.5);
  Eigen::VectorXd x(1);
  x[0] = 1.25;
  CHECK(id.apply(x)[0] == doctest::Approx(1.25));

  DifferentialIteration contract = differential_iteration(decay_1d(), 0.1);
  CHECK(contract.apply(x)[0] == doctest::Approx(0.9 * 1.25));

  VectorFieldSystem lor = VectorFieldSystem::lorenz(Rational(10), Rational(28), Rational(8, 3));
  double delta = 0.01;
  DifferentialIteration it = differential_iteration(lor, delta);
  Eigen::VectorXd a(3);
  a << 1.0, 2.0, 3.0;
  Eigen::VectorXd next = it.apply(a);
  CHECK(next[0] == doctest::Approx(1.0 + delta * 10 * (2.0 - 1.0)));
  CHECK(next[1] == doctest::Approx(2.0 + delta * (28 * 1.0 - 2.0 - 1.0 * 3.0)));
  CHECK(next[2] == doctest::Approx(3.0 + delta * (-8.0 / 3 * 3.0 + 1.0 * 2.0)));
}

TEST_CASE("field_fixed_points: convection closed forms") {
  VectorFieldSystem lor = VectorFieldSystem::lorenz(Rational(10), Rational(28), Rational(8, 3));
  auto pts = field_fixed_points(lor);
  REQUIRE(pts.size() == 3);
  double alpha = std::sqrt(72.0);
  CHECK(pts[0].norm() == doctest::Approx(0.0));
  CHECK(pts[1][0] == doctest::Approx(alpha));
  CHECK(pts[1][1] == doctest::Approx(alpha));
  CHECK(pts[1][2] == doctest::Approx(27.0));
  CHECK(pts[2][0] == doctest::Approx(-alpha));
  for (const auto& p : pts) CHECK(lor.eval(p).norm() <= 1e-12);
}

TEST_CASE("field_fixed_points: band system quadratic roots") {
  // tau solves sigma tau^2 - rho tau + beta = 0; points (sigma tau, -tau, tau)
  VectorFieldSystem ros = VectorFieldSystem::rossler(Rational(1, 5), Rational(1, 5), Rational(5));
  auto pts = field_fixed_points(ros);
  REQUIRE(pts.size() == 2);
  double sigma = 0.2, beta = 0.2, rho = 5.0;
  for (const auto& p : pts) {
    double tau = p[2];
    CHECK(beta + tau * (sigma * tau - rho) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p[0] == doctest::Approx(sigma * tau));
    CHECK(p[1] == doctest::Approx(-tau));
    CHECK(ros.eval(p).norm() <= 1e-10);
  }
}

TEST_CASE("field_fixed_points: generic Newton search on a 1D landscape") {
  MultiPolyQ f(1);
  f.add_term({1}, Rational(1));
  f.add_term({2}, Rational(-1));  // a (1 - a)
  VectorFieldSystem field(1, {f}, "logistic-field");
  Eigen::VectorXd lo(1), hi(1);
  lo[0] = -3;
  hi[0] = 3;
  auto pts = field_fixed_points(field, lo, hi, 2);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0][0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(pts[1][0] == doctest::Approx(1.0));
}

TEST_CASE("jacobian_spectrum: convection origin, decay, harmonic") {
  VectorFieldSystem lor = VectorFieldSystem::lorenz(Rational(10), Rational(28), Rational(8, 3));
  SpectralReport rep = jacobian_spectrum(lor, Eigen::Vector3d::Zero());
  std::vector<double> evs;
  for (Eigen::Index i = 0; i < 3; ++i) {
    CHECK(std::abs(rep.eigenvalues[i].imag()) < 1e-10);
    evs.push_back(rep.eigenvalues[i].real());
  }
  std::sort(evs.begin(), evs.end());
  double disc = std::sqrt(1201.0);
  CHECK(evs[0] == doctest::Approx((-11 - disc) / 2));
  CHECK(evs[1] == doctest::Approx(-8.0 / 3));
  CHECK(evs[2] == doctest::Approx((-11 + disc) / 2));

  SpectralReport dec = jacobian_spectrum(decay_1d(), Eigen::VectorXd::Ones(1));
  CHECK(dec.eigenvalues[0].real() == doctest::Approx(-1.0));
  CHECK(dec.classification[0] == EigClass::Attracting);

  SpectralReport harm = jacobian_spectrum(harmonic(), Eigen::Vector2d::Zero());
  for (Eigen::Index i = 0; i < 2; ++i) {
    CHECK(harm.eigenvalues[i].real() == doctest::Approx(0.0));
    CHECK(std::abs(std::abs(harm.eigenvalues[i].imag()) - 1.0) < 1e-12);
    CHECK(harm.classification[static_cast<size_t>(i)] == EigClass::Neutral);
  }
}

TEST_CASE("charpoly: exact factorization at the convection origin") {
  Rational sigma(10), rho(28), beta(8, 3);
  VectorFieldSystem lor = VectorFieldSystem::lorenz(sigma, rho, beta);
  std::vector<Rational> zero(3, Rational(0));
  PolynomialQ chi = charpoly_exact(lor.jacobian_exact(zero));
  // (beta + l) [(sigma + l)(1 + l) - sigma rho]
  PolynomialQ expected = PolynomialQ({beta, Rational(1)}) *
                         (PolynomialQ({sigma, Rational(1)}) * PolynomialQ({Rational(1), Rational(1)}) -
                          PolynomialQ::constant(sigma * rho));
  CHECK(chi == expected);
}

TEST_CASE("charpoly: symmetric-point factorization within 1e-9") {
  double sigma = 10, rho = 28, beta = 8.0 / 3;
  VectorFieldSystem lor = VectorFieldSystem::lorenz(Rational(10), Rational(28), Rational(8, 3));
  auto pts = field_fixed_points(lor);
  double alpha2 = beta * (rho - 1);
  for (size_t i = 1; i < pts.size(); ++i) {
    PolynomialD chi = charpoly_numeric(lor.jacobian(pts[i]));
    // l (beta + l)(1 + sigma + l) + alpha^2 (2 sigma + l); equivalently the
    // classical l^3 + (sigma+beta+1) l^2 + beta (sigma+rho) l + 2 sigma beta (rho-1).
    PolynomialD expected = PolynomialD({0.0, 1.0}) * PolynomialD({beta, 1.0}) *
                               PolynomialD({1.0 + sigma, 1.0}) +
                           alpha2 * PolynomialD({2 * sigma, 1.0});
    for (int k = 0; k <= 3; ++k)
      CHECK(std::abs(chi.coeff(k) - expected.coeff(k)) <=
            1e-9 * std::max(1.0, std::abs(expected.coeff(k))));
    CHECK(expected.coeff(1) == doctest::Approx(beta * (sigma + rho)));
    CHECK(expected.coeff(0) == doctest::Approx(2 * sigma * beta * (rho - 1)));
  }
}

TEST_CASE("fredholm_times: decay, growth, convection origin") {
  auto t1 = fredholm_times(decay_1d(), Eigen::VectorXd::Ones(1));
  REQUIRE(t1.size() == 1);
  CHECK(t1[0] == doctest::Approx(1.0));

  CHECK(fredholm_times(growth_1d(), Eigen::VectorXd::Ones(1)).empty());

  VectorFieldSystem lor = VectorFieldSystem::lorenz(Rational(10), Rational(28), Rational(8, 3));
  auto tl = fredholm_times(lor, Eigen::Vector3d::Zero());
  REQUIRE(tl.size() == 2);
  CHECK(tl[0] == doctest::Approx(2.0 / (11 + std::sqrt(1201.0))));
  CHECK(tl[1] == doctest::Approx(3.0 / 8));
}

TEST_CASE("fredholm_particular: scalar arithmetic, identity limit, singular window") {
  Eigen::VectorXd a(1);
  a[0] = 2.0;
  Eigen::VectorXd s = fredholm_particular(decay_1d(), a, 0.5);
  CHECK(s[0] == doctest::Approx(1.0));

  Eigen::VectorXd a3(3);
  a3 << 2.0, 4.0, 5.0;
  VectorFieldSystem lor = VectorFieldSystem::lorenz(Rational(10), Rational(28), Rational(8, 3));
  Eigen::VectorXd s0 = fredholm_particular(lor, a3, 0.0);
  CHECK(s0[0] == doctest::Approx(0.5));
  CHECK(s0[1] == doctest::Approx(0.25));
  CHECK(s0[2] == doctest::Approx(0.2));

  CHECK_THROWS_AS(fredholm_particular(decay_1d(), a, 1.0), SingularAtCriticalTime);
  Eigen::VectorXd azero(1);
  azero[0] = 0.0;
  CHECK_THROWS_AS(fredholm_particular(decay_1d(), azero, 0.5), ZeroCoordinate);
}

TEST_CASE("fredholm_particular: residual bound on random linear fields") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_real_distribution<double> tpick(0.01, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    int d = 1 + trial % 6;
    std::vector<MultiPolyQ> comps;
    Eigen::MatrixXd A(d, d);
    for (int i = 0; i < d; ++i) {
      MultiPolyQ row(d);
      for (int j = 0; j < d; ++j) {
        int v = num(rng);
        A(i, j) = v;
        if (v != 0) {
          std::vector<int> e(static_cast<size_t>(d), 0);
          e[static_cast<size_t>(j)] = 1;
          row.add_term(e, Rational(v));
        }
      }
      comps.push_back(row);
    }
    VectorFieldSystem field(d, std::move(comps), "linear");
    Eigen::VectorXd a = Eigen::VectorXd::LinSpaced(d, 1.0, 2.0);
    double t = tpick(rng);
    bool near_critical = false;
    for (double tc : fredholm_times(field, a)) near_critical |= std::abs(t - tc) <= 1e-6;
    if (near_critical) continue;
    Eigen::VectorXd s = fredholm_particular(field, a, t);
    Eigen::VectorXd resid = (Eigen::MatrixXd::Identity(d, d) + t * A) * s - a.cwiseInverse();
    CHECK(resid.norm() <= 1e-10 * std::max(1.0, s.norm()));
  }
}

TEST_CASE("cycle_residual: circle quadrature, fixed point, half period") {
  VectorFieldSystem field = harmonic();
  const double h = 2 * kPi / 400.0;
  Trajectory circle;
  circle.points.resize(2, 401);
  for (long i = 0; i <= 400; ++i) {
    circle.points(0, i) = std::cos(h * static_cast<double>(i));
    circle.points(1, i) = std::sin(h * static_cast<double>(i));
  }
  Eigen::VectorXd full = cycle_residual(field, circle, h, 400);
  CHECK(full.norm() <= 1e-3);  // O(h^2) on the closed loop

  Trajectory fixed;
  fixed.points.resize(2, 10);
  fixed.points.setZero();
  Eigen::VectorXd none = cycle_residual(field, fixed, 0.3, 5);
  CHECK(none.norm() == doctest::Approx(0.0));

  Eigen::VectorXd half = cycle_residual(field, circle, h, 200);
  CHECK(half.norm() == doctest::Approx(2.0).epsilon(1e-3));  // integral of (-sin, cos) over half
}

TEST_CASE("period_lattice_check: multiples and non-multiples") {
  CHECK(period_lattice_check({2 * kPi, 4 * kPi, 6 * kPi}).commensurate);
  CHECK(period_lattice_check({2 * kPi, 4 * kPi, 6 * kPi}).base_period ==
        doctest::Approx(2 * kPi));
  CHECK(!period_lattice_check({2 * kPi, 3 * kPi}).commensurate);
  CHECK(period_lattice_check({1.0, 2.001}).commensurate);
}

TEST_CASE("quad_projection: convection and band forms") {
  VectorFieldSystem lor = VectorFieldSystem::lorenz(Rational(10), Rational(28), Rational(8, 3));
  Eigen::Vector3d dir(0.3, 3.0, 4.0);
  QuadProjection proj = quad_projection(lor, dir);
  CHECK(proj.eig.eigenvalues[0] == doctest::Approx(-5.0));
  CHECK(proj.eig.eigenvalues[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(proj.eig.eigenvalues[2] == doctest::Approx(5.0));

  VectorFieldSystem ros = VectorFieldSystem::rossler(Rational(1, 5), Rational(1, 5), Rational(5));
  QuadProjection rp = quad_projection(ros, Eigen::Vector3d(0.0, 0.0, 1.0));
  CHECK(rp.eig.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(rp.eig.eigenvalues[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rp.eig.eigenvalues[2] == doctest::Approx(1.0));

  QuadProjection zero = quad_projection(lor, Eigen::Vector3d(1.0, 0.0, 0.0));
  CHECK(zero.Q.cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  MultiPolyQ cubic(1);
  cubic.add_term({3}, Rational(1));
  VectorFieldSystem bad(1, {cubic}, "cubic");
  CHECK_THROWS_AS(quad_projection(bad, Eigen::VectorXd::Ones(1)), NotQuadratic);
}

TEST_CASE("lorenz_basis: orthogonality and diagonalization") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Vector3d dir(gauss(rng), gauss(rng), gauss(rng));
    if (std::hypot(dir[1], dir[2]) < 1e-6) continue;
    LorenzBasis basis = lorenz_basis(dir);
    CHECK((basis.T.transpose() * basis.T - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <=
          1e-10);
    Eigen::Matrix3d lam = basis.T.transpose() * basis.Q * basis.T;
    Eigen::Matrix3d expect = basis.Lambda.asDiagonal();
    CHECK((lam - expect).cwiseAbs().maxCoeff() <= 1e-10 * basis.mu);
  }
  CHECK_THROWS_AS(lorenz_basis(Eigen::Vector3d(1, 0, 0)), DegenerateDirection);
}

TEST_CASE("lorenz_linear_parts: printed formulas and corrections") {
  double sigma = 10, rho = 28, beta = 8.0 / 3;
  Eigen::Vector3d dir(0.7, 1.3, -0.4);

  Eigen::Vector3d l0 = lorenz_linear_parts(sigma, rho, beta, dir, 0.0, LorenzFixedPoint::Origin);
  CHECK(l0[0] == doctest::Approx((dir[1] + dir[2]) / std::sqrt(2.0)));

  double delta = 0.003;
  Eigen::Vector3d lo = lorenz_linear_parts(sigma, rho, beta, dir, delta, LorenzFixedPoint::Origin);
  Eigen::Vector3d lp =
      lorenz_linear_parts(sigma, rho, beta, dir, delta, LorenzFixedPoint::AlphaPlus);
  double alpha = std::sqrt(beta * (rho - 1));
  CHECK(lp[0] - lo[0] ==
        doctest::Approx(delta * alpha * (dir[2] - dir[1]) / std::sqrt(2.0)));

  Eigen::Vector3d even(0.7, 0.9, 0.9);  // y = z kills the first-part correction
  Eigen::Vector3d a = lorenz_linear_parts(sigma, rho, beta, even, delta, LorenzFixedPoint::Origin);
  Eigen::Vector3d b =
      lorenz_linear_parts(sigma, rho, beta, even, delta, LorenzFixedPoint::AlphaPlus);
  CHECK(a[0] == doctest::Approx(b[0]));

  // alpha_minus is the alpha -> -alpha substitution
  Eigen::Vector3d lm =
      lorenz_linear_parts(sigma, rho, beta, dir, delta, LorenzFixedPoint::AlphaMinus);
  CHECK(lm[0] - lo[0] ==
        doctest::Approx(-delta * alpha * (dir[2] - dir[1]) / std::sqrt(2.0)));
}

TEST_CASE("lorenz_surfaces: constructed points") {
  CHECK(lorenz_surfaces(10, 28, 8.0 / 3, {1.0, 10.0, 0.0}).first == doctest::Approx(0.0));
  auto [r1, r2] = lorenz_surfaces(10, 28, 8.0 / 3, {0.0, 0.0, 0.0});
  CHECK(r1 == doctest::Approx(0.0));
  CHECK(r2 == doctest::Approx(0.0));
  CHECK(lorenz_surfaces(10, 28, 8.0 / 3, {1.0, 0.0, 15.0 / 4}).first == doctest::Approx(0.0));
}

TEST_CASE("hamiltonian_field: oscillator and quartic") {
  MultiPolyQ V(1);
  V.add_term({2}, Rational(1, 2));
  VectorFieldSystem field = hamiltonian_field(V, Rational(1));
  Eigen::VectorXd x(2);
  x << 0.3, 0.8;  // (p, q)
  Eigen::VectorXd F = field.eval(x);
  CHECK(F[0] == doctest::Approx(-0.8));
  CHECK(F[1] == doctest::Approx(0.3));

  MultiPolyQ quartic(1);
  quartic.add_term({4}, Rational(1, 4));
  VectorFieldSystem f4 = hamiltonian_field(quartic, Rational(1));
  Eigen::VectorXd F4 = f4.eval(x);
  CHECK(F4[0] == doctest::Approx(-0.8 * 0.8 * 0.8));
  CHECK(F4[1] == doctest::Approx(0.3));
}

TEST_CASE("hamiltonian_field: fixed points are (0, critical point of V)") {
  MultiPolyQ V(2);
  V.add_term({2, 0}, Rational(1, 2));
  V.add_term({0, 2}, Rational(2));
  VectorFieldSystem field = hamiltonian_field(V, Rational(1));
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(4, -2.0);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(4, 2.0);
  auto pts = field_fixed_points(field, lo, hi, 5);
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].norm() <= 1e-9);  // p = 0 and grad V = 0 at the origin
}

TEST_CASE("hamiltonian_matrix: canonical blocks and J-symmetry") {
  MultiPolyQ H(2);  // variables (p, q)
  H.add_term({2, 0}, Rational(1, 2));
  H.add_term({0, 2}, Rational(1, 2));
  Eigen::VectorXd pt(2);
  pt << 0.4, -1.1;
  Eigen::MatrixXd M = hamiltonian_matrix(H, pt);
  CHECK(M(0, 0) == doctest::Approx(0.0));
  CHECK(M(0, 1) == doctest::Approx(1.0));
  CHECK(M(1, 0) == doctest::Approx(-1.0));
  CHECK(M(1, 1) == doctest::Approx(0.0));

  MultiPolyQ pq(2);
  pq.add_term({1, 1}, Rational(1));
  Eigen::MatrixXd Mpq = hamiltonian_matrix(pq, pt);
  CHECK(Mpq(0, 0) == doctest::Approx(-1.0));
  CHECK(Mpq(0, 1) == doctest::Approx(0.0));
  CHECK(Mpq(1, 0) == doctest::Approx(0.0));
  CHECK(Mpq(1, 1) == doctest::Approx(1.0));

  // random cubic Hamiltonians: the matrix times J is symmetric
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> num(-3, 3);
  for (int trial = 0; trial < 15; ++trial) {
    MultiPolyQ Hc(2);
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; i + j <= 3; ++j) Hc.add_term({i, j}, Rational(num(rng), 2));
    Eigen::VectorXd p(2);
    p << num(rng) * 0.3 + 0.1, num(rng) * 0.2 - 0.05;
    Eigen::MatrixXd Mt = hamiltonian_matrix(Hc, p);
    Eigen::Matrix2d J;
    J << 0, 1, -1, 0;
    Eigen::MatrixXd S = Mt * J;
    CHECK((S - S.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("potential_modes: single mode, diagonal modes, flat mode") {
  MultiPolyQ V(1);
  V.add_term({2}, Rational(1, 2));
  PotentialModes modes = potential_modes(V, Eigen::VectorXd::Zero(1));
  REQUIRE(modes.eig.eigenvalues.size() == 1);
  CHECK(modes.eig.eigenvalues[0] == doctest::Approx(1.0));

  MultiPolyQ V2(2);
  V2.add_term({2, 0}, Rational(1, 2));
  V2.add_term({0, 2}, Rational(2));
  PotentialModes m2 = potential_modes(V2, Eigen::VectorXd::Zero(2));
  CHECK(m2.eig.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(m2.eig.eigenvalues[1] == doctest::Approx(4.0));
  REQUIRE(m2.softest.size() == 1);
  CHECK(std::abs(m2.eig.basis(0, m2.softest[0])) == doctest::Approx(1.0));

  MultiPolyQ V4(1);
  V4.add_term({4}, Rational(1, 4));
  PotentialModes flat = potential_modes(V4, Eigen::VectorXd::Zero(1));
  CHECK(flat.eig.eigenvalues[0] == doctest::Approx(0.0));

  Eigen::VectorXd off(1);
  off[0] = 0.5;
  CHECK_THROWS_AS(potential_modes(V, off), NotCritical);
}

TEST_CASE("similarity multipliers of a differential iteration shift the field spectrum") {
  // For the Euler map a + delta F(a) of a linear field, the multipliers at any
  // point are 1 + delta * (eigenvalues of the field matrix).
  MultiPolyQ f0(2), f1(2);
  f0.add_term({1, 0}, Rational(-3));
  f0.add_term({0, 1}, Rational(1));
  f1.add_term({0, 1}, Rational(-2));
  VectorFieldSystem field(2, {f0, f1}, "linear");
  const double delta = 0.05;
  DifferentialIteration it = differential_iteration(field, delta);
  Eigen::VectorXcd point(2);
  point << std::complex<double>(0.4, 0.1), std::complex<double>(-0.2, 0.3);
  MultiplierReport rep = similarity_multipliers(it.map, point);
  std::vector<double> mods;
  for (Eigen::Index i = 0; i < 2; ++i)
    mods.push_back(((rep.multipliers[i] - 1.0) / delta).real());
  std::sort(mods.begin(), mods.end());
  CHECK(mods[0] == doctest::Approx(-3.0));
  CHECK(mods[1] == doctest::Approx(-2.0));
}

TEST_CASE("euler iteration converges to the exponential flow") {
  VectorFieldSystem field = decay_1d();
  for (long n : {10L, 100L, 1000L}) {
    DifferentialIteration it = differential_iteration(field, 1.0 / static_cast<double>(n));
    Eigen::VectorXd x(1);
    x[0] = 1.0;
    for (long i = 0; i < n; ++i) x = it.apply(x);
    CHECK(std::abs(x[0] - std::exp(-1.0)) <= 2.0 / static_cast<double>(n));
  }
}

TEST_CASE("rk4 oracle: harmonic orbit closes and returns on period") {
  VectorFieldSystem field = harmonic();
  const long period = 6283;                // one revolution in steps
  const double h = 2 * kPi / period;       // ~1e-3
  const long steps = 6 * period;
  Eigen::VectorXd x0(2);
  x0 << 1.0, 0.0;
  Trajectory traj = rk4_trajectory(field, x0, h, steps);
  CHECK((traj.points.col(period) - x0).norm() <= 1e-6);

  ReturnStats stats = detect_cycles(traj, x0, 0.5 * h);
  CHECK(std::abs(static_cast<double>(stats.modal_period) - 2 * kPi / h) <=
        0.01 * 2 * kPi / h);

  Eigen::VectorXd resid = cycle_residual(field, traj, h, stats.modal_period);
  CHECK(resid.norm() <= 1e-3);
}
