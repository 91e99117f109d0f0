#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "lab/errors.hpp"
#include "lab/nbody.hpp"

using namespace lab;

TEST_CASE("cs_from_potential: linear and quadratic kernels") {
  std::vector<Rational> eps = {Rational(1, 1000), Rational(2, 1000), Rational(0)};
  std::vector<Rational> r = {Rational(1), Rational(4), Rational(9)};
  Rational M(1500);

  // g(r) = r: g' = 1, g'' = 0 -> c = 2 M eps
  auto lin = cs_from_potential(eps, M, r, [](Rational) { return Rational(1); },
                               [](Rational) { return Rational(0); });
  CHECK(lin[0] == Rational(2) * M * eps[0]);
  CHECK(lin[1] == Rational(2) * M * eps[1]);
  CHECK(lin[2] == 0);

  // g(r) = r^2/2: g' = r, g'' = 1 -> c = 6 M eps r
  auto quad = cs_from_potential(eps, M, r, [](Rational x) { return x; },
                                [](Rational) { return Rational(1); });
  CHECK(quad[0] == Rational(6) * M * eps[0] * r[0]);
  CHECK(quad[1] == Rational(6) * M * eps[1] * r[1]);

  CHECK_THROWS_AS(cs_from_potential(eps, M, {Rational(0), Rational(1), Rational(1)},
                                    [](Rational) { return Rational(1); },
                                    [](Rational) { return Rational(0); }),
                  ZeroSeparation);

  // Euclidean-distance variant differs (comparison flag only)
  auto eu = cs_from_potential(eps, M, r, [](Rational x) { return x; },
                              [](Rational) { return Rational(1); }, true);
  CHECK(eu[0] == M * eps[0]);
}

TEST_CASE("arrowhead_charpoly: one- and two-planet closed forms") {
  Rational c2(7, 3);
  CharPoly one = arrowhead_charpoly({c2});
  CHECK(one.delta == PolynomialQ({Rational(0), Rational(-2) * c2, Rational(1)}));

  CharPoly two = arrowhead_charpoly({Rational(1), Rational(2)});
  // -l (l^2 - 6l + 6)
  CHECK(two.delta == PolynomialQ({Rational(0), Rational(-6), Rational(6), Rational(-1)}));
  CHECK(two.sigma[0] == Rational(1));
  CHECK(two.sigma[1] == Rational(3));
  CHECK(two.sigma[2] == Rational(2));
}

TEST_CASE("arrowhead_charpoly: equal couplings keep ties") {
  CharPoly tied = arrowhead_charpoly({Rational(2), Rational(2), Rational(2)});
  // Delta(0) = 0 always; the tied value stays a root of Pi_n
  CHECK(tied.delta.coeff(0) == 0);
  CHECK(evaluate(tied.pi_n.cast<double>(), 2.0) == doctest::Approx(0.0));
  ArrowheadSpec spec{{Rational(2), Rational(2), Rational(2)}};
  ArrowheadReport rep = arrowhead_eigs(spec);
  CHECK(rep.interlacing);  // non-strict bounds absorb the ties
}

TEST_CASE("arrowhead_eigs: worked spectra") {
  ArrowheadSpec two{{Rational(1), Rational(2)}};
  ArrowheadReport rep = arrowhead_eigs(two);
  REQUIRE(rep.eig.eigenvalues.size() == 3);
  CHECK(rep.zero_present);
  CHECK(rep.interlacing);
  CHECK(rep.eig.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(rep.eig.eigenvalues[1] == doctest::Approx(3.0 - std::sqrt(3.0)));
  CHECK(rep.eig.eigenvalues[2] == doctest::Approx(3.0 + std::sqrt(3.0)));

  ArrowheadSpec single{{Rational(5, 2)}};
  ArrowheadReport r1 = arrowhead_eigs(single);
  CHECK(r1.eig.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r1.eig.eigenvalues[1] == doctest::Approx(5.0));

  ArrowheadSpec empty{{}};
  ArrowheadReport r0 = arrowhead_eigs(empty);
  REQUIRE(r0.eig.eigenvalues.size() == 1);
  CHECK(r0.eig.eigenvalues[0] == doctest::Approx(0.0));
  CHECK(r0.zero_present);
}

TEST_CASE("arrowhead: formula equals direct determinant on random ensembles") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> cval(0.05, 10.0);
  std::uniform_real_distribution<double> lval(-1.0, 12.0);
  for (int trial = 0; trial < 200; ++trial) {
    int count = 1 + trial % 9;  // matrix size up to 10
    std::vector<Rational> c;
    for (int i = 0; i < count; ++i) {
      double v = cval(rng);
      c.push_back(Rational(static_cast<long long>(v * 1024), 1024));
    }
    CharPoly cp = arrowhead_charpoly(c);
    ArrowheadSpec spec{c};
    Eigen::MatrixXd M = spec.matrix();
    PolynomialD delta_d = cp.delta.cast<double>();
    for (int k = 0; k < 20; ++k) {
      double l = lval(rng);
      double direct =
          (M - l * Eigen::MatrixXd::Identity(M.rows(), M.cols())).fullPivLu().determinant();
      double formula = evaluate(delta_d, l);
      double scale = 0;
      for (int j = 0; j <= delta_d.degree(); ++j)
        scale += std::abs(delta_d.coeff(j)) * std::pow(std::abs(l), j);
      CHECK(std::abs(direct - formula) <= 1e-9 * std::max(1.0, scale));
    }

    // zero eigenvalue is exact in rational arithmetic: M . (1,...,1) = 0
    MatrixQ Mq = spec.matrix_exact();
    for (const auto& row : Mq) {
      Rational row_sum(0);
      for (const auto& v : row) row_sum += v;
      CHECK(row_sum == 0);
    }

    ArrowheadReport rep = arrowhead_eigs(spec);
    CHECK(rep.zero_present);
    CHECK(rep.interlacing);
    CHECK(std::abs(rep.eig.eigenvalues.sum() - M.trace()) <=
          1e-10 * std::max(1.0, M.cwiseAbs().maxCoeff()));
  }
}
