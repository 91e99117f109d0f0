#pragma once

#include <Eigen/Core>

#include <functional>
#include <vector>

#include "lab/eig.hpp"
#include "lab/polynomial.hpp"

namespace lab {

/// Arrowhead coupling matrix built from the curvature values c_2..c_n: the
/// head carries c_1 = sum c_l, the first row/column couples with -c_l, and the
/// tail diagonal holds the c_l. Row sums vanish, so 0 is always an eigenvalue.
struct ArrowheadSpec {
  std::vector<Rational> c;

  Eigen::MatrixXd matrix() const;
  MatrixQ matrix_exact() const;
};

/// Curvatures c_l = M eps_l (4 r_l g''(r_l) + 2 g'(r_l)) in the squared-
/// distance convention r = |separation|^2. The Euclidean-distance variant
/// (c_l = M eps_l g''(r_l), flag on) is for comparison only.
std::vector<Rational> cs_from_potential(const std::vector<Rational>& masses, const Rational& M,
                                        const std::vector<Rational>& separations,
                                        const std::function<Rational(Rational)>& g_prime,
                                        const std::function<Rational(Rational)>& g_second,
                                        bool euclidean_distance = false);

/// Characteristic polynomial of the arrowhead matrix computed two ways, which
/// must agree exactly: (a) the derivative identity
/// Delta(l) = (-1)^{n+1} l^{n+2} d[l^{-n} Pi_n(l)]/dl with Pi_n = prod (l - c_l),
/// and (b) the symmetric-function expansion
/// Delta(l) = (-1)^n sum_k (-1)^k (k+1) sigma_k l^{n-k}.
struct CharPoly {
  PolynomialQ pi_n;
  PolynomialQ delta;
  std::vector<Rational> sigma;  // elementary symmetric functions, sigma_0 = 1
};

CharPoly arrowhead_charpoly(const std::vector<Rational>& c);

/// Numeric spectrum with the interlacing verdict: sorted nonzero eigenvalues
/// lie between consecutive sorted c values (ties non-strict) and the largest
/// exceeds max c; zero belongs to the spectrum within 1e-10 * ||M||.
struct ArrowheadReport {
  SymmetricEig eig;
  bool zero_present = false;
  bool interlacing = false;
};

ArrowheadReport arrowhead_eigs(const ArrowheadSpec& spec);

}  // namespace lab
