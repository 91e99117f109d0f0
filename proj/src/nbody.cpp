#include "lab/nbody.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lab/errors.hpp"

namespace lab {

Eigen::MatrixXd ArrowheadSpec::matrix() const {
  const int n = static_cast<int>(c.size()) + 1;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  Rational head(0);
  for (const auto& v : c) head += v;
  M(0, 0) = to_double(head);
  for (int l = 1; l < n; ++l) {
    double v = to_double(c[static_cast<size_t>(l - 1)]);
    M(0, l) = M(l, 0) = -v;
    M(l, l) = v;
  }
  return M;
}

MatrixQ ArrowheadSpec::matrix_exact() const {
  const size_t n = c.size() + 1;
  MatrixQ M(n, std::vector<Rational>(n, Rational(0)));
  Rational head(0);
  for (const auto& v : c) head += v;
  M[0][0] = head;
  for (size_t l = 1; l < n; ++l) {
    M[0][l] = M[l][0] = -c[l - 1];
    M[l][l] = c[l - 1];
  }
  return M;
}

std::vector<Rational> cs_from_potential(const std::vector<Rational>& masses, const Rational& M,
                                        const std::vector<Rational>& separations,
                                        const std::function<Rational(Rational)>& g_prime,
                                        const std::function<Rational(Rational)>& g_second,
                                        bool euclidean_distance) {
  if (masses.size() != separations.size())
    throw Error("InvalidArgument", "masses and separations must align");
  std::vector<Rational> out;
  out.reserve(masses.size());
  for (size_t i = 0; i < masses.size(); ++i) {
    const Rational& r = separations[i];
    if (r <= 0) throw ZeroSeparation("separations must be positive");
    if (euclidean_distance) {
      out.push_back(M * masses[i] * g_second(r));
    } else {
      // (d r / d a)^2 = (2 sqrt(r))^2 = 4 r in the squared-distance convention.
      out.push_back(M * masses[i] * (Rational(4) * r * g_second(r) + Rational(2) * g_prime(r)));
    }
  }
  return out;
}

CharPoly arrowhead_charpoly(const std::vector<Rational>& c) {
  if (c.empty()) throw Error("InvalidArgument", "need at least one curvature value");
  const int n = static_cast<int>(c.size()) + 1;  // matrix size

  CharPoly out;
  out.pi_n = from_roots(c);  // prod (lambda - c_l), degree n-1

  // (a) Delta = (-1)^{n+1} l^{n+2} d[l^{-n} Pi]/dl; term k of Pi contributes
  // (k - n) a_k l^{k+1}.
  PolynomialQ::CoeffVector va = PolynomialQ::CoeffVector::Zero(n + 1);
  const int sign_a = (n % 2 == 0) ? -1 : 1;  // (-1)^{n+1}
  for (int k = 0; k <= out.pi_n.degree(); ++k)
    va[k + 1] = Rational(sign_a) * Rational(k - n) * out.pi_n.coeff(k);
  PolynomialQ delta_a(std::move(va));

  // (b) elementary symmetric expansion.
  out.sigma.assign(c.size() + 1, Rational(0));
  out.sigma[0] = Rational(1);
  for (const Rational& value : c)
    for (size_t k = out.sigma.size() - 1; k >= 1; --k)
      out.sigma[k] += out.sigma[k - 1] * value;
  PolynomialQ::CoeffVector vb = PolynomialQ::CoeffVector::Zero(n + 1);
  const int sign_b = (n % 2 == 0) ? 1 : -1;  // (-1)^n
  for (int k = 0; k <= n - 1; ++k) {
    Rational term = Rational(sign_b) * Rational((k % 2 == 0) ? 1 : -1) * Rational(k + 1) *
                    out.sigma[static_cast<size_t>(k)];
    vb[n - k] = term;
  }
  PolynomialQ delta_b(std::move(vb));

  if (!(delta_a == delta_b))
    throw InternalMismatch("derivative identity and symmetric expansion disagree");
  out.delta = delta_a;
  return out;
}

ArrowheadReport arrowhead_eigs(const ArrowheadSpec& spec) {
  ArrowheadReport report;
  Eigen::MatrixXd M = spec.matrix();
  report.eig = sym_eig(M);
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  const double zero_tol = 1e-10 * scale;

  const Eigen::VectorXd& ev = report.eig.eigenvalues;
  Eigen::Index zero_idx = -1;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev[i]) <= zero_tol && zero_idx < 0) zero_idx = i;
  report.zero_present = zero_idx >= 0;

  std::vector<double> cs;
  for (const auto& v : spec.c) cs.push_back(to_double(v));
  std::sort(cs.begin(), cs.end());

  std::vector<double> nonzero;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (i != zero_idx) nonzero.push_back(ev[i]);
  std::sort(nonzero.begin(), nonzero.end());

  report.interlacing = report.zero_present && nonzero.size() == cs.size();
  if (report.interlacing) {
    const double slack = zero_tol;
    for (size_t l = 0; l < nonzero.size(); ++l) {
      double low = cs[l] - slack;
      double high = (l + 1 < cs.size()) ? cs[l + 1] + slack
                                        : std::numeric_limits<double>::infinity();
      if (nonzero[l] < low || nonzero[l] > high) report.interlacing = false;
    }
    if (!nonzero.empty() && nonzero.back() <= cs.back() - slack) report.interlacing = false;
  }
  return report;
}

}  // namespace lab
