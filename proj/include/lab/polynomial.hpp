#pragma once

#include <Eigen/Core>

#include <complex>
#include <initializer_list>
#include <type_traits>
#include <vector>

#include "lab/rational.hpp"

namespace lab {

/// Dense univariate polynomial with coefficients in ascending degree order.
/// The leading (highest-degree) coefficient is nonzero unless the polynomial
/// is identically zero, in which case a single zero coefficient is stored.
template <typename Scalar>
class Polynomial {
 public:
  using CoeffVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Polynomial() : coeffs_(CoeffVector::Zero(1)) {}

  explicit Polynomial(CoeffVector coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() == 0) coeffs_ = CoeffVector::Zero(1);
    trim();
  }

  Polynomial(std::initializer_list<Scalar> coeffs)
      : Polynomial(CoeffVector(Eigen::Map<const CoeffVector>(coeffs.begin(),
                                                             static_cast<Eigen::Index>(coeffs.size())))) {}

  static Polynomial zero() { return Polynomial(); }

  static Polynomial constant(const Scalar& c) {
    CoeffVector v(1);
    v[0] = c;
    return Polynomial(std::move(v));
  }

  static Polynomial monomial(int degree, const Scalar& c) {
    CoeffVector v = CoeffVector::Zero(degree + 1);
    v[degree] = c;
    return Polynomial(std::move(v));
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == Scalar(0); }

  const CoeffVector& coeffs() const { return coeffs_; }

  /// Coefficient of x^k; zero beyond the stored degree.
  Scalar coeff(int k) const {
    if (k < 0 || k > degree()) return Scalar(0);
    return coeffs_[k];
  }

  void set_coeff(int k, const Scalar& v) {
    if (k > degree()) {
      CoeffVector grown = CoeffVector::Zero(k + 1);
      grown.head(coeffs_.size()) = coeffs_;
      coeffs_ = std::move(grown);
    }
    coeffs_[k] = v;
    trim();
  }

  template <typename To>
  Polynomial<To> cast() const {
    typename Polynomial<To>::CoeffVector v(coeffs_.size());
    for (Eigen::Index i = 0; i < coeffs_.size(); ++i) v[i] = scalar_cast<To>(coeffs_[i]);
    return Polynomial<To>(std::move(v));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    CoeffVector v = CoeffVector::Zero(std::max(a.coeffs_.size(), b.coeffs_.size()));
    v.head(a.coeffs_.size()) += a.coeffs_;
    v.head(b.coeffs_.size()) += b.coeffs_;
    return Polynomial(std::move(v));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    CoeffVector v = CoeffVector::Zero(std::max(a.coeffs_.size(), b.coeffs_.size()));
    v.head(a.coeffs_.size()) += a.coeffs_;
    v.head(b.coeffs_.size()) -= b.coeffs_;
    return Polynomial(std::move(v));
  }

  friend Polynomial operator-(const Polynomial& a) {
    return Polynomial(CoeffVector(-a.coeffs_));
  }

  friend Polynomial operator*(const Scalar& c, const Polynomial& a) {
    return Polynomial(CoeffVector(c * a.coeffs_));
  }

  friend Polynomial operator*(const Polynomial& a, const Scalar& c) { return c * a; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    CoeffVector v = CoeffVector::Zero(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (Eigen::Index i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == Scalar(0)) continue;
      for (Eigen::Index j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(v));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.coeffs_.size() == b.coeffs_.size() && a.coeffs_ == b.coeffs_;
  }

 private:
  void trim() {
    Eigen::Index n = coeffs_.size();
    while (n > 1 && coeffs_[n - 1] == Scalar(0)) --n;
    if (n != coeffs_.size()) coeffs_.conservativeResize(n);
  }

  CoeffVector coeffs_;
};

/// Horner evaluation. The point type may be wider than the coefficient type
/// (e.g. double coefficients at a complex point).
template <typename Scalar, typename Point>
auto evaluate(const Polynomial<Scalar>& p, const Point& x) {
  using Result = decltype(std::declval<Scalar>() * std::declval<Point>() + std::declval<Point>());
  const auto& c = p.coeffs();
  Result acc = static_cast<Result>(c[c.size() - 1]);
  for (Eigen::Index i = c.size() - 2; i >= 0; --i) acc = acc * x + static_cast<Result>(c[i]);
  return acc;
}

/// Formal derivative; drops the degree by exactly one (or collapses to zero).
template <typename Scalar>
Polynomial<Scalar> derivative(const Polynomial<Scalar>& p) {
  if (p.degree() == 0) return Polynomial<Scalar>::zero();
  typename Polynomial<Scalar>::CoeffVector v(p.degree());
  for (int k = 1; k <= p.degree(); ++k) v[k - 1] = Scalar(k) * p.coeff(k);
  return Polynomial<Scalar>(std::move(v));
}

template <typename Scalar>
Polynomial<Scalar> from_roots(const std::vector<Scalar>& roots) {
  Polynomial<Scalar> acc = Polynomial<Scalar>::constant(Scalar(1));
  for (const Scalar& r : roots) {
    Polynomial<Scalar> lin({Scalar(-r), Scalar(1)});
    acc = acc * lin;
  }
  return acc;
}

using PolynomialQ = Polynomial<Rational>;
using PolynomialD = Polynomial<double>;
using PolynomialC = Polynomial<std::complex<double>>;

}  // namespace lab
