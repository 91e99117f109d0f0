#pragma once

#include <Eigen/Core>

#include <map>
#include <vector>

#include "lab/rational.hpp"

namespace lab {

/// Sparse polynomial in `vars` variables: exponent tuple -> coefficient.
/// Deliberately minimal; it carries vector fields and their Jacobians, not a
/// general algebra system.
template <typename Scalar>
class MultiPoly {
 public:
  using Exponents = std::vector<int>;

  MultiPoly() : vars_(0) {}
  explicit MultiPoly(int vars) : vars_(vars) {}

  int vars() const { return vars_; }
  bool empty() const { return terms_.empty(); }
  const std::map<Exponents, Scalar>& terms() const { return terms_; }

  void add_term(const Exponents& exps, const Scalar& c) {
    if (c == Scalar(0)) return;
    auto [it, inserted] = terms_.try_emplace(exps, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Scalar(0)) terms_.erase(it);
    }
  }

  static MultiPoly variable(int vars, int index, const Scalar& c = Scalar(1)) {
    MultiPoly p(vars);
    Exponents e(static_cast<size_t>(vars), 0);
    e[static_cast<size_t>(index)] = 1;
    p.add_term(e, c);
    return p;
  }

  static MultiPoly constant(int vars, const Scalar& c) {
    MultiPoly p(vars);
    p.add_term(Exponents(static_cast<size_t>(vars), 0), c);
    return p;
  }

  int total_degree() const {
    int deg = 0;
    for (const auto& [e, c] : terms_) {
      int d = 0;
      for (int k : e) d += k;
      deg = std::max(deg, d);
    }
    return deg;
  }

  MultiPoly derivative(int var) const {
    MultiPoly out(vars_);
    for (const auto& [e, c] : terms_) {
      int k = e[static_cast<size_t>(var)];
      if (k == 0) continue;
      Exponents de = e;
      --de[static_cast<size_t>(var)];
      out.add_term(de, Scalar(k) * c);
    }
    return out;
  }

  template <typename Point>
  Point eval(const Eigen::Matrix<Point, Eigen::Dynamic, 1>& x) const {
    Point acc(0);
    for (const auto& [e, c] : terms_) {
      Point term = scalar_cast<Point>(c);
      for (int v = 0; v < vars_; ++v)
        for (int k = 0; k < e[static_cast<size_t>(v)]; ++k) term *= x[v];
      acc += term;
    }
    return acc;
  }

  template <typename To>
  MultiPoly<To> cast() const {
    MultiPoly<To> out(vars_);
    for (const auto& [e, c] : terms_) out.add_term(e, scalar_cast<To>(c));
    return out;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly out = a;
    for (const auto& [e, c] : b.terms_) out.add_term(e, c);
    return out;
  }

  friend MultiPoly operator*(const Scalar& c, const MultiPoly& a) {
    MultiPoly out(a.vars_);
    for (const auto& [e, v] : a.terms_) out.add_term(e, c * v);
    return out;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

 private:
  int vars_;
  std::map<Exponents, Scalar> terms_;
};

using MultiPolyQ = MultiPoly<Rational>;
using MultiPolyD = MultiPoly<double>;

/// A polynomial map of R^d (or C^d) into itself, one component per output
/// coordinate.
struct PolyMapD {
  int dim = 0;
  std::vector<MultiPolyD> components;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd out(dim);
    for (int i = 0; i < dim; ++i) out[i] = components[static_cast<size_t>(i)].eval(x);
    return out;
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd out(dim);
    for (int i = 0; i < dim; ++i) out[i] = components[static_cast<size_t>(i)].eval(x);
    return out;
  }

  Eigen::MatrixXcd jacobian(const Eigen::VectorXcd& x) const {
    Eigen::MatrixXcd J(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        J(i, j) = components[static_cast<size_t>(i)].derivative(j).eval(x);
    return J;
  }

  /// The map (a, b) -> (delta a - sigma a^2 + b, v a).
  static PolyMapD henon(double delta, double sigma, double v) {
    PolyMapD out;
    out.dim = 2;
    MultiPolyD f0(2);
    f0.add_term({1, 0}, delta);
    f0.add_term({2, 0}, -sigma);
    f0.add_term({0, 1}, 1.0);
    MultiPolyD f1(2);
    f1.add_term({1, 0}, v);
    out.components = {f0, f1};
    return out;
  }
};

}  // namespace lab
