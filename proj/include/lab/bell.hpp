#pragma once

#include <vector>

#include "lab/polynomial.hpp"
#include "lab/roots.hpp"

namespace lab {

/// A bounded 1D polynomial map normalized so the distinguished fixed point
/// sits at the origin: f(0) = 0. The multiplier is the linear coefficient.
struct Map1D {
  PolynomialQ f;

  explicit Map1D(PolynomialQ poly);

  Rational multiplier() const { return f.coeff(1); }

  static Map1D linear(const Rational& lambda);
  /// f(a) = lambda * a - a^2 / 2
  static Map1D logistic(const Rational& lambda);
  /// f(a) = lambda * a - a^m / m
  static Map1D m_hermitian(const Rational& lambda, int m);
};

/// The polynomials H_m(y) with d^m e^{y f(a)} / da^m = H_m(y,a) e^{y f(a)},
/// evaluated at a = 0, for m = 1..order. Exact rational coefficients; the
/// coefficient of y^m in H_m is multiplier^m.
class BellTable {
 public:
  BellTable(Map1D map, int order, std::vector<PolynomialQ> polys)
      : map_(std::move(map)), order_(order), polys_(std::move(polys)) {}

  const Map1D& map() const { return map_; }
  int order() const { return order_; }

  const PolynomialQ& at(int m) const { return polys_[static_cast<size_t>(m - 1)]; }

  /// h_{mk}: coefficient of y^k in H_m.
  Rational h(int m, int k) const { return at(m).coeff(k); }

 private:
  Map1D map_;
  int order_;
  std::vector<PolynomialQ> polys_;
};

/// Builds H_1..H_n by the two-variable recurrence
/// H_{m+1}(y,a) = dH_m/da + y f'(a) H_m(y,a), evaluated at a = 0.
/// Throws OrderTooLarge beyond the cap.
BellTable bell_table(const Map1D& map, int n, int cap = 128);

/// Gap polynomial y^m - H_m(y); its degree-m coefficient is 1 - lambda^m.
PolynomialQ gap_polynomial(const BellTable& table, int m);

/// Coefficients b*_0..b*_n of the truncated resolving series, b*_0 = 1 and
/// b*_n = b, chosen so that the combination sum b*_m (y^m - H_m(y)) cancels
/// every coefficient below degree n. The surviving residual is exactly
/// b (1 - lambda^n) y^n.
struct PhiSolution {
  std::vector<Rational> coefficients;
  PolynomialQ residual;
  Rational scale_b;
};

/// Solves the triangular system degree by degree from m = n-1 down to 1 with
/// diagonal pivot (1 - lambda^m). Throws Resonance(m) on a zero pivot.
PhiSolution pf_coefficients(const BellTable& table, const Rational& b);

/// Real zeros of H_n with multiplicity, raw and normalized by s = y / n.
/// The exact multiplicity at the origin comes from the rational coefficients.
struct ZeroSet {
  int order = 0;
  std::vector<double> zeros;          // ascending, distinct
  std::vector<int> multiplicities;    // aligned with `zeros`
  std::vector<double> normalized;     // zeros / order

  /// Distinct nonzero normalized zeros, ascending.
  std::vector<double> normalized_nonzero() const {
    std::vector<double> out;
    for (size_t i = 0; i < zeros.size(); ++i)
      if (zeros[i] != 0.0) out.push_back(normalized[i]);
    return out;
  }
};

ZeroSet zero_spectrum(const BellTable& table, int n, const RootOptions& opts = {});

}  // namespace lab
