#include "lab/bell.hpp"

#include <algorithm>
#include <cmath>

#include "lab/errors.hpp"

namespace lab {

Map1D::Map1D(PolynomialQ poly) : f(std::move(poly)) {
  if (f.coeff(0) != 0) throw InvalidMap("the reference fixed point must sit at the origin");
  if (f.degree() < 1) throw InvalidMap("map degree must be at least 1");
}

Map1D Map1D::linear(const Rational& lambda) { return Map1D(PolynomialQ({Rational(0), lambda})); }

Map1D Map1D::logistic(const Rational& lambda) {
  return Map1D(PolynomialQ({Rational(0), lambda, Rational(-1, 2)}));
}

Map1D Map1D::m_hermitian(const Rational& lambda, int m) {
  if (m < 2) throw InvalidMap("m-Hermitian maps need m >= 2");
  PolynomialQ p = PolynomialQ::monomial(1, lambda) - PolynomialQ::monomial(m, Rational(1, m));
  return Map1D(std::move(p));
}

BellTable bell_table(const Map1D& map, int n, int cap) {
  if (n < 1) throw Error("InvalidOrder", "table order must be positive");
  if (n > cap) throw OrderTooLarge("requested order " + std::to_string(n) +
                                   " exceeds the cap " + std::to_string(cap));

  const PolynomialQ fp = derivative(map.f);
  const int dp = fp.degree();

  // table[k][j] = coefficient of y^k a^j in H_m(y, a).
  std::vector<std::vector<Rational>> cur(2), next;
  cur[0] = {Rational(0)};
  cur[1].resize(static_cast<size_t>(dp) + 1);
  for (int j = 0; j <= dp; ++j) cur[1][static_cast<size_t>(j)] = fp.coeff(j);

  std::vector<PolynomialQ> polys;
  polys.reserve(static_cast<size_t>(n));
  auto snapshot = [&](const std::vector<std::vector<Rational>>& t) {
    PolynomialQ::CoeffVector v(static_cast<Eigen::Index>(t.size()));
    for (size_t k = 0; k < t.size(); ++k)
      v[static_cast<Eigen::Index>(k)] = t[k].empty() ? Rational(0) : t[k][0];
    polys.emplace_back(std::move(v));
  };
  snapshot(cur);

  for (int m = 1; m < n; ++m) {
    size_t ky = cur.size() - 1;
    size_t ka = 0;
    for (const auto& row : cur) ka = std::max(ka, row.empty() ? 0 : row.size() - 1);
    next.assign(ky + 2, {});
    for (auto& row : next) row.assign(ka + static_cast<size_t>(dp) + 1, Rational(0));
    for (size_t k = 0; k <= ky; ++k) {
      const auto& row = cur[k];
      for (size_t j = 0; j < row.size(); ++j) {
        const Rational& c = row[j];
        if (c == 0) continue;
        if (j >= 1) next[k][j - 1] += Rational(static_cast<int>(j)) * c;
        for (int i = 0; i <= dp; ++i)
          if (fp.coeff(i) != 0) next[k + 1][j + static_cast<size_t>(i)] += fp.coeff(i) * c;
      }
    }
    cur.swap(next);
    snapshot(cur);
  }
  return BellTable(map, n, std::move(polys));
}

PolynomialQ gap_polynomial(const BellTable& table, int m) {
  if (m < 1 || m > table.order()) throw Error("InvalidOrder", "gap index outside table");
  return PolynomialQ::monomial(m, Rational(1)) - table.at(m);
}

PhiSolution pf_coefficients(const BellTable& table, const Rational& b) {
  if (b == 0) throw Error("InvalidScale", "the free constant b must be nonzero");
  const int n = table.order();
  const Rational lambda = table.map().multiplier();

  std::vector<Rational> pivots(static_cast<size_t>(n));
  {
    Rational lp(1);
    for (int m = 1; m < n; ++m) {
      lp *= lambda;
      pivots[static_cast<size_t>(m)] = Rational(1) - lp;
      if (pivots[static_cast<size_t>(m)] == 0) throw Resonance(m);
    }
  }

  // b*_k (1 - lambda^k) = b h_{nk} + sum_{k < j < n} b*_j h_{jk}, solved from
  // k = n-1 downward.
  std::vector<Rational> coeff(static_cast<size_t>(n) + 1);
  coeff[0] = Rational(1);
  coeff[static_cast<size_t>(n)] = b;
  for (int k = n - 1; k >= 1; --k) {
    Rational rhs = b * table.h(n, k);
    for (int j = k + 1; j < n; ++j) rhs += coeff[static_cast<size_t>(j)] * table.h(j, k);
    coeff[static_cast<size_t>(k)] = rhs / pivots[static_cast<size_t>(k)];
  }

  PolynomialQ residual;  // sum_{0 < m <= n} b*_m (y^m - H_m(y))
  for (int m = 1; m <= n; ++m) {
    if (coeff[static_cast<size_t>(m)] == 0) continue;
    residual = residual + coeff[static_cast<size_t>(m)] * gap_polynomial(table, m);
  }
  return PhiSolution{std::move(coeff), std::move(residual), b};
}

ZeroSet zero_spectrum(const BellTable& table, int n, const RootOptions& opts) {
  if (n < 1 || n > table.order()) throw Error("InvalidOrder", "spectrum index outside table");
  const PolynomialQ& H = table.at(n);

  // Multiplicity at the origin is exact: count trailing zero coefficients.
  int low = 0;
  while (low < H.degree() && H.coeff(low) == 0) ++low;

  ZeroSet zs;
  zs.order = n;
  if (low > 0) {
    zs.zeros.push_back(0.0);
    zs.multiplicities.push_back(low);
  }
  if (low < H.degree()) {
    PolynomialQ::CoeffVector reduced(H.degree() - low + 1);
    for (int k = low; k <= H.degree(); ++k) reduced[k - low] = H.coeff(k);
    RootSet rs = find_roots(PolynomialQ(std::move(reduced)), opts);
    std::vector<std::pair<double, int>> reals;
    for (Eigen::Index i = 0; i < rs.roots.size(); ++i) {
      if (!rs.real_flags[static_cast<size_t>(i)]) continue;
      double r = rs.roots[i].real();
      if (!reals.empty() && reals.back().first == r) continue;  // same cluster representative
      reals.emplace_back(r, rs.multiplicities[static_cast<size_t>(i)]);
    }
    std::sort(reals.begin(), reals.end());
    for (auto& [r, mult] : reals) {
      zs.zeros.push_back(r);
      zs.multiplicities.push_back(mult);
    }
  }
  std::vector<size_t> idx(zs.zeros.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return zs.zeros[a] < zs.zeros[b]; });
  ZeroSet sorted;
  sorted.order = n;
  for (size_t i : idx) {
    sorted.zeros.push_back(zs.zeros[i]);
    sorted.multiplicities.push_back(zs.multiplicities[i]);
    sorted.normalized.push_back(zs.zeros[i] / static_cast<double>(n));
  }
  return sorted;
}

}  // namespace lab
