#include "lab/roots.hpp"

#include <Eigen/Eigenvalues>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <algorithm>
#include <cmath>

#include "lab/errors.hpp"

namespace lab {
namespace {

using Complex = std::complex<double>;

template <typename Real>
std::complex<Real> horner(const std::vector<std::complex<Real>>& c, std::complex<Real> x) {
  std::complex<Real> acc = c.back();
  for (auto it = c.rbegin() + 1; it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

template <typename Real>
void newton_polish(const std::vector<std::complex<Real>>& c,
                   const std::vector<std::complex<Real>>& dc, std::complex<Real>& z) {
  Real best = std::abs(horner(c, z));
  std::complex<Real> best_z = z;
  for (int it = 0; it < 12; ++it) {
    std::complex<Real> f = horner(c, z);
    std::complex<Real> df = horner(dc, z);
    if (std::abs(df) == Real(0)) break;
    z -= f / df;
    Real r = std::abs(horner(c, z));
    if (r < best) {
      best = r;
      best_z = z;
    } else if (it > 2) {
      break;
    }
  }
  z = best_z;
}

// Iterative 2-norm balancing of the companion matrix (powers of two, no
// rounding), after Parlett-Reinsch.
void balance(Eigen::MatrixXcd& M) {
  const Eigen::Index n = M.rows();
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0, c = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(M(j, i));
        r += std::abs(M(i, j));
      }
      if (c == 0 || r == 0) continue;
      double f = 1.0;
      double s = c + r;
      while (c < r / 2.0) {
        f *= 2.0;
        c *= 2.0;
        r /= 2.0;
      }
      while (c > r * 2.0) {
        f /= 2.0;
        c /= 2.0;
        r *= 2.0;
      }
      if ((c + r) < 0.95 * s) {
        converged = false;
        M.col(i) *= f;
        M.row(i) /= f;
      }
    }
  }
}

std::vector<Complex> companion_eigenvalues(const std::vector<Complex>& monic) {
  const int d = static_cast<int>(monic.size()) - 1;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) M(i, d - 1) = -monic[i];
  for (int i = 1; i < d; ++i) M(i, i - 1) = 1.0;
  balance(M);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(M, /*computeEigenvectors=*/false);
  std::vector<Complex> out(d);
  for (int i = 0; i < d; ++i) out[i] = solver.eigenvalues()[i];
  return out;
}

// Stable closed forms for degree <= 2; companion otherwise.
std::vector<Complex> raw_roots(const std::vector<Complex>& c) {
  const int d = static_cast<int>(c.size()) - 1;
  if (d == 1) return {-c[0] / c[1]};
  if (d == 2) {
    Complex a = c[2], b = c[1], cc = c[0];
    Complex disc = std::sqrt(b * b - 4.0 * a * cc);
    if (std::real(std::conj(b) * disc) > 0) disc = -disc;
    Complex q = -0.5 * (b + disc);
    Complex r1 = q / a;
    Complex r2 = (q != 0.0) ? cc / q : -b / a - r1;
    return {r1, r2};
  }
  std::vector<Complex> monic(c.size() - 1);
  for (int i = 0; i < d; ++i) monic[i] = c[i] / c[d];
  monic.push_back(1.0);
  return companion_eigenvalues(monic);
}

struct Prepared {
  std::vector<Complex> coeffs;   // scaled, leading coefficient nonzero
  int zero_multiplicity = 0;     // stripped roots at the origin
  double coeff_scale = 1.0;      // max |original coeff|, residual denominator
};

Prepared prepare(const Polynomial<Complex>& p) {
  const auto& c = p.coeffs();
  if (p.is_zero()) throw ZeroPolynomial("cannot extract roots of the zero polynomial");
  if (p.degree() < 1) throw Error("DegreeTooSmall", "root extraction needs degree >= 1");
  Prepared out;
  double scale = 0;
  for (Eigen::Index i = 0; i < c.size(); ++i) scale = std::max(scale, std::abs(c[i]));
  out.coeff_scale = scale;
  int low = 0;
  while (low < p.degree() && c[low] == Complex(0)) ++low;
  out.zero_multiplicity = low;
  out.coeffs.assign(c.data() + low, c.data() + c.size());
  for (auto& v : out.coeffs) v /= scale;
  return out;
}

RootSet assemble(const Prepared& prep, std::vector<Complex> roots, const RootOptions& opts) {
  for (int i = 0; i < prep.zero_multiplicity; ++i) roots.push_back(Complex(0, 0));
  std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  // Greedy cluster merge; each cluster is replaced by its centroid.
  const size_t n = roots.size();
  std::vector<int> cluster(n, -1);
  std::vector<Complex> reps;
  std::vector<int> sizes;
  for (size_t i = 0; i < n; ++i) {
    if (cluster[i] >= 0) continue;
    Complex sum = roots[i];
    std::vector<size_t> members = {i};
    for (size_t j = i + 1; j < n; ++j) {
      if (cluster[j] >= 0) continue;
      double rad = opts.cluster_radius * (1.0 + std::abs(roots[i]));
      if (std::abs(roots[j] - roots[i]) <= rad) {
        members.push_back(j);
        sum += roots[j];
      }
    }
    int id = static_cast<int>(reps.size());
    reps.push_back(sum / static_cast<double>(members.size()));
    sizes.push_back(static_cast<int>(members.size()));
    for (size_t m : members) cluster[m] = id;
  }

  RootSet rs;
  rs.roots.resize(static_cast<Eigen::Index>(n));
  rs.residuals.resize(static_cast<Eigen::Index>(n));
  rs.real_flags.resize(n);
  rs.multiplicities.resize(n);
  std::vector<Complex> full(prep.coeffs);
  full.insert(full.begin(), static_cast<size_t>(prep.zero_multiplicity), Complex(0));
  for (size_t i = 0; i < n; ++i) {
    Complex z = reps[static_cast<size_t>(cluster[i])];
    bool real = std::abs(z.imag()) <= opts.reality_tol * (1.0 + std::abs(z));
    if (real) z = Complex(z.real(), 0.0);
    rs.roots[static_cast<Eigen::Index>(i)] = z;
    rs.real_flags[i] = real;
    rs.multiplicities[i] = sizes[static_cast<size_t>(cluster[i])];
    // Backward-error residual: |p(z)| over the evaluation scale sum |c_k||z|^k.
    // `full` already carries coefficients divided by max|coeff|, so the scale
    // is at most 1 near the origin and grows with |z| exactly as the
    // attainable accuracy does.
    double eval_scale = 0, zp = 1, az = std::abs(z);
    for (const Complex& ck : full) {
      eval_scale += std::abs(ck) * zp;
      zp *= az;
    }
    rs.residuals[static_cast<Eigen::Index>(i)] =
        std::abs(horner(full, z)) / std::max(1.0, eval_scale);
  }
  return rs;
}

template <typename Real>
void polish_all(const std::vector<Complex>& coeffs, std::vector<Complex>& roots) {
  std::vector<std::complex<Real>> c(coeffs.size()), dc;
  for (size_t i = 0; i < coeffs.size(); ++i)
    c[i] = std::complex<Real>(static_cast<Real>(coeffs[i].real()), static_cast<Real>(coeffs[i].imag()));
  dc.resize(c.size() - 1);
  for (size_t k = 1; k < c.size(); ++k) dc[k - 1] = static_cast<Real>(k) * c[k];
  for (auto& r : roots) {
    std::complex<Real> z(static_cast<Real>(r.real()), static_cast<Real>(r.imag()));
    newton_polish(c, dc, z);
    r = Complex(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
}

}  // namespace

RootSet find_roots(const Polynomial<Complex>& p, const RootOptions& opts) {
  Prepared prep = prepare(p);
  RootSet rs;
  if (prep.coeffs.size() > 1) {
    std::vector<Complex> roots = raw_roots(prep.coeffs);
    polish_all<double>(prep.coeffs, roots);
    rs = assemble(prep, std::move(roots), opts);
  } else {
    rs = assemble(prep, {}, opts);
  }
  if ((rs.residuals.size() ? rs.residuals.maxCoeff() : 0.0) > opts.root_tol) {
    // Retry the polish in extended precision before giving up. Exact roots at
    // the origin were stripped before the solve and are filtered back out.
    std::vector<Complex> roots;
    for (Eigen::Index i = 0; i < rs.roots.size(); ++i)
      if (rs.roots[i] != Complex(0, 0) || prep.zero_multiplicity == 0) roots.push_back(rs.roots[i]);
    while (roots.size() > prep.coeffs.size() - 1) roots.pop_back();
    polish_all<long double>(prep.coeffs, roots);
    rs = assemble(prep, std::move(roots), opts);
    if (rs.residuals.maxCoeff() > opts.root_tol)
      throw NonConvergence("root residual above tolerance after extended-precision retry");
  }
  return rs;
}

RootSet find_roots(const Polynomial<double>& p, const RootOptions& opts) {
  return find_roots(p.cast<Complex>(), opts);
}

RootSet find_roots(const Polynomial<Rational>& p, const RootOptions& opts) {
  // Scale by the largest coefficient magnitude while still exact, so that the
  // double conversion cannot overflow for combinatorially large tables.
  const auto& c = p.coeffs();
  Rational scale(0);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    Rational a = c[i] >= 0 ? c[i] : Rational(-c[i]);
    if (a > scale) scale = a;
  }
  if (scale == 0) throw ZeroPolynomial("cannot extract roots of the zero polynomial");
  typename Polynomial<Complex>::CoeffVector v(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) v[i] = Complex(to_double(c[i] / scale), 0.0);
  Polynomial<Complex> pd(std::move(v));
  Prepared prep = prepare(pd);
  if (prep.coeffs.size() <= 1) return assemble(prep, {}, opts);

  std::vector<Complex> roots = raw_roots(prep.coeffs);
  polish_all<double>(prep.coeffs, roots);

  // Exact coefficients admit roots at full float accuracy, but the monomial
  // basis of high-order tables is too ill-conditioned for double Newton
  // (residual imaginary parts ~1e-4 survive at the upper end of the zero
  // cloud). A 50-digit polish settles the reality decision.
  using F50 = boost::multiprecision::cpp_bin_float_50;
  using C50 = boost::multiprecision::cpp_complex_50;
  const int low = prep.zero_multiplicity;
  std::vector<C50> c50(prep.coeffs.size()), dc50(prep.coeffs.size() - 1);
  for (size_t i = 0; i < c50.size(); ++i) {
    Rational exact = c[static_cast<Eigen::Index>(i) + low] / scale;
    c50[i] = C50(F50(numerator(exact).str()) / F50(denominator(exact).str()), F50(0));
  }
  for (size_t k = 1; k < c50.size(); ++k) dc50[k - 1] = F50(static_cast<int>(k)) * c50[k];
  auto horner50 = [&](const std::vector<C50>& cc, C50 z) {
    C50 acc = cc.back();
    for (auto it = cc.rbegin() + 1; it != cc.rend(); ++it) acc = acc * z + *it;
    return acc;
  };
  for (Complex& r : roots) {
    C50 z(F50(r.real()), F50(r.imag()));
    F50 best = abs(horner50(c50, z));
    C50 best_z = z;
    for (int it = 0; it < 10; ++it) {
      C50 f = horner50(c50, z);
      C50 df = horner50(dc50, z);
      if (abs(df) == 0) break;
      z -= f / df;
      F50 now = abs(horner50(c50, z));
      if (now < best) {
        best = now;
        best_z = z;
      } else if (it > 3) {
        break;
      }
    }
    // Flatten a residual imaginary part below the reality tolerance before
    // rounding back to double.
    F50 im = abs(best_z.imag());
    if (im <= F50(opts.reality_tol) * (1 + abs(best_z))) best_z = C50(best_z.real(), F50(0));
    r = Complex(best_z.real().convert_to<double>(), best_z.imag().convert_to<double>());
  }
  RootSet rs = assemble(prep, std::move(roots), opts);
  if (rs.residuals.size() && rs.residuals.maxCoeff() > opts.root_tol)
    throw NonConvergence("root residual above tolerance after extended-precision polish");
  return rs;
}

}  // namespace lab
