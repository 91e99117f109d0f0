#include "lab/saddle.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "lab/eig.hpp"
#include "lab/errors.hpp"
#include "lab/parallel.hpp"

namespace lab {
namespace {

constexpr double kPi = 3.14159265358979323846;

Complex gamma_value(const PolynomialD& f, Complex s, Complex alpha) {
  return s * evaluate(f, alpha) - std::log(alpha);
}

CriticalPoint make_point(const PolynomialD& f, Complex s, Complex alpha, double reality_tol) {
  Complex g = gamma_value(f, s, alpha);
  CriticalPoint cp;
  cp.location = alpha;
  cp.gamma_re = g.real();
  cp.gamma_im = g.imag();
  cp.is_complex = std::abs(alpha.imag()) > reality_tol * (1.0 + std::abs(alpha));
  return cp;
}

bool has_complex_saddle(const PolynomialD& f, double s) {
  for (const auto& cp : critical_points(f, Complex(s, 0)))
    if (cp.is_complex) return true;
  return false;
}

double bisect_transition(const PolynomialD& f, double inside, double outside) {
  // Invariant: `inside` has a complex saddle, `outside` does not.
  while (std::abs(outside - inside) > 1e-10) {
    double mid = 0.5 * (inside + outside);
    if (has_complex_saddle(f, mid))
      inside = mid;
    else
      outside = mid;
  }
  return 0.5 * (inside + outside);
}

double frac_unit(double x) { return x - std::floor(x); }

}  // namespace

std::vector<CriticalPoint> critical_points(const PolynomialD& f, Complex s,
                                           const RootOptions& opts) {
  if (s == Complex(0, 0)) throw Error("InvalidArgument", "s must be nonzero");
  // s a f'(a) - 1 = 0 as a complex-coefficient polynomial in a.
  PolynomialD fp = derivative(f);
  PolynomialC::CoeffVector c(fp.degree() + 2);
  c[0] = Complex(-1.0, 0.0);
  for (int k = 0; k <= fp.degree(); ++k) c[k + 1] = s * fp.coeff(k);
  RootSet rs = find_roots(PolynomialC(std::move(c)), opts);
  std::vector<CriticalPoint> out;
  out.reserve(static_cast<size_t>(rs.roots.size()));
  for (Eigen::Index i = 0; i < rs.roots.size(); ++i)
    out.push_back(make_point(f, s, rs.roots[i], opts.reality_tol));
  return out;
}

std::vector<CriticalPoint> critical_points(const Map1D& map, Complex s, const RootOptions& opts) {
  return critical_points(map.f.cast<double>(), s, opts);
}

CriticalPoint dominant_saddle(const std::vector<CriticalPoint>& points) {
  const CriticalPoint* best = nullptr;
  for (const auto& p : points) {
    if (!p.is_complex) continue;
    if (!best) {
      best = &p;
      continue;
    }
    double tol = 1e-12 * (1.0 + std::abs(best->gamma_re));
    if (p.gamma_re > best->gamma_re + tol) {
      best = &p;
    } else if (std::abs(p.gamma_re - best->gamma_re) <= tol) {
      double da = std::abs(p.location), db = std::abs(best->location);
      if (da < db - 1e-12 * (1.0 + db)) {
        best = &p;
      } else if (std::abs(da - db) <= 1e-12 * (1.0 + db) &&
                 p.location.imag() > best->location.imag()) {
        best = &p;
      }
    }
  }
  if (!best) throw NoComplexSaddle("all critical points are real");
  return *best;
}

DensityCurve zero_density(const PolynomialD& f, const std::vector<double>& s_grid, int threads) {
  DensityCurve curve;
  curve.kind = DensityKind::ZeroDensity;
  const long n = static_cast<long>(s_grid.size());
  curve.samples.resize(static_cast<size_t>(n));
  std::vector<char> complex_flag(static_cast<size_t>(n), 0);

  parallel_for(n, threads, [&](long i) {
    double s = s_grid[static_cast<size_t>(i)];
    double q = 0;
    try {
      CriticalPoint dom = dominant_saddle(critical_points(f, Complex(s, 0)));
      Complex alpha = dom.location.imag() >= 0 ? dom.location : std::conj(dom.location);
      q = std::abs(std::imag(evaluate(f, alpha))) / kPi;
      complex_flag[static_cast<size_t>(i)] = 1;
    } catch (const NoComplexSaddle&) {
      q = 0;
    }
    curve.samples[static_cast<size_t>(i)] = {s, q};
  });

  // Support endpoints: bisect every regime change the grid brackets.
  curve.support_lo = s_grid.empty() ? 0 : s_grid.front();
  curve.support_hi = s_grid.empty() ? 0 : s_grid.back();
  bool any_complex = false;
  for (long i = 0; i < n; ++i) any_complex |= complex_flag[static_cast<size_t>(i)] != 0;
  if (any_complex) {
    long first = 0, last = n - 1;
    while (!complex_flag[static_cast<size_t>(first)]) ++first;
    while (!complex_flag[static_cast<size_t>(last)]) --last;
    curve.support_lo = s_grid[static_cast<size_t>(first)];
    curve.support_hi = s_grid[static_cast<size_t>(last)];
    if (first > 0)
      curve.support_lo = bisect_transition(f, s_grid[static_cast<size_t>(first)],
                                           s_grid[static_cast<size_t>(first - 1)]);
    if (last < n - 1)
      curve.support_hi = bisect_transition(f, s_grid[static_cast<size_t>(last)],
                                           s_grid[static_cast<size_t>(last + 1)]);
  } else {
    curve.support_lo = curve.support_hi = 0;
  }

  double integral = 0;
  for (size_t i = 1; i < curve.samples.size(); ++i)
    integral += 0.5 * (curve.samples[i].second + curve.samples[i - 1].second) *
                (curve.samples[i].first - curve.samples[i - 1].first);
  curve.normalization = integral;
  return curve;
}

DensityCurve zero_density(const Map1D& map, const std::vector<double>& s_grid, int threads) {
  return zero_density(map.f.cast<double>(), s_grid, threads);
}

DensityCurve invariant_density(const DensityCurve& q) {
  if (q.kind != DensityKind::ZeroDensity)
    throw Error("InvalidArgument", "invariant_density expects a zero-density curve");
  if (q.samples.size() < 5) throw TooFewSamples("need at least 5 samples to differentiate");

  const size_t n = q.samples.size();
  DensityCurve p;
  p.kind = DensityKind::InvariantDensity;
  p.support_lo = q.support_lo;
  p.support_hi = q.support_hi;
  const double lo = q.support_lo + 0.05 * (q.support_hi - q.support_lo);
  const double hi = q.support_lo + 0.95 * (q.support_hi - q.support_lo);

  auto deriv = [&](size_t i) {
    if (i == 0)
      return (q.samples[1].second - q.samples[0].second) /
             (q.samples[1].first - q.samples[0].first);
    if (i == n - 1)
      return (q.samples[n - 1].second - q.samples[n - 2].second) /
             (q.samples[n - 1].first - q.samples[n - 2].first);
    return (q.samples[i + 1].second - q.samples[i - 1].second) /
           (q.samples[i + 1].first - q.samples[i - 1].first);
  };

  for (size_t i = 0; i < n; ++i) {
    double x = q.samples[i].first;
    if (x < lo || x > hi) continue;
    double value = -x * deriv(i);
    if (value < 0) {
      value = 0;
      ++p.clamped;
    }
    p.samples.emplace_back(x, value);
  }
  if (p.samples.size() < 2 && n >= 5)
    throw TooFewSamples("interior quantile band holds fewer than 2 samples");
  double integral = 0;
  for (size_t i = 1; i < p.samples.size(); ++i)
    integral += 0.5 * (p.samples[i].second + p.samples[i - 1].second) *
                (p.samples[i].first - p.samples[i - 1].first);
  p.normalization = integral;
  return p;
}

double ks_uniform(std::vector<double> samples) {
  if (samples.empty()) throw Error("InvalidArgument", "empty sample set");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0;
  for (size_t i = 0; i < samples.size(); ++i) {
    double di = static_cast<double>(i);
    d = std::max(d, std::max((di + 1) / n - samples[i], samples[i] - di / n));
  }
  return d;
}

PhaseSpectrum phase_spectrum(const BellTable& table, int n) {
  ZeroSet zs = zero_spectrum(table, n);
  std::vector<double> ss = zs.normalized_nonzero();
  if (ss.empty()) throw Error("EmptySpectrum", "no nonzero real zeros at this order");
  PolynomialD f = table.map().f.cast<double>();
  PhaseSpectrum out;
  for (double s : ss) {
    CriticalPoint dom = dominant_saddle(critical_points(f, Complex(s, 0)));
    out.phases.push_back(frac_unit(dom.gamma_im / kPi));
  }
  out.uniformity_stat = ks_uniform(out.phases);
  return out;
}

int basin_sign(const PolynomialD& f_a, Complex alpha, const PolynomialD& f_b, Complex beta,
               Complex s, Complex u) {
  Complex translated_a = evaluate(f_a, alpha + u) - alpha;
  Complex translated_b = evaluate(f_b, beta + u) - beta;
  Complex value = s * (translated_a - translated_b);
  double tol = 1e-12 * (1.0 + std::abs(value));
  if (std::abs(value.real()) <= tol) return 0;
  return value.real() > 0 ? 1 : -1;
}

QuadraticSplit quadratic_split(const Eigen::VectorXd& lambda_vec, const Eigen::MatrixXd& Q,
                               const Eigen::VectorXd& s) {
  const Eigen::Index d = Q.rows();
  Eigen::MatrixXd M =
      0.5 * (s.asDiagonal() * Q + Q * s.asDiagonal());  // symmetric s-weighted form
  double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if (std::abs(M.determinant()) <= 1e-10 * std::pow(scale, static_cast<double>(d)))
    throw DegenerateForm("s-weighted quadratic form is singular");
  SymmetricEig eig = sym_eig(M);

  QuadraticSplit out;
  out.basis = eig.basis;
  out.diag = eig.eigenvalues;
  Eigen::VectorXd weighted = s.cwiseProduct(lambda_vec);
  out.lambda_eff = eig.basis.transpose() * weighted;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (eig.eigenvalues[i] < 0) {
      out.negative_axes.push_back(static_cast<int>(i));
      AxisProblem problem;
      problem.axis = static_cast<int>(i);
      problem.lambda_eff = out.lambda_eff[i];
      problem.d_coeff = eig.eigenvalues[i];
      problem.negative_axis = true;
      out.problems.push_back(problem);
    } else {
      out.positive_axes.push_back(static_cast<int>(i));
    }
  }
  return out;
}

namespace {

MultiplierReport report_from_jacobian(Eigen::MatrixXcd J) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(J, /*computeEigenvectors=*/true);
  MultiplierReport out;
  out.jacobian = std::move(J);
  out.multipliers = solver.eigenvalues();
  out.moduli.resize(out.multipliers.size());
  out.phases.resize(out.multipliers.size());
  for (Eigen::Index i = 0; i < out.multipliers.size(); ++i) {
    out.moduli[i] = std::abs(out.multipliers[i]);
    out.phases[i] = std::arg(out.multipliers[i]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(solver.eigenvectors());
  double smin = svd.singularValues().minCoeff();
  double smax = svd.singularValues().maxCoeff();
  out.diagonalizable_warning = smin <= 0 || smax / smin > 1e12;
  return out;
}

}  // namespace

MultiplierReport similarity_multipliers(const PolynomialD& f, Complex alpha) {
  Complex image = evaluate(f, alpha);
  Eigen::MatrixXcd J(1, 1);
  J(0, 0) = evaluate(derivative(f), image);
  return report_from_jacobian(std::move(J));
}

MultiplierReport similarity_multipliers(const PolyMapD& f, const Eigen::VectorXcd& alpha) {
  Eigen::VectorXcd image = f.apply(alpha);
  return report_from_jacobian(f.jacobian(image));
}

TrinomialReport trinomial_analysis(Complex alpha, int m, const std::vector<double>& theta_grid) {
  if (m < 2) throw Error("InvalidArgument", "trinomial degree must be at least 2");
  if (std::abs(alpha - Complex(1, 0)) < 1e-12)
    throw DegenerateParameter("alpha = 1 collapses the outer fixed points onto the origin");

  TrinomialReport out;
  out.alpha = alpha;
  out.m = m;
  out.fixed_points.push_back(Complex(0, 0));
  Complex principal = std::pow((Complex(1, 0) - alpha) * static_cast<double>(m),
                               1.0 / static_cast<double>(m - 1));
  for (int k = 0; k < m - 1; ++k) {
    double rot = 2.0 * kPi * k / (m - 1);
    out.fixed_points.push_back(principal * std::polar(1.0, rot));
  }
  out.multiplier_origin = alpha;
  out.multiplier_outer = alpha + static_cast<double>(m) * (Complex(1, 0) - alpha);

  const double r = std::abs(alpha);
  const double sigma = std::arg(alpha);
  for (double theta : theta_grid) {
    double omega = theta + sigma;
    double sin_m = std::sin(m * theta);
    if (sin_m == 0) continue;
    double rho_pow = -r * std::sin(omega) / sin_m;  // rho^{m-1}
    if (rho_pow <= 0) continue;
    double rho = std::pow(rho_pow, 1.0 / (m - 1));
    double denom = std::sin(m * theta - omega);  // = sin((m-1) theta - sigma)
    if (denom == 0) continue;
    double s = sin_m / (r * denom);
    // ds/dtheta from s = sin(m t) / (r sin((m-1) t - sigma)).
    double ds = (m * std::cos(m * theta) * denom -
                 (m - 1) * sin_m * std::cos((m - 1) * theta - sigma)) /
                (r * denom * denom);
    double dchi = (m - 1.0) / m * r * rho * std::sin(omega) * ds / kPi;
    out.polar.push_back({theta, rho, s, dchi});
  }
  return out;
}

CellClass classify_multiplier(double mu_abs, double band) {
  if (mu_abs < 1.0 - band) return CellClass::Bounded;
  if (mu_abs > 1.0 + band) return CellClass::Divergent;
  return CellClass::Boundary;
}

BoundaryRaster escape_boundary(Complex lo, Complex hi, int nx, int ny, int m, double s,
                               int threads) {
  if (nx < 1 || ny < 1) throw Error("InvalidArgument", "raster needs at least one cell");
  if (m < 2) throw Error("InvalidArgument", "trinomial degree must be at least 2");
  BoundaryRaster raster;
  raster.nx = nx;
  raster.ny = ny;
  raster.alpha_re.resize(static_cast<size_t>(nx) * ny);
  raster.alpha_im.resize(static_cast<size_t>(nx) * ny);
  raster.mu_abs.assign(static_cast<size_t>(nx) * ny, 0.0);
  raster.cells.assign(static_cast<size_t>(nx) * ny, CellClass::NoSaddle);

  auto coord = [](double a, double b, int i, int n) {
    return n == 1 ? 0.5 * (a + b) : a + (b - a) * i / (n - 1);
  };

  parallel_for(static_cast<long>(nx) * ny, threads, [&](long idx) {
    int iy = static_cast<int>(idx) / nx;
    int ix = static_cast<int>(idx) % nx;
    Complex alpha(coord(lo.real(), hi.real(), ix, nx), coord(lo.imag(), hi.imag(), iy, ny));
    raster.alpha_re[static_cast<size_t>(idx)] = alpha.real();
    raster.alpha_im[static_cast<size_t>(idx)] = alpha.imag();
    // Critical points of s (alpha z + z^m/m) - ln z: roots of z^m + alpha z - 1/s.
    PolynomialC::CoeffVector c = PolynomialC::CoeffVector::Zero(m + 1);
    c[0] = Complex(-1.0 / s, 0.0);
    c[1] = alpha;
    c[m] = Complex(1.0, 0.0);
    PolynomialC crit(std::move(c));
    PolynomialC fmap({Complex(0, 0), alpha});
    PolynomialC fm = fmap + PolynomialC::monomial(m, Complex(1.0 / m, 0.0));
    try {
      RootSet rs = find_roots(crit);
      std::vector<CriticalPoint> pts;
      for (Eigen::Index i = 0; i < rs.roots.size(); ++i) {
        Complex z = rs.roots[i];
        Complex g = Complex(s, 0) * evaluate(fm, z) - std::log(z);
        CriticalPoint cp;
        cp.location = z;
        cp.gamma_re = g.real();
        cp.gamma_im = g.imag();
        cp.is_complex = !rs.real_flags[static_cast<size_t>(i)];
        pts.push_back(cp);
      }
      CriticalPoint dom = dominant_saddle(pts);
      Complex image = evaluate(fm, dom.location);
      double mu = std::real(std::pow(image, m - 1) + alpha);
      raster.mu_abs[static_cast<size_t>(idx)] = std::abs(mu);
      raster.cells[static_cast<size_t>(idx)] = classify_multiplier(std::abs(mu));
    } catch (const NoComplexSaddle&) {
    } catch (const Error&) {
    }
  });
  return raster;
}

}  // namespace lab
