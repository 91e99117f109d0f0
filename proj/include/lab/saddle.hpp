#pragma once

#include <Eigen/Core>

#include <complex>
#include <vector>

#include "lab/bell.hpp"
#include "lab/multipoly.hpp"
#include "lab/polynomial.hpp"
#include "lab/roots.hpp"

namespace lab {

using Complex = std::complex<double>;

/// A critical point of the exponent gamma(a) = s f(a) - ln a, i.e. a root of
/// s a f'(a) - 1 = 0, together with the exponent values there.
struct CriticalPoint {
  Complex location;
  double gamma_re = 0;
  double gamma_im = 0;
  bool is_complex = false;
};

/// All critical points for the given s. Conjugate pairs are both present when
/// the map and s are real.
std::vector<CriticalPoint> critical_points(const PolynomialD& f, Complex s,
                                           const RootOptions& opts = {});
std::vector<CriticalPoint> critical_points(const Map1D& map, Complex s,
                                           const RootOptions& opts = {});

/// The complex critical point maximizing Re(gamma); ties resolved by smaller
/// |location|, then positive imaginary part. Throws NoComplexSaddle when every
/// point is real (the predicted density vanishes there).
CriticalPoint dominant_saddle(const std::vector<CriticalPoint>& points);

enum class DensityKind { ZeroDensity, InvariantDensity };

/// Sampled density curve. `support` brackets the transition between the
/// complex-saddle and real-saddle regimes when one is crossed by the grid.
struct DensityCurve {
  std::vector<std::pair<double, double>> samples;
  double support_lo = 0;
  double support_hi = 0;
  double normalization = 0;  // trapezoid integral over the samples
  DensityKind kind = DensityKind::ZeroDensity;
  int clamped = 0;  // negative values zeroed by the differentiation step
};

/// Predicted density of normalized zeros: q(s) = Im f(alpha) / pi at the
/// dominant saddle, zero where no complex saddle exists. Support endpoints are
/// refined by bisection on the saddle-regime change to 1e-10.
DensityCurve zero_density(const PolynomialD& f, const std::vector<double>& s_grid,
                          int threads = 1);
DensityCurve zero_density(const Map1D& map, const std::vector<double>& s_grid, int threads = 1);

/// p(x) = -x dq/dx by central differences (one-sided at the ends), reported on
/// the interior 5%-95% band of the support. Negative values are clamped to
/// zero and counted.
DensityCurve invariant_density(const DensityCurve& q);

/// Phases chi_i = frac(Im gamma(alpha(s_i)) / pi) over the nonzero normalized
/// zeros of H_n, with the one-sample Kolmogorov statistic against uniform.
struct PhaseSpectrum {
  std::vector<double> phases;
  double uniformity_stat = 0;
};

PhaseSpectrum phase_spectrum(const BellTable& table, int n);

/// Kolmogorov sup-distance of samples against the uniform law on [0,1].
double ks_uniform(std::vector<double> samples);

/// Sign of Re[s (f_alpha(u) - f_beta(u))] with f_p(u) = f(p + u) - p; zero
/// within 1e-12 relative. This is the basin-domination criterion between two
/// fixed points of the same ambient coordinates.
int basin_sign(const PolynomialD& f_a, Complex alpha, const PolynomialD& f_b, Complex beta,
               Complex s, Complex u);

/// One axis of the diagonalized quadratic exponent: Lambda u + d u^2/2 - ln u.
struct AxisProblem {
  int axis = 0;
  double lambda_eff = 0;  // Lambda component along this eigenvector
  double d_coeff = 0;     // diagonal entry of the transformed form
  bool negative_axis = false;

  PolynomialD map_poly() const { return PolynomialD({0.0, lambda_eff, d_coeff / 2.0}); }
};

/// Orthogonal diagonalization of the s-weighted quadratic form. Negative axes
/// reduce to 1D logistic-type problems; positive axes carry the degenerate
/// "half the time" outcome flag.
struct QuadraticSplit {
  Eigen::MatrixXd basis;      // columns = eigenvectors of sym(diag(s) Q)
  Eigen::VectorXd diag;       // eigenvalues, ascending
  Eigen::VectorXd lambda_eff; // (s o lambda) contracted through the basis
  std::vector<int> positive_axes;
  std::vector<int> negative_axes;
  std::vector<AxisProblem> problems;  // one per negative axis
};

QuadraticSplit quadratic_split(const Eigen::VectorXd& lambda_vec, const Eigen::MatrixXd& Q,
                               const Eigen::VectorXd& s);

/// Jacobian of the map evaluated at the image point f(alpha), with its
/// eigenvalues mu = rho e^{i theta}. |mu| = 1 is the bounded/divergent
/// separation surrogate.
struct MultiplierReport {
  Eigen::MatrixXcd jacobian;
  Eigen::VectorXcd multipliers;
  Eigen::VectorXd moduli;
  Eigen::VectorXd phases;
  bool diagonalizable_warning = false;  // eigenvector condition above 1e12
};

MultiplierReport similarity_multipliers(const PolynomialD& f, Complex alpha);
MultiplierReport similarity_multipliers(const PolyMapD& f, const Eigen::VectorXcd& alpha);

/// Fixed points, multipliers and polar saddle curves of z -> alpha z + z^m/m.
struct TrinomialSample {
  double theta = 0;
  double rho = 0;
  double s = 0;
  double dchi_dtheta = 0;
};

struct TrinomialReport {
  Complex alpha;
  int m = 2;
  std::vector<Complex> fixed_points;  // origin first, then the m-1 outer points
  Complex multiplier_origin;          // alpha
  Complex multiplier_outer;           // alpha + m (1 - alpha)
  std::vector<TrinomialSample> polar;
};

TrinomialReport trinomial_analysis(Complex alpha, int m, const std::vector<double>& theta_grid);

enum class CellClass { Bounded, Divergent, Boundary, NoSaddle };

struct BoundaryRaster {
  int nx = 0, ny = 0;
  std::vector<double> alpha_re, alpha_im;  // cell centers, row-major (im outer)
  std::vector<double> mu_abs;
  std::vector<CellClass> cells;
};

/// Saddle-based classification of the parameter rectangle: mu is evaluated at
/// the dominant saddle of s(alpha z + z^m/m) - ln z and compared with the
/// unit circle within 1e-6. No orbit is iterated here.
BoundaryRaster escape_boundary(Complex lo, Complex hi, int nx, int ny, int m, double s,
                               int threads = 1);

CellClass classify_multiplier(double mu_abs, double band = 1e-6);

}  // namespace lab
