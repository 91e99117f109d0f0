#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "lab/dynamics.hpp"
#include "lab/eig.hpp"
#include "lab/multipoly.hpp"
#include "lab/rational.hpp"

namespace lab {

/// Polynomial vector field da/dt = F(a) with exact rational coefficients and
/// a cached floating copy for orbit work.
class VectorFieldSystem {
 public:
  VectorFieldSystem(int dim, std::vector<MultiPolyQ> components, std::string name = "generic");

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  const std::vector<MultiPolyQ>& components() const { return exact_; }
  const std::vector<MultiPolyD>& components_d() const { return floating_; }

  Eigen::VectorXd eval(const Eigen::VectorXd& a) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& a) const;
  MatrixQ jacobian_exact(const std::vector<Rational>& a) const;

  static VectorFieldSystem lorenz(const Rational& sigma, const Rational& rho,
                                  const Rational& beta);
  static VectorFieldSystem rossler(const Rational& sigma, const Rational& beta,
                                   const Rational& rho);

 private:
  int dim_;
  std::vector<MultiPolyQ> exact_;
  std::vector<MultiPolyD> floating_;
  std::string name_;
};

/// The Euler-type map a -> a + delta F(a) realized as explicit polynomial
/// components.
struct DifferentialIteration {
  double delta = 0;
  PolyMapD map;

  Eigen::VectorXd apply(const Eigen::VectorXd& a) const { return map.apply(a); }
};

DifferentialIteration differential_iteration(const VectorFieldSystem& field, double delta);

/// Zeros of F. Lorenz and Rossler presets use closed forms; generic fields run
/// a damped-Newton multi-start over the given box.
std::vector<Eigen::VectorXd> field_fixed_points(const VectorFieldSystem& field);
std::vector<Eigen::VectorXd> field_fixed_points(const VectorFieldSystem& field,
                                                const Eigen::VectorXd& box_lo,
                                                const Eigen::VectorXd& box_hi,
                                                unsigned long long seed = 0);

enum class EigClass { Attracting, Repelling, Neutral };

std::string to_string(EigClass c);

/// Jacobian spectrum at a point plus the positive critical times -1/lambda
/// for real negative eigenvalues.
struct SpectralReport {
  Eigen::VectorXd point;
  Eigen::MatrixXd jacobian;
  Eigen::VectorXcd eigenvalues;
  std::vector<EigClass> classification;
  std::vector<double> fredholm_times;  // ascending
};

SpectralReport jacobian_spectrum(const VectorFieldSystem& field, const Eigen::VectorXd& a);

std::vector<double> fredholm_times(const VectorFieldSystem& field, const Eigen::VectorXd& a);

/// Particular solution of (I + t J) s = (1/a_1, ..., 1/a_d). Throws
/// SingularAtCriticalTime inside the 1e-9 window around each critical time and
/// ZeroCoordinate when the right-hand side is undefined.
Eigen::VectorXd fredholm_particular(const VectorFieldSystem& field, const Eigen::VectorXd& a,
                                    double t);

/// Trapezoid quadrature of F along one period of a uniformly sampled orbit;
/// a near-zero result certifies an asymptotic cycle.
Eigen::VectorXd cycle_residual(const VectorFieldSystem& field, const Trajectory& traj,
                               double time_step, long period_steps);

/// True when every period is an integer multiple of the smallest within 1%.
struct PeriodLatticeVerdict {
  bool commensurate = false;
  double base_period = 0;
};

PeriodLatticeVerdict period_lattice_check(const std::vector<double>& periods);

/// Symmetric matrix (Hessian) of the quadratic part of y . F(a) and its
/// eigen-decomposition. Requires every component quadratic or below.
struct QuadProjection {
  Eigen::MatrixXd Q;
  SymmetricEig eig;
};

QuadProjection quad_projection(const VectorFieldSystem& field, const Eigen::VectorXd& direction);

/// Linear parts of the direction-projected Lorenz iteration in the eigenbasis
/// of the quadratic form, at one of the three fixed points.
enum class LorenzFixedPoint { Origin, AlphaPlus, AlphaMinus };

Eigen::Vector3d lorenz_linear_parts(double sigma, double rho, double beta,
                                    const Eigen::Vector3d& direction, double delta,
                                    LorenzFixedPoint which);

/// Residuals of the two invariant-surface candidates at a point.
std::pair<double, double> lorenz_surfaces(double sigma, double rho, double beta,
                                          const Eigen::Vector3d& point);

/// Eigenbasis of the Lorenz quadratic form ordered (0, -mu, +mu), mu =
/// sqrt(y^2 + z^2) for the direction (x, y, z).
struct LorenzBasis {
  double mu = 0;
  Eigen::Matrix3d Q;
  Eigen::Matrix3d T;        // columns ordered for the eigenvalues (0, -mu, mu)
  Eigen::Vector3d Lambda;   // (0, -mu, mu)
};

LorenzBasis lorenz_basis(const Eigen::Vector3d& direction);

/// Hamiltonian machinery. Potentials and Hamiltonians are polynomials with
/// variables ordered (p_1..p_d, q_1..q_d); a potential uses only its own d
/// variables.
VectorFieldSystem hamiltonian_field(const MultiPolyQ& potential, const Rational& mass);

/// Block matrix [[-H_qp, H_pp], [-H_qq, H_pq]] of second derivatives at a
/// point; times J = [[0, I], [-I, 0]] it is symmetric.
Eigen::MatrixXd hamiltonian_matrix(const MultiPolyQ& H, const Eigen::VectorXd& point);

/// Modes of the potential Hessian at a critical point, ascending; the softest
/// directions carry the asymptotic linear behavior.
struct PotentialModes {
  SymmetricEig eig;
  std::vector<int> softest;  // indices attaining the smallest eigenvalue
};

PotentialModes potential_modes(const MultiPolyQ& potential, const Eigen::VectorXd& q);

/// Exact characteristic polynomial det(lambda I - M) by Faddeev-LeVerrier.
PolynomialQ charpoly_exact(const MatrixQ& M);
PolynomialD charpoly_numeric(const Eigen::MatrixXd& M);

/// Fixed-step RK4 reference integrator (oracle for the Euler iteration).
Trajectory rk4_trajectory(const VectorFieldSystem& field, const Eigen::VectorXd& x0, double h,
                          long steps);

}  // namespace lab
