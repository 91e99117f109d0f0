#include "lab/odeflow.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

#include "lab/errors.hpp"

namespace lab {

namespace {

using VectorQ = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

MultiPolyQ term(int vars, std::initializer_list<int> exps, const Rational& c) {
  MultiPolyQ p(vars);
  p.add_term(std::vector<int>(exps), c);
  return p;
}

}  // namespace

VectorFieldSystem::VectorFieldSystem(int dim, std::vector<MultiPolyQ> components, std::string name)
    : dim_(dim), exact_(std::move(components)), name_(std::move(name)) {
  floating_.reserve(exact_.size());
  for (const auto& c : exact_) floating_.push_back(c.cast<double>());
}

Eigen::VectorXd VectorFieldSystem::eval(const Eigen::VectorXd& a) const {
  Eigen::VectorXd out(dim_);
  for (int i = 0; i < dim_; ++i) out[i] = floating_[static_cast<size_t>(i)].eval(a);
  return out;
}

Eigen::MatrixXd VectorFieldSystem::jacobian(const Eigen::VectorXd& a) const {
  Eigen::MatrixXd J(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      J(i, j) = floating_[static_cast<size_t>(i)].derivative(j).eval(a);
  return J;
}

MatrixQ VectorFieldSystem::jacobian_exact(const std::vector<Rational>& a) const {
  VectorQ point(dim_);
  for (int i = 0; i < dim_; ++i) point[i] = a[static_cast<size_t>(i)];
  MatrixQ J(static_cast<size_t>(dim_), std::vector<Rational>(static_cast<size_t>(dim_)));
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      J[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          exact_[static_cast<size_t>(i)].derivative(j).eval(point);
  return J;
}

VectorFieldSystem VectorFieldSystem::lorenz(const Rational& sigma, const Rational& rho,
                                            const Rational& beta) {
  // F = (sigma (b - a), rho a - b - a c, -beta c + a b)
  MultiPolyQ f0 = term(3, {0, 1, 0}, sigma) + term(3, {1, 0, 0}, -sigma);
  MultiPolyQ f1 =
      term(3, {1, 0, 0}, rho) + term(3, {0, 1, 0}, Rational(-1)) + term(3, {1, 0, 1}, Rational(-1));
  MultiPolyQ f2 = term(3, {0, 0, 1}, -beta) + term(3, {1, 1, 0}, Rational(1));
  return VectorFieldSystem(3, {f0, f1, f2}, "lorenz");
}

VectorFieldSystem VectorFieldSystem::rossler(const Rational& sigma, const Rational& beta,
                                             const Rational& rho) {
  // F = (-(b + c), a + sigma b, beta + c (a - rho))
  MultiPolyQ f0 = term(3, {0, 1, 0}, Rational(-1)) + term(3, {0, 0, 1}, Rational(-1));
  MultiPolyQ f1 = term(3, {1, 0, 0}, Rational(1)) + term(3, {0, 1, 0}, sigma);
  MultiPolyQ f2 =
      term(3, {0, 0, 0}, beta) + term(3, {1, 0, 1}, Rational(1)) + term(3, {0, 0, 1}, -rho);
  return VectorFieldSystem(3, {f0, f1, f2}, "rossler");
}

DifferentialIteration differential_iteration(const VectorFieldSystem& field, double delta) {
  if (delta <= 0) throw Error("InvalidArgument", "the path delta must be positive");
  DifferentialIteration it;
  it.delta = delta;
  it.map.dim = field.dim();
  for (int i = 0; i < field.dim(); ++i) {
    MultiPolyD comp = MultiPolyD::variable(field.dim(), i);
    comp = comp + delta * field.components_d()[static_cast<size_t>(i)];
    it.map.components.push_back(std::move(comp));
  }
  return it;
}

std::vector<Eigen::VectorXd> field_fixed_points(const VectorFieldSystem& field) {
  if (field.name() == "lorenz") {
    // Parameters recovered from the exact coefficients.
    const auto& f0 = field.components()[0];
    const auto& f2 = field.components()[2];
    Rational sigma = f0.terms().at({0, 1, 0});
    Rational beta = -f2.terms().at({0, 0, 1});
    Rational rho = field.components()[1].terms().at({1, 0, 0});
    std::vector<Eigen::VectorXd> out;
    out.push_back(Eigen::Vector3d::Zero());
    if (rho > 1) {
      double alpha = std::sqrt(to_double(beta * (rho - 1)));
      double c = to_double(beta * (rho - 1) / beta);
      out.push_back(Eigen::Vector3d(alpha, alpha, c));
      out.push_back(Eigen::Vector3d(-alpha, -alpha, c));
    }
    return out;
  }
  if (field.name() == "rossler") {
    const auto& f1 = field.components()[1];
    const auto& f2 = field.components()[2];
    double sigma = to_double(f1.terms().at({0, 1, 0}));
    double beta = to_double(f2.terms().at({0, 0, 0}));
    double rho = to_double(-f2.terms().at({0, 0, 1}));
    // beta + tau (sigma tau - rho) = 0
    double disc = rho * rho - 4.0 * sigma * beta;
    std::vector<Eigen::VectorXd> out;
    if (disc < 0) return out;
    for (double sgn : {-1.0, 1.0}) {
      double tau = (rho + sgn * std::sqrt(disc)) / (2.0 * sigma);
      out.push_back(Eigen::Vector3d(sigma * tau, -tau, tau));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a[2] < b[2]; });
    return out;
  }
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(field.dim(), -10.0);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(field.dim(), 10.0);
  return field_fixed_points(field, lo, hi);
}

std::vector<Eigen::VectorXd> field_fixed_points(const VectorFieldSystem& field,
                                                const Eigen::VectorXd& box_lo,
                                                const Eigen::VectorXd& box_hi,
                                                unsigned long long seed) {
  const int d = field.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Eigen::VectorXd> found;
  const int starts = 64;
  for (int trial = 0; trial < starts; ++trial) {
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x[i] = box_lo[i] + (box_hi[i] - box_lo[i]) * unit(rng);
    bool ok = false;
    for (int it = 0; it < 80; ++it) {
      Eigen::VectorXd F = field.eval(x);
      if (F.norm() < 1e-13 * (1.0 + x.norm())) {
        ok = true;
        break;
      }
      Eigen::MatrixXd J = field.jacobian(x);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
      if (!lu.isInvertible()) break;
      Eigen::VectorXd step = lu.solve(-F);
      double t = 1.0;
      double base = F.norm();
      while (t > 1e-6 && field.eval(x + t * step).norm() > (1.0 - 0.25 * t) * base) t *= 0.5;
      x += t * step;
      if (!x.allFinite()) break;
    }
    if (!ok) continue;
    bool dup = false;
    for (const auto& y : found)
      if ((y - x).norm() <= 1e-6 * (1.0 + y.norm())) dup = true;
    if (!dup) found.push_back(x);
  }
  if (found.empty()) throw NoConvergenceSearch("no fixed point located in the search box");
  std::sort(found.begin(), found.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  });
  return found;
}

std::string to_string(EigClass c) {
  switch (c) {
    case EigClass::Attracting: return "attracting";
    case EigClass::Repelling: return "repelling";
    default: return "neutral";
  }
}

SpectralReport jacobian_spectrum(const VectorFieldSystem& field, const Eigen::VectorXd& a) {
  SpectralReport report;
  report.point = a;
  report.jacobian = field.jacobian(a);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(report.jacobian);
  report.eigenvalues = solver.eigenvalues();
  const double scale = std::max(1.0, report.jacobian.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i) {
    double re = report.eigenvalues[i].real();
    if (std::abs(re) <= 1e-10 * scale)
      report.classification.push_back(EigClass::Neutral);
    else
      report.classification.push_back(re < 0 ? EigClass::Attracting : EigClass::Repelling);
  }
  for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i) {
    auto ev = report.eigenvalues[i];
    bool real = std::abs(ev.imag()) <= 1e-10 * scale;
    if (!real || ev.real() == 0) continue;
    double t = -1.0 / ev.real();
    if (t > 0) report.fredholm_times.push_back(t);
  }
  std::sort(report.fredholm_times.begin(), report.fredholm_times.end());
  return report;
}

std::vector<double> fredholm_times(const VectorFieldSystem& field, const Eigen::VectorXd& a) {
  return jacobian_spectrum(field, a).fredholm_times;
}

Eigen::VectorXd fredholm_particular(const VectorFieldSystem& field, const Eigen::VectorXd& a,
                                    double t) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a[i] == 0) throw ZeroCoordinate("the reciprocal right-hand side needs nonzero coordinates");
  for (double tc : fredholm_times(field, a))
    if (std::abs(t - tc) <= 1e-9 * std::max(1.0, std::abs(tc)))
      throw SingularAtCriticalTime("t within the 1e-9 window of the critical time " +
                                   std::to_string(tc));
  const int d = field.dim();
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(d, d) + t * field.jacobian(a);
  double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (std::abs(lu.determinant()) < 1e-12 * std::pow(scale, d))
    throw SingularAtCriticalTime("I + t J is numerically singular");
  Eigen::VectorXd rhs = a.cwiseInverse();
  return lu.solve(rhs);
}

Eigen::VectorXd cycle_residual(const VectorFieldSystem& field, const Trajectory& traj,
                               double time_step, long period_steps) {
  if (period_steps < 1 || period_steps >= traj.size())
    throw Error("InvalidArgument", "period exceeds the trajectory length");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(field.dim());
  for (long i = 0; i <= period_steps; ++i) {
    double w = (i == 0 || i == period_steps) ? 0.5 : 1.0;
    acc += w * field.eval(traj.points.col(i));
  }
  return acc * time_step;
}

PeriodLatticeVerdict period_lattice_check(const std::vector<double>& periods) {
  PeriodLatticeVerdict verdict;
  if (periods.empty()) return verdict;
  for (double p : periods)
    if (p <= 0) throw Error("InvalidArgument", "periods must be positive");
  double tau = *std::min_element(periods.begin(), periods.end());
  verdict.base_period = tau;
  verdict.commensurate = true;
  for (double p : periods) {
    double k = std::round(p / tau);
    if (k < 1 || std::abs(p - k * tau) > 0.01 * p) {
      verdict.commensurate = false;
      break;
    }
  }
  return verdict;
}

QuadProjection quad_projection(const VectorFieldSystem& field, const Eigen::VectorXd& direction) {
  const int d = field.dim();
  for (const auto& comp : field.components())
    if (comp.total_degree() > 2)
      throw NotQuadratic("component of total degree above 2");
  // Hessian of the quadratic part of direction . F.
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(d, d);
  for (int c = 0; c < d; ++c) {
    double w = direction[c];
    if (w == 0) continue;
    for (const auto& [e, coeff] : field.components()[static_cast<size_t>(c)].terms()) {
      int deg = 0;
      for (int k : e) deg += k;
      if (deg != 2) continue;
      double v = w * to_double(coeff);
      int i = -1, j = -1;
      for (int var = 0; var < d; ++var) {
        if (e[static_cast<size_t>(var)] == 2) i = j = var;
        else if (e[static_cast<size_t>(var)] == 1) (i < 0 ? i : j) = var;
      }
      if (i == j) {
        Q(i, i) += 2.0 * v;  // d^2 (v x^2) / dx^2
      } else {
        Q(i, j) += v;
        Q(j, i) += v;
      }
    }
  }
  QuadProjection out;
  out.Q = Q;
  out.eig = sym_eig(Q);
  return out;
}

LorenzBasis lorenz_basis(const Eigen::Vector3d& direction) {
  const double y = direction[1], z = direction[2];
  const double mu = std::sqrt(y * y + z * z);
  if (mu == 0) throw DegenerateDirection("direction with zero y and z components");
  LorenzBasis basis;
  basis.mu = mu;
  basis.Q << 0, z, -y, z, 0, 0, -y, 0, 0;
  const double r2 = std::sqrt(2.0);
  basis.T.col(0) = Eigen::Vector3d(0, y, z) / mu;
  basis.T.col(1) = Eigen::Vector3d(mu, -z, y) / (mu * r2);
  basis.T.col(2) = Eigen::Vector3d(mu, z, -y) / (mu * r2);
  basis.Lambda = Eigen::Vector3d(0, -mu, mu);
  return basis;
}

Eigen::Vector3d lorenz_linear_parts(double sigma, double rho, double beta,
                                    const Eigen::Vector3d& direction, double delta,
                                    LorenzFixedPoint which) {
  const double x = direction[0], y = direction[1], z = direction[2];
  LorenzBasis basis = lorenz_basis(direction);
  Eigen::Vector3d L(x * (1 - delta * sigma) + delta * rho * y,
                    delta * sigma * x + y * (1 - delta), z * (1 - delta * beta));
  if (which != LorenzFixedPoint::Origin) {
    if (rho <= 1) throw Error("InvalidArgument", "the symmetric fixed points need rho > 1");
    double alpha = std::sqrt(beta * (rho - 1));
    if (which == LorenzFixedPoint::AlphaMinus) alpha = -alpha;
    L[0] += delta * (z * alpha - y * alpha * alpha / beta);
    L[1] += delta * z * alpha;
    L[2] -= delta * y * alpha;
  }
  // l u = L T' u, i.e. l_j = sum_i L_i T_{ji}.
  return basis.T * L;
}

std::pair<double, double> lorenz_surfaces(double sigma, double rho, double beta,
                                          const Eigen::Vector3d& point) {
  const double x = point[0], y = point[1], z = point[2];
  double r1 = sigma * x - y - beta * z;
  double r2 = (-sigma * x + rho * y) * z + (sigma * x - y + z * beta) * y / std::sqrt(2.0);
  return {r1, r2};
}

VectorFieldSystem hamiltonian_field(const MultiPolyQ& potential, const Rational& mass) {
  if (mass <= 0) throw Error("InvalidArgument", "mass must be positive");
  const int d = potential.vars();
  const int n = 2 * d;  // state (p_1..p_d, q_1..q_d)
  std::vector<MultiPolyQ> comps;
  for (int i = 0; i < d; ++i) {
    MultiPolyQ dV = potential.derivative(i);
    MultiPolyQ lifted(n);
    for (const auto& [e, c] : dV.terms()) {
      std::vector<int> le(static_cast<size_t>(n), 0);
      for (int v = 0; v < d; ++v) le[static_cast<size_t>(d + v)] = e[static_cast<size_t>(v)];
      lifted.add_term(le, -c);
    }
    comps.push_back(std::move(lifted));
  }
  for (int i = 0; i < d; ++i)
    comps.push_back(MultiPolyQ::variable(n, i, Rational(1) / mass));
  return VectorFieldSystem(n, std::move(comps), "hamiltonian");
}

Eigen::MatrixXd hamiltonian_matrix(const MultiPolyQ& H, const Eigen::VectorXd& point) {
  const int n = H.vars();
  if (n % 2 != 0) throw Error("InvalidArgument", "Hamiltonian needs an even variable count");
  const int d = n / 2;
  auto second = [&](int u, int v) {
    return H.derivative(u).derivative(v).eval(point);
  };
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      out(i, j) = -second(d + i, j);          // -H_qp
      out(i, d + j) = second(i, j);           //  H_pp
      out(d + i, j) = -second(d + i, d + j);  // -H_qq
      out(d + i, d + j) = second(j, d + i);   //  H_pq
    }
  return out;
}

PotentialModes potential_modes(const MultiPolyQ& potential, const Eigen::VectorXd& q) {
  const int d = potential.vars();
  Eigen::VectorXd grad(d);
  for (int i = 0; i < d; ++i) grad[i] = potential.derivative(i).cast<double>().eval(q);
  if (grad.norm() > 1e-8)
    throw NotCritical("gradient norm " + std::to_string(grad.norm()) + " above 1e-8");
  Eigen::MatrixXd hess(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      hess(i, j) = potential.derivative(i).derivative(j).cast<double>().eval(q);
  PotentialModes out;
  out.eig = sym_eig(0.5 * (hess + hess.transpose()));
  double smallest = out.eig.eigenvalues[0];
  for (int i = 0; i < d; ++i)
    if (out.eig.eigenvalues[i] <= smallest + 1e-10 * (1.0 + std::abs(smallest)))
      out.softest.push_back(i);
  return out;
}

PolynomialQ charpoly_exact(const MatrixQ& M) {
  // Faddeev-LeVerrier: det(lambda I - M).
  const size_t n = M.size();
  std::vector<Rational> c(n + 1);
  c[n] = Rational(1);
  MatrixQ Mk(n, std::vector<Rational>(n, Rational(0)));
  for (size_t k = 1; k <= n; ++k) {
    MatrixQ shifted = Mk;
    for (size_t i = 0; i < n; ++i) shifted[i][i] += c[n - k + 1];
    MatrixQ prod(n, std::vector<Rational>(n, Rational(0)));
    for (size_t i = 0; i < n; ++i)
      for (size_t l = 0; l < n; ++l) {
        if (M[i][l] == 0) continue;
        for (size_t j = 0; j < n; ++j) prod[i][j] += M[i][l] * shifted[l][j];
      }
    Mk = std::move(prod);
    Rational tr(0);
    for (size_t i = 0; i < n; ++i) tr += Mk[i][i];
    c[n - k] = -tr / Rational(static_cast<int>(k));
  }
  PolynomialQ::CoeffVector v(static_cast<Eigen::Index>(n) + 1);
  for (size_t i = 0; i <= n; ++i) v[static_cast<Eigen::Index>(i)] = c[i];
  return PolynomialQ(std::move(v));
}

PolynomialD charpoly_numeric(const Eigen::MatrixXd& M) {
  const int n = static_cast<int>(M.rows());
  std::vector<double> c(static_cast<size_t>(n) + 1);
  c[static_cast<size_t>(n)] = 1.0;
  Eigen::MatrixXd Mk = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    Mk = M * (Mk + c[static_cast<size_t>(n - k + 1)] * I);
    c[static_cast<size_t>(n - k)] = -Mk.trace() / k;
  }
  PolynomialD::CoeffVector v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = c[static_cast<size_t>(i)];
  return PolynomialD(std::move(v));
}

Trajectory rk4_trajectory(const VectorFieldSystem& field, const Eigen::VectorXd& x0, double h,
                          long steps) {
  Trajectory traj;
  traj.points.resize(x0.size(), steps + 1);
  Eigen::VectorXd x = x0;
  traj.points.col(0) = x;
  for (long i = 0; i < steps; ++i) {
    Eigen::VectorXd k1 = field.eval(x);
    Eigen::VectorXd k2 = field.eval(x + 0.5 * h * k1);
    Eigen::VectorXd k3 = field.eval(x + 0.5 * h * k2);
    Eigen::VectorXd k4 = field.eval(x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    traj.points.col(i + 1) = x;
  }
  return traj;
}

}  // namespace lab
