#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>

#include "lab/errors.hpp"

namespace lab {

/// Orthogonal eigen-decomposition of a real symmetric matrix, eigenvalues in
/// ascending order. Column signs are fixed so the largest-magnitude entry of
/// each eigenvector is positive, which keeps sweeps deterministic.
struct SymmetricEig {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd basis;
};

inline SymmetricEig sym_eig(const Eigen::MatrixXd& M) {
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw NotSymmetric("matrix is not symmetric within 1e-12 relative");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
  SymmetricEig out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index j = 0; j < out.basis.cols(); ++j) {
    Eigen::Index imax;
    out.basis.col(j).cwiseAbs().maxCoeff(&imax);
    if (out.basis(imax, j) < 0) out.basis.col(j) = -out.basis.col(j);
  }
  return out;
}

}  // namespace lab
