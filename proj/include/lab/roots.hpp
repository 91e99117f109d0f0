#pragma once

#include <Eigen/Core>

#include <complex>
#include <vector>

#include "lab/polynomial.hpp"

namespace lab {

struct RootOptions {
  // Residual bound on |p(r)| relative to the evaluation scale sum |c_k||r|^k
  // (the attainable backward error), normalized so max|coeff| = 1.
  double root_tol = 1e-10;
  double reality_tol = 1e-8;     // |Im r| <= reality_tol * (1 + |r|) flags a real root
  double cluster_radius = 1e-7;  // merge radius factor for multiple roots
};

/// All complex roots of a polynomial, with multiplicity. Multiple roots are
/// reported as repeated entries sharing a cluster representative value.
struct RootSet {
  Eigen::VectorXcd roots;
  Eigen::VectorXd residuals;
  std::vector<bool> real_flags;
  std::vector<int> multiplicities;  // cluster size, one entry per root

  std::vector<double> real_roots() const {
    std::vector<double> out;
    for (Eigen::Index i = 0; i < roots.size(); ++i)
      if (real_flags[static_cast<size_t>(i)]) out.push_back(roots[i].real());
    return out;
  }
};

/// Companion-matrix eigenvalues followed by Newton polish. Throws
/// ZeroPolynomial for the zero polynomial and NonConvergence if the residual
/// contract cannot be met even after a higher-precision retry.
RootSet find_roots(const Polynomial<std::complex<double>>& p, const RootOptions& opts = {});
RootSet find_roots(const Polynomial<double>& p, const RootOptions& opts = {});
RootSet find_roots(const Polynomial<Rational>& p, const RootOptions& opts = {});

}  // namespace lab
