#pragma once

#include <Eigen/Core>

#include <complex>
#include <functional>
#include <vector>

#include "lab/multipoly.hpp"
#include "lab/polynomial.hpp"

namespace lab {

/// A retained orbit segment. Points are columns; escape (leaving the bound B)
/// is recorded, never thrown.
struct Trajectory {
  Eigen::MatrixXd points;  // d x kept
  long burn_in = 0;
  unsigned long long seed = 0;
  bool escaped = false;
  long escape_index = -1;  // iteration count at which the bound was exceeded

  long size() const { return points.cols(); }
  int dim() const { return static_cast<int>(points.rows()); }
};

using StepFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Iterates `step` from x0, discards n_burn, keeps up to n_keep points or
/// stops early once the norm exceeds `bound`.
Trajectory iterate_map(const StepFn& step, const Eigen::VectorXd& x0, long n_burn, long n_keep,
                       double bound);
Trajectory iterate_map(const PolynomialD& f, double x0, long n_burn, long n_keep, double bound);
Trajectory iterate_map(const PolyMapD& f, const Eigen::VectorXd& x0, long n_burn, long n_keep,
                       double bound);
/// Complex 1D map iterated over C, recorded as (Re, Im) rows.
Trajectory iterate_map(const PolynomialC& f, std::complex<double> z0, long n_burn, long n_keep,
                       double bound);

/// Uniform-bin histogram over the observed range of one coordinate, with a
/// piecewise-linear CDF accessor.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure(Eigen::VectorXd edges, Eigen::VectorXd counts);

  const Eigen::VectorXd& edges() const { return edges_; }
  const Eigen::VectorXd& counts() const { return counts_; }
  double total() const { return total_; }
  double lo() const { return edges_[0]; }
  double hi() const { return edges_[edges_.size() - 1]; }
  bool degenerate() const { return hi() <= lo(); }

  /// Nondecreasing, range [0, 1]; linear within bins.
  double cdf(double x) const;

 private:
  Eigen::VectorXd edges_;   // n_bins + 1
  Eigen::VectorXd counts_;  // n_bins
  double total_;
};

EmpiricalMeasure empirical_measure(const Trajectory& traj, int n_bins, int coordinate = 0);

/// Histogram of explicit samples over a fixed range (used for pushforward
/// comparisons that must share bin edges).
EmpiricalMeasure histogram(const std::vector<double>& samples, int n_bins, double lo, double hi);

/// Kolmogorov sup-distance between the empirical CDF and a reference CDF given
/// on [0,1]; the support is affinely rescaled to [0,1] first (identity when
/// `rescale` is false, in which case the reference acts on raw coordinates).
double ks_distance(const EmpiricalMeasure& emp, const std::function<double(double)>& cdf,
                   bool rescale = true);

/// Sup-distance between two empirical CDFs; a metric on measures with equal
/// evaluation convention.
double ks_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

/// Reproducible ensemble starts: seeded uniform draws over a box. Equal seeds
/// give identical start sets.
std::vector<Eigen::VectorXd> seeded_starts(const Eigen::VectorXd& box_lo,
                                           const Eigen::VectorXd& box_hi, int count,
                                           unsigned long long seed);

/// Returns into a ball around `target`: hit indices, gaps, and the modal gap.
struct ReturnStats {
  Eigen::VectorXd target;
  double radius = 0;
  std::vector<long> return_times;  // gaps between consecutive hits
  long modal_period = 0;
};

ReturnStats detect_cycles(const Trajectory& traj, const Eigen::VectorXd& target, double radius);

}  // namespace lab
