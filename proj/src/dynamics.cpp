#include "lab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "lab/errors.hpp"

namespace lab {

Trajectory iterate_map(const StepFn& step, const Eigen::VectorXd& x0, long n_burn, long n_keep,
                       double bound) {
  if (n_keep < 1) throw Error("InvalidArgument", "n_keep must be at least 1");
  Trajectory traj;
  traj.burn_in = n_burn;
  const int d = static_cast<int>(x0.size());
  Eigen::VectorXd x = x0;
  long iter = 0;
  for (; iter < n_burn; ++iter) {
    if (x.norm() > bound) {
      traj.escaped = true;
      traj.escape_index = iter;
      traj.points.resize(d, 0);
      return traj;
    }
    x = step(x);
  }
  traj.points.resize(d, n_keep);
  long kept = 0;
  for (; kept < n_keep; ++kept, ++iter) {
    if (x.norm() > bound) {
      traj.escaped = true;
      traj.escape_index = iter;
      break;
    }
    traj.points.col(kept) = x;
    x = step(x);
  }
  traj.points.conservativeResize(d, kept);
  return traj;
}

Trajectory iterate_map(const PolynomialD& f, double x0, long n_burn, long n_keep, double bound) {
  Eigen::VectorXd start(1);
  start[0] = x0;
  return iterate_map(
      [&f](const Eigen::VectorXd& x) {
        Eigen::VectorXd out(1);
        out[0] = evaluate(f, x[0]);
        return out;
      },
      start, n_burn, n_keep, bound);
}

Trajectory iterate_map(const PolyMapD& f, const Eigen::VectorXd& x0, long n_burn, long n_keep,
                       double bound) {
  return iterate_map([&f](const Eigen::VectorXd& x) { return f.apply(x); }, x0, n_burn, n_keep,
                     bound);
}

Trajectory iterate_map(const PolynomialC& f, std::complex<double> z0, long n_burn, long n_keep,
                       double bound) {
  Eigen::VectorXd start(2);
  start[0] = z0.real();
  start[1] = z0.imag();
  return iterate_map(
      [&f](const Eigen::VectorXd& x) {
        std::complex<double> z = evaluate(f, std::complex<double>(x[0], x[1]));
        Eigen::VectorXd out(2);
        out[0] = z.real();
        out[1] = z.imag();
        return out;
      },
      start, n_burn, n_keep, bound);
}

EmpiricalMeasure::EmpiricalMeasure(Eigen::VectorXd edges, Eigen::VectorXd counts)
    : edges_(std::move(edges)), counts_(std::move(counts)), total_(counts_.sum()) {}

double EmpiricalMeasure::cdf(double x) const {
  if (total_ <= 0) return 0;
  if (degenerate()) return x < lo() ? 0.0 : 1.0;
  if (x <= lo()) return 0;
  if (x >= hi()) return 1;
  const Eigen::Index bins = counts_.size();
  double width = (hi() - lo()) / static_cast<double>(bins);
  double pos = (x - lo()) / width;
  Eigen::Index bin = std::min<Eigen::Index>(static_cast<Eigen::Index>(pos), bins - 1);
  double cum = 0;
  for (Eigen::Index i = 0; i < bin; ++i) cum += counts_[i];
  double frac = pos - static_cast<double>(bin);
  return (cum + frac * counts_[bin]) / total_;
}

EmpiricalMeasure empirical_measure(const Trajectory& traj, int n_bins, int coordinate) {
  if (traj.escaped) throw EscapedTrajectory("cannot measure an escaped trajectory");
  if (traj.size() < 1) throw Error("InvalidArgument", "empty trajectory");
  if (n_bins < 1) throw Error("InvalidArgument", "need at least one bin");
  std::vector<double> samples(static_cast<size_t>(traj.size()));
  for (long i = 0; i < traj.size(); ++i) samples[static_cast<size_t>(i)] = traj.points(coordinate, i);
  double lo = *std::min_element(samples.begin(), samples.end());
  double hi = *std::max_element(samples.begin(), samples.end());
  return histogram(samples, n_bins, lo, hi);
}

EmpiricalMeasure histogram(const std::vector<double>& samples, int n_bins, double lo, double hi) {
  Eigen::VectorXd edges(n_bins + 1);
  for (int i = 0; i <= n_bins; ++i)
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / n_bins;
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_bins);
  if (hi <= lo) {
    counts[0] = static_cast<double>(samples.size());
    return EmpiricalMeasure(std::move(edges), std::move(counts));
  }
  for (double x : samples) {
    double pos = (x - lo) / (hi - lo) * n_bins;
    int bin = std::clamp(static_cast<int>(pos), 0, n_bins - 1);
    counts[bin] += 1;
  }
  return EmpiricalMeasure(std::move(edges), std::move(counts));
}

double ks_distance(const EmpiricalMeasure& emp, const std::function<double(double)>& cdf,
                   bool rescale) {
  if (emp.total() < 1) throw Error("InvalidArgument", "empty measure");
  if (emp.degenerate()) {
    // A single atom: the step straddles the reference CDF at that point.
    double u = rescale ? emp.lo() : emp.lo();
    double g = cdf(u);
    return std::max(g, 1.0 - g);
  }
  const Eigen::Index bins = emp.counts().size();
  const double lo = emp.lo(), hi = emp.hi();
  double d = 0;
  const int refine = 8;  // evaluation points per bin; both curves are smooth between edges
  for (Eigen::Index i = 0; i <= bins * refine; ++i) {
    double x = lo + (hi - lo) * static_cast<double>(i) / (bins * refine);
    double u = rescale ? (x - lo) / (hi - lo) : x;
    d = std::max(d, std::abs(emp.cdf(x) - cdf(u)));
  }
  return d;
}

double ks_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  std::vector<double> breakpoints;
  for (Eigen::Index i = 0; i < a.edges().size(); ++i) breakpoints.push_back(a.edges()[i]);
  for (Eigen::Index i = 0; i < b.edges().size(); ++i) breakpoints.push_back(b.edges()[i]);
  std::sort(breakpoints.begin(), breakpoints.end());
  double d = 0;
  for (double x : breakpoints) d = std::max(d, std::abs(a.cdf(x) - b.cdf(x)));
  return d;
}

std::vector<Eigen::VectorXd> seeded_starts(const Eigen::VectorXd& box_lo,
                                           const Eigen::VectorXd& box_hi, int count,
                                           unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd x(box_lo.size());
    for (Eigen::Index i = 0; i < box_lo.size(); ++i)
      x[i] = box_lo[i] + (box_hi[i] - box_lo[i]) * unit(rng);
    out.push_back(std::move(x));
  }
  return out;
}

ReturnStats detect_cycles(const Trajectory& traj, const Eigen::VectorXd& target, double radius) {
  if (radius <= 0) throw Error("InvalidArgument", "radius must be positive");
  ReturnStats stats;
  stats.target = target;
  stats.radius = radius;
  long prev = -1;
  for (long i = 0; i < traj.size(); ++i) {
    if ((traj.points.col(i) - target).norm() <= radius) {
      if (prev >= 0) stats.return_times.push_back(i - prev);
      prev = i;
    }
  }
  if (stats.return_times.empty()) throw NoReturns("fewer than 2 visits to the target ball");
  std::map<long, int> freq;
  for (long g : stats.return_times) ++freq[g];
  int best = 0;
  for (const auto& [gap, count] : freq)
    if (count > best || (count == best && gap > stats.modal_period)) {
      best = count;
      stats.modal_period = gap;
    }
  return stats;
}

}  // namespace lab
