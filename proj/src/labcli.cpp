#include "lab/labcli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "lab/bell.hpp"
#include "lab/dynamics.hpp"
#include "lab/errors.hpp"
#include "lab/nbody.hpp"
#include "lab/odeflow.hpp"
#include "lab/saddle.hpp"

namespace lab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kPi = 3.14159265358979323846;

const std::set<std::string> kKinds = {"zeros",  "density",     "iterate", "compare",
                                      "lorenz", "rossler",     "hamiltonian", "nbody",
                                      "trinomial", "boundary", "fredholm"};

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown field '" + it.key() + "' in " + where);
}

Rational rational_field(const json& v, const std::string& where) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number_float()) {
    // Exact binary expansion of the double.
    double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where + " must be finite");
    int exp = 0;
    double m = std::frexp(d, &exp);
    long long mant = static_cast<long long>(std::ldexp(m, 60));
    Rational r(mant);
    int shift = exp - 60;
    BigInt two(1);
    for (int i = 0; i < std::abs(shift); ++i) two *= 2;
    if (shift >= 0) return r * Rational(two);
    return r / Rational(two);
  }
  throw ConfigError(where + " must be a rational string or number");
}

double double_field(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return to_double(parse_rational(v.get<std::string>()));
  throw ConfigError(where + " must be a number");
}

Map1D map_from_json(const json& m) {
  require_keys(m, {"lambda", "coeffs"}, "map");
  if (m.contains("coeffs")) {
    const auto& arr = m["coeffs"];
    if (!arr.is_array() || arr.size() < 2) throw ConfigError("map.coeffs needs degree >= 1");
    PolynomialQ::CoeffVector v(static_cast<Eigen::Index>(arr.size()));
    for (size_t i = 0; i < arr.size(); ++i)
      v[static_cast<Eigen::Index>(i)] = rational_field(arr[i], "map.coeffs");
    PolynomialQ p(std::move(v));
    Map1D map{p};
    if (m.contains("lambda") && map.multiplier() != rational_field(m["lambda"], "map.lambda"))
      throw ConfigError("map.lambda disagrees with map.coeffs");
    return map;
  }
  if (!m.contains("lambda")) throw ConfigError("map needs lambda or coeffs");
  return Map1D::logistic(rational_field(m["lambda"], "map.lambda"));
}

std::vector<double> grid_from_json(const json& g, const std::string& where) {
  require_keys(g, {"min", "max", "points"}, where);
  if (!g.contains("min") || !g.contains("max") || !g.contains("points"))
    throw ConfigError(where + " needs min, max, points");
  double lo = double_field(g["min"], where + ".min");
  double hi = double_field(g["max"], where + ".max");
  long n = g["points"].get<long>();
  if (n < 2 || hi <= lo) throw ConfigError(where + " range is empty");
  std::vector<double> out(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i)
    out[static_cast<size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return out;
}

// ---------------------------------------------------------------------------
// Output helpers

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw Error("IoError", "cannot open " + path.string());
    for (size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::string fnv1a_hex(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  unsigned long long h = 1469598103934665603ULL;
  char buf[1 << 14];
  while (in) {
    in.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {
    if (fs::exists(dir_ / "manifest.json"))
      throw ConfigError("output directory already holds a finished run: " + dir_.string());
    fs::create_directories(dir_);
  }

  fs::path file(const std::string& name) {
    names_.push_back(name);
    return dir_ / name;
  }

  void write_summary(const json& summary) {
    std::ofstream out(file("summary.json"));
    out << summary.dump(2) << '\n';
  }

  RunManifest finish(const RunConfig& config, double wall_ms) {
    RunManifest manifest;
    manifest.config_echo = config.to_json();
    manifest.wall_ms = wall_ms;
    manifest.version = version_string();
    json files = json::array();
    for (const auto& name : names_) {
      ManifestFile mf;
      mf.name = name;
      mf.hash = fnv1a_hex(dir_ / name);
      mf.bytes = fs::file_size(dir_ / name);
      manifest.files.push_back(mf);
      files.push_back({{"name", mf.name}, {"hash", mf.hash}, {"bytes", mf.bytes}});
    }
    json doc = {{"config", manifest.config_echo},
                {"files", files},
                {"wall_ms", manifest.wall_ms},
                {"version", manifest.version}};
    std::ofstream out(dir_ / "manifest.json");
    out << doc.dump(2) << '\n';
    return manifest;
  }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

std::string cell(double v) { return format_double(v); }
std::string cell(int v) { return std::to_string(v); }
std::string cell(long v) { return std::to_string(v); }

// ---------------------------------------------------------------------------
// Experiment bodies

json run_zeros(const RunConfig& cfg, OutputSet& out) {
  require_keys(cfg.params, {"kind", "out", "seed", "threads", "map", "n", "pf"}, "config");
  Map1D map = map_from_json(cfg.params.at("map"));
  int n = cfg.params.at("n").get<int>();
  BellTable table = bell_table(map, n);
  ZeroSet zs = zero_spectrum(table, n);

  {
    CsvWriter csv(out.file("zeros.csv"), {"y", "s", "mult"});
    for (size_t i = 0; i < zs.zeros.size(); ++i)
      csv.row({cell(zs.zeros[i]), cell(zs.normalized[i]), cell(zs.multiplicities[i])});
  }
  json summary = {{"kind", "zeros"}, {"n", n}, {"distinct_zeros", zs.zeros.size()}};

  PhaseSpectrum ph = phase_spectrum(table, n);
  {
    CsvWriter csv(out.file("phases.csv"), {"s", "chi"});
    std::vector<double> ss = zs.normalized_nonzero();
    for (size_t i = 0; i < ss.size(); ++i) csv.row({cell(ss[i]), cell(ph.phases[i])});
  }
  summary["uniformity_stat"] = ph.uniformity_stat;

  if (cfg.params.contains("pf")) {
    require_keys(cfg.params.at("pf"), {"b"}, "pf");
    Rational b = rational_field(cfg.params.at("pf").at("b"), "pf.b");
    PhiSolution phi = pf_coefficients(table, b);
    bool lower_zero = true;
    for (int k = 0; k < n; ++k) lower_zero = lower_zero && phi.residual.coeff(k) == 0;
    summary["pf"] = {{"lower_coefficients_zero", lower_zero},
                     {"residual_degree_n",
                      format_double(to_double(phi.residual.coeff(n)))}};
  }
  return summary;
}

json run_density(const RunConfig& cfg, OutputSet& out) {
  require_keys(cfg.params, {"kind", "out", "seed", "threads", "map", "grid", "which"}, "config");
  Map1D map = map_from_json(cfg.params.at("map"));
  std::vector<double> grid = grid_from_json(cfg.params.at("grid"), "grid");
  std::string which = cfg.params.value("which", "q");
  DensityCurve q = zero_density(map, grid, cfg.threads);
  json summary = {{"kind", "density"},
                  {"which", which},
                  {"support", {q.support_lo, q.support_hi}},
                  {"normalization", q.normalization}};
  if (which == "q") {
    CsvWriter csv(out.file("density.csv"), {"s", "q"});
    for (auto& [s, v] : q.samples) csv.row({cell(s), cell(v)});
  } else if (which == "p") {
    DensityCurve p = invariant_density(q);
    CsvWriter csv(out.file("density.csv"), {"x", "p"});
    for (auto& [x, v] : p.samples) csv.row({cell(x), cell(v)});
    summary["clamped"] = p.clamped;
  } else {
    throw ConfigError("which must be 'q' or 'p'");
  }
  return summary;
}

StepFn step_from_system(const json& sys, int& dim, double& default_bound) {
  std::string preset = sys.value("preset", "map1d");
  if (preset == "map1d") {
    require_keys(sys, {"preset", "map"}, "system");
    Map1D map = map_from_json(sys.at("map"));
    PolynomialD f = map.f.cast<double>();
    dim = 1;
    default_bound = 1e6;
    return [f](const Eigen::VectorXd& x) {
      Eigen::VectorXd out(1);
      out[0] = evaluate(f, x[0]);
      return out;
    };
  }
  if (preset == "henon") {
    require_keys(sys, {"preset", "delta", "sigma", "v"}, "system");
    PolyMapD map = PolyMapD::henon(double_field(sys.at("delta"), "delta"),
                                   double_field(sys.at("sigma"), "sigma"),
                                   double_field(sys.at("v"), "v"));
    dim = 2;
    default_bound = 1e6;
    return [map](const Eigen::VectorXd& x) { return map.apply(x); };
  }
  if (preset == "lorenz" || preset == "rossler") {
    require_keys(sys, {"preset", "sigma", "rho", "beta", "delta"}, "system");
    Rational sigma = rational_field(sys.at("sigma"), "sigma");
    Rational rho = rational_field(sys.at("rho"), "rho");
    Rational beta = rational_field(sys.at("beta"), "beta");
    VectorFieldSystem field = preset == "lorenz"
                                  ? VectorFieldSystem::lorenz(sigma, rho, beta)
                                  : VectorFieldSystem::rossler(sigma, beta, rho);
    DifferentialIteration it =
        differential_iteration(field, double_field(sys.at("delta"), "delta"));
    dim = 3;
    default_bound = 1e4;
    return [it](const Eigen::VectorXd& x) { return it.apply(x); };
  }
  if (preset == "trinomial") {
    require_keys(sys, {"preset", "alpha_re", "alpha_im", "m"}, "system");
    std::complex<double> alpha(double_field(sys.at("alpha_re"), "alpha_re"),
                               double_field(sys.at("alpha_im"), "alpha_im"));
    int m = sys.at("m").get<int>();
    if (m < 2) throw ConfigError("m must be at least 2");
    PolynomialC f = PolynomialC({std::complex<double>(0, 0), alpha}) +
                    PolynomialC::monomial(m, std::complex<double>(1.0 / m, 0));
    dim = 2;
    default_bound = 1e6;
    return [f](const Eigen::VectorXd& x) {
      std::complex<double> z = evaluate(f, std::complex<double>(x[0], x[1]));
      Eigen::VectorXd out(2);
      out[0] = z.real();
      out[1] = z.imag();
      return out;
    };
  }
  throw ConfigError("unknown system preset '" + preset + "'");
}

json run_iterate(const RunConfig& cfg, OutputSet& out) {
  require_keys(cfg.params,
               {"kind", "out", "seed", "threads", "system", "x0", "n_burn", "n_keep", "bound"},
               "config");
  int dim = 0;
  double bound = 0;
  StepFn step = step_from_system(cfg.params.at("system"), dim, bound);
  if (cfg.params.contains("bound")) bound = double_field(cfg.params.at("bound"), "bound");
  const auto& x0j = cfg.params.at("x0");
  Eigen::VectorXd x0(dim);
  if (x0j.is_array()) {
    if (static_cast<int>(x0j.size()) != dim) throw ConfigError("x0 dimension mismatch");
    for (int i = 0; i < dim; ++i) x0[i] = double_field(x0j[static_cast<size_t>(i)], "x0");
  } else {
    if (dim != 1) throw ConfigError("x0 must be an array for multi-dimensional systems");
    x0[0] = double_field(x0j, "x0");
  }
  long n_burn = cfg.params.value("n_burn", 0L);
  long n_keep = cfg.params.at("n_keep").get<long>();
  Trajectory traj = iterate_map(step, x0, n_burn, n_keep, bound);
  {
    std::vector<std::string> header = {"t"};
    for (int i = 1; i <= dim; ++i) header.push_back("x_" + std::to_string(i));
    CsvWriter csv(out.file("trajectory.csv"), header);
    for (long i = 0; i < traj.size(); ++i) {
      std::vector<std::string> cells = {cell(i)};
      for (int d = 0; d < dim; ++d) cells.push_back(cell(traj.points(d, i)));
      csv.row(cells);
    }
  }
  return json{{"kind", "iterate"},
              {"retained", traj.size()},
              {"escaped", traj.escaped},
              {"escape_index", traj.escape_index}};
}

double beta_half_cdf(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return 2.0 / kPi * std::asin(std::sqrt(u));
}

json run_compare(const RunConfig& cfg, OutputSet& out) {
  require_keys(cfg.params,
               {"kind", "out", "seed", "threads", "map", "x0", "iterates", "burn_in", "bins",
                "bound"},
               "config");
  Map1D map = map_from_json(cfg.params.at("map"));
  double lambda = to_double(map.multiplier());
  long iterates = cfg.params.value("iterates", 1000000L);
  long burn_in = cfg.params.value("burn_in", 10000L);
  int bins = cfg.params.value("bins", 2000);
  // The quadratic family maps [0, lambda^2/2] into itself; start inside it.
  double x0 = cfg.params.contains("x0") ? double_field(cfg.params.at("x0"), "x0")
                                        : 0.7 * lambda * lambda / 2.0;
  double bound =
      cfg.params.contains("bound") ? double_field(cfg.params.at("bound"), "bound") : 1e6;

  Trajectory traj = iterate_map(map.f.cast<double>(), x0, burn_in, iterates, bound);
  if (traj.escaped)
    return json{{"kind", "compare"}, {"escaped", true}, {"escape_index", traj.escape_index}};
  EmpiricalMeasure emp = empirical_measure(traj, bins);

  // The predicted curve is reported on the central 5%-95% band of its
  // support, so the empirical side is conditioned to the same band of its own
  // support before the distance is taken.
  std::vector<double> banded;
  {
    double lo_b = emp.lo() + 0.05 * (emp.hi() - emp.lo());
    double hi_b = emp.lo() + 0.95 * (emp.hi() - emp.lo());
    for (long i = 0; i < traj.size(); ++i) {
      double v = traj.points(0, i);
      if (v >= lo_b && v <= hi_b) banded.push_back(v);
    }
  }
  EmpiricalMeasure emp_band = histogram(
      banded, bins, emp.lo() + 0.05 * (emp.hi() - emp.lo()),
      emp.lo() + 0.95 * (emp.hi() - emp.lo()));

  // Predicted invariant density, normalized to unit mass on [0, 1].
  double c = 4.0 / (lambda * lambda);
  std::vector<double> grid;
  const int pn = 20000;
  for (int i = 0; i <= pn; ++i) grid.push_back(c * 1e-4 + (c * 1.02 - c * 1e-4) * i / pn);
  DensityCurve q = zero_density(map, grid, cfg.threads);
  DensityCurve p = invariant_density(q);
  {
    CsvWriter csv(out.file("density.csv"), {"x", "p"});
    for (auto& [x, v] : p.samples) csv.row({cell(x), cell(v)});
  }
  // Cumulative CDF of the predicted density on the rescaled support.
  double lo = p.samples.front().first, hi = p.samples.back().first;
  std::vector<double> xs, cum;
  double acc = 0;
  xs.push_back(lo);
  cum.push_back(0);
  for (size_t i = 1; i < p.samples.size(); ++i) {
    acc += 0.5 * (p.samples[i].second + p.samples[i - 1].second) *
           (p.samples[i].first - p.samples[i - 1].first);
    xs.push_back(p.samples[i].first);
    cum.push_back(acc);
  }
  for (auto& v : cum) v /= acc;
  auto predicted_cdf = [&, lo, hi](double u) {
    double x = lo + u * (hi - lo);
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return 0.0;
    if (it == xs.end()) return 1.0;
    size_t j = static_cast<size_t>(it - xs.begin());
    double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return cum[j - 1] + t * (cum[j] - cum[j - 1]);
  };
  double ks = ks_distance(emp_band, predicted_cdf);
  double ks_beta = ks_distance(emp, beta_half_cdf);
  return json{{"kind", "compare"},
              {"escaped", false},
              {"retained", traj.size()},
              {"ks_distance", ks},
              {"ks_distance_beta", ks_beta},
              {"support", {emp.lo(), emp.hi()}}};
}

json spectrum_rows(CsvWriter& csv, const SpectralReport& report) {
  json eigs = json::array();
  for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i) {
    csv.row({cell(report.eigenvalues[i].real()), cell(report.eigenvalues[i].imag()),
             to_string(report.classification[static_cast<size_t>(i)])});
    eigs.push_back({report.eigenvalues[i].real(), report.eigenvalues[i].imag()});
  }
  return eigs;
}

json run_lorenz(const RunConfig& cfg, OutputSet& out) {
  require_keys(cfg.params,
               {"kind", "out", "seed", "threads", "sigma", "rho", "beta", "direction", "delta",
                "orbit"},
               "config");
  Rational sigma = rational_field(cfg.params.at("sigma"), "sigma");
  Rational rho = rational_field(cfg.params.at("rho"), "rho");
  Rational beta = rational_field(cfg.params.at("beta"), "beta");
  VectorFieldSystem field = VectorFieldSystem::lorenz(sigma, rho, beta);
  auto points = field_fixed_points(field);

  json summary = {{"kind", "lorenz"}};
  json fps = json::array();
  CsvWriter csv(out.file("spectrum.csv"), {"re", "im", "class"});
  for (const auto& p : points) {
    SpectralReport rep = jacobian_spectrum(field, p);
    json eigs = spectrum_rows(csv, rep);
    fps.push_back({{"point", {p[0], p[1], p[2]}},
                   {"residual", field.eval(p).norm()},
                   {"eigenvalues", eigs},
                   {"fredholm_times", rep.fredholm_times}});
  }
  summary["fixed_points"] = fps;

  Eigen::Vector3d dir(1, 1, 1);
  if (cfg.params.contains("direction")) {
    const auto& dj = cfg.params.at("direction");
    for (int i = 0; i < 3; ++i) dir[i] = double_field(dj[static_cast<size_t>(i)], "direction");
  }
  double delta = cfg.params.contains("delta") ? double_field(cfg.params.at("delta"), "delta")
                                              : 0.001;
  LorenzBasis basis = lorenz_basis(dir);
  QuadProjection proj = quad_projection(field, dir);
  summary["mu"] = basis.mu;
  summary["quadratic_eigenvalues"] = {proj.eig.eigenvalues[0], proj.eig.eigenvalues[1],
                                      proj.eig.eigenvalues[2]};
  double sd = to_double(sigma), rd = to_double(rho), bd = to_double(beta);
  for (auto [name, which] :
       {std::pair{"l_origin", LorenzFixedPoint::Origin},
        std::pair{"l_alpha_plus", LorenzFixedPoint::AlphaPlus},
        std::pair{"l_alpha_minus", LorenzFixedPoint::AlphaMinus}}) {
    if (which != LorenzFixedPoint::Origin && rd <= 1) continue;
    Eigen::Vector3d l = lorenz_linear_parts(sd, rd, bd, dir, delta, which);
    summary[name] = {l[0], l[1], l[2]};
  }

  if (cfg.params.contains("orbit")) {
    const auto& oj = cfg.params.at("orbit");
    require_keys(oj, {"x0", "n_burn", "n_keep"}, "orbit");
    Eigen::VectorXd x0(3);
    for (int i = 0; i < 3; ++i) x0[i] = double_field(oj.at("x0")[static_cast<size_t>(i)], "x0");
    DifferentialIteration it = differential_iteration(field, delta);
    Trajectory traj = iterate_map([&](const Eigen::VectorXd& x) { return it.apply(x); }, x0,
                                  oj.value("n_burn", 0L), oj.at("n_keep").get<long>(), 1e4);
    CsvWriter tcsv(out.file("trajectory.csv"), {"t", "x_1", "x_2", "x_3"});
    double r1_abs = 0, r2_abs = 0;
    long l3_small = 0;
    for (long i = 0; i < traj.size(); ++i) {
      Eigen::Vector3d x = traj.points.col(i);
      tcsv.row({cell(i * delta), cell(x[0]), cell(x[1]), cell(x[2])});
      auto [r1, r2] = lorenz_surfaces(sd, rd, bd, x);
      r1_abs += std::abs(r1);
      r2_abs += std::abs(r2);
      Eigen::Vector3d l = basis.T *
                          Eigen::Vector3d(x[0] * (1 - delta * sd) + delta * rd * x[1],
                                          delta * sd * x[0] + x[1] * (1 - delta),
                                          x[2] * (1 - delta * bd));
      if (std::abs(l[2]) < 1e-3 * (1.0 + x.norm())) ++l3_small;
    }
    if (traj.size() > 0) {
      summary["surface_residual_mean"] = {r1_abs / traj.size(), r2_abs / traj.size()};
      summary["l3_small_fraction"] = static_cast<double>(l3_small) / traj.size();
      summary["escaped"] = traj.escaped;
    }
  }
  return summary;
}

json run_rossler(const RunConfig& cfg, OutputSet& out) {
  require_keys(cfg.params, {"kind", "out", "seed", "threads", "sigma", "rho", "beta", "direction"},
               "config");
  Rational sigma = rational_field(cfg.params.at("sigma"), "sigma");
  Rational rho = rational_field(cfg.params.at("rho"), "rho");
  Rational beta = rational_field(cfg.params.at("beta"), "beta");
  VectorFieldSystem field = VectorFieldSystem::rossler(sigma, beta, rho);
  auto points = field_fixed_points(field);
  json summary = {{"kind", "rossler"}, {"fixed_point_count", points.size()}};
  json fps = json::array();
  CsvWriter csv(out.file("spectrum.csv"), {"re", "im", "class"});
  for (const auto& p : points) {
    SpectralReport rep = jacobian_spectrum(field, p);
    json eigs = spectrum_rows(csv, rep);
    fps.push_back({{"point", {p[0], p[1], p[2]}},
                   {"residual", field.eval(p).norm()},
                   {"eigenvalues", eigs}});
  }
  summary["fixed_points"] = fps;
  if (cfg.params.contains("direction")) {
    Eigen::Vector3d dir;
    for (int i = 0; i < 3; ++i)
      dir[i] = double_field(cfg.params.at("direction")[static_cast<size_t>(i)], "direction");
    QuadProjection proj = quad_projection(field, dir);
    summary["quadratic_eigenvalues"] = {proj.eig.eigenvalues[0], proj.eig.eigenvalues[1],
                                        proj.eig.eigenvalues[2]};
  }
  return summary;
}

MultiPolyQ potential_from_json(const json& pj) {
  require_keys(pj, {"vars", "terms"}, "potential");
  int vars = pj.at("vars").get<int>();
  if (vars < 1) throw ConfigError("potential.vars must be positive");
  MultiPolyQ V(vars);
  for (const auto& t : pj.at("terms")) {
    require_keys(t, {"exps", "c"}, "potential term");
    std::vector<int> exps = t.at("exps").get<std::vector<int>>();
    if (static_cast<int>(exps.size()) != vars)
      throw ConfigError("potential term exponent arity mismatch");
    V.add_term(exps, rational_field(t.at("c"), "potential term"));
  }
  return V;
}

json run_hamiltonian(const RunConfig& cfg, OutputSet& out) {
  require_keys(cfg.params, {"kind", "out", "seed", "threads", "potential", "mass", "box"},
               "config");
  MultiPolyQ V = potential_from_json(cfg.params.at("potential"));
  Rational mass = cfg.params.contains("mass") ? rational_field(cfg.params.at("mass"), "mass")
                                              : Rational(1);
  VectorFieldSystem field = hamiltonian_field(V, mass);
  const int d = V.vars();

  // Critical points of the potential; fixed points of the field are (0, q*).
  std::vector<Eigen::VectorXd> criticals;
  if (d == 1) {
    PolynomialQ::CoeffVector grad(16);
    MultiPolyQ dV = V.derivative(0);
    PolynomialQ g;
    for (const auto& [e, c] : dV.terms()) {
      PolynomialQ mono = PolynomialQ::monomial(e[0], c);
      g = g + mono;
    }
    if (g.is_zero() || g.degree() < 1) {
      criticals.push_back(Eigen::VectorXd::Zero(1));
    } else {
      RootSet rs = find_roots(g);
      for (double r : rs.real_roots()) {
        Eigen::VectorXd q(1);
        q[0] = r;
        bool dup = false;
        for (auto& c : criticals) dup = dup || std::abs(c[0] - r) < 1e-9;
        if (!dup) criticals.push_back(q);
      }
    }
  } else {
    double half = cfg.params.contains("box") ? double_field(cfg.params.at("box"), "box") : 5.0;
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(2 * d, -half);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(2 * d, half);
    for (const auto& fp : field_fixed_points(field, lo, hi, cfg.seed))
      criticals.push_back(fp.tail(d));
  }

  json summary = {{"kind", "hamiltonian"}, {"dim", d}};
  json list = json::array();
  CsvWriter csv(out.file("spectrum.csv"), {"re", "im", "class"});
  for (const auto& q : criticals) {
    json entry = {{"q", std::vector<double>(q.data(), q.data() + q.size())}};
    try {
      PotentialModes modes = potential_modes(V, q);
      json evs = json::array();
      for (Eigen::Index i = 0; i < modes.eig.eigenvalues.size(); ++i) {
        double ev = modes.eig.eigenvalues[i];
        std::string cls = ev > 1e-10 ? "attracting" : (ev < -1e-10 ? "repelling" : "neutral");
        csv.row({cell(ev), cell(0.0), cls});
        evs.push_back(ev);
      }
      entry["modes"] = evs;
      entry["softest"] = modes.softest;
    } catch (const NotCritical&) {
      entry["modes"] = nullptr;
    }
    list.push_back(entry);
  }
  summary["critical_points"] = list;
  return summary;
}

json run_nbody(const RunConfig& cfg, OutputSet& out) {
  require_keys(cfg.params, {"kind", "out", "seed", "threads", "c", "random"}, "config");
  std::vector<std::vector<Rational>> trials;
  if (cfg.params.contains("c")) {
    std::vector<Rational> c;
    for (const auto& v : cfg.params.at("c")) c.push_back(rational_field(v, "c"));
    trials.push_back(std::move(c));
  } else if (cfg.params.contains("random")) {
    const auto& rj = cfg.params.at("random");
    require_keys(rj, {"count", "low", "high", "trials"}, "random");
    int count = rj.at("count").get<int>();
    double low = double_field(rj.at("low"), "random.low");
    double high = double_field(rj.at("high"), "random.high");
    int ntrials = rj.value("trials", 1);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(low, high);
    for (int t = 0; t < ntrials; ++t) {
      std::vector<Rational> c;
      for (int i = 0; i < count; ++i) c.push_back(rational_field(json(u(rng)), "random"));
      trials.push_back(std::move(c));
    }
  } else {
    throw ConfigError("nbody needs 'c' or 'random'");
  }

  CsvWriter csv(out.file("spectrum.csv"), {"re", "im", "class"});
  bool all_interlaced = true, all_zero = true;
  for (const auto& c : trials) {
    ArrowheadSpec spec{c};
    arrowhead_charpoly(c);  // raises InternalMismatch if the two routes split
    ArrowheadReport rep = arrowhead_eigs(spec);
    all_interlaced = all_interlaced && rep.interlacing;
    all_zero = all_zero && rep.zero_present;
    for (Eigen::Index i = 0; i < rep.eig.eigenvalues.size(); ++i) {
      double ev = rep.eig.eigenvalues[i];
      csv.row({cell(ev), cell(0.0), std::abs(ev) <= 1e-10 ? "zero" : "positive"});
    }
  }
  return json{{"kind", "nbody"},
              {"trials", trials.size()},
              {"interlacing", all_interlaced},
              {"zero_eigenvalue", all_zero}};
}

json run_trinomial(const RunConfig& cfg, OutputSet& out) {
  require_keys(cfg.params, {"kind", "out", "seed", "threads", "alpha_re", "alpha_im", "m",
                            "theta"},
               "config");
  std::complex<double> alpha(double_field(cfg.params.at("alpha_re"), "alpha_re"),
                             double_field(cfg.params.at("alpha_im"), "alpha_im"));
  int m = cfg.params.at("m").get<int>();
  std::vector<double> thetas = cfg.params.contains("theta")
                                   ? grid_from_json(cfg.params.at("theta"), "theta")
                                   : grid_from_json(json{{"min", 0.01},
                                                         {"max", 2 * kPi - 0.01},
                                                         {"points", 512}},
                                                    "theta");
  TrinomialReport rep = trinomial_analysis(alpha, m, thetas);
  {
    CsvWriter csv(out.file("spectrum.csv"), {"re", "im", "class"});
    auto cls = [](std::complex<double> mu) {
      double a = std::abs(mu);
      return a < 1 - 1e-6 ? "attracting" : (a > 1 + 1e-6 ? "repelling" : "neutral");
    };
    csv.row({cell(rep.multiplier_origin.real()), cell(rep.multiplier_origin.imag()),
             cls(rep.multiplier_origin)});
    csv.row({cell(rep.multiplier_outer.real()), cell(rep.multiplier_outer.imag()),
             cls(rep.multiplier_outer)});
  }
  {
    CsvWriter csv(out.file("polar.csv"), {"theta", "rho", "s", "dchi_dtheta"});
    for (const auto& sample : rep.polar)
      csv.row({cell(sample.theta), cell(sample.rho), cell(sample.s), cell(sample.dchi_dtheta)});
  }
  json fps = json::array();
  for (const auto& z : rep.fixed_points) fps.push_back({z.real(), z.imag()});
  return json{{"kind", "trinomial"},
              {"m", m},
              {"fixed_points", fps},
              {"polar_samples", rep.polar.size()}};
}

json run_boundary(const RunConfig& cfg, OutputSet& out) {
  require_keys(cfg.params,
               {"kind", "out", "seed", "threads", "m", "s", "alpha_re", "alpha_im", "orbit_check"},
               "config");
  int m = cfg.params.at("m").get<int>();
  double s = double_field(cfg.params.at("s"), "s");
  auto re = grid_from_json(cfg.params.at("alpha_re"), "alpha_re");
  auto im = grid_from_json(cfg.params.at("alpha_im"), "alpha_im");
  BoundaryRaster raster =
      escape_boundary({re.front(), im.front()}, {re.back(), im.back()},
                      static_cast<int>(re.size()), static_cast<int>(im.size()), m, s,
                      cfg.threads);
  auto cls_name = [](CellClass c) {
    switch (c) {
      case CellClass::Bounded: return "bounded";
      case CellClass::Divergent: return "divergent";
      case CellClass::Boundary: return "boundary";
      default: return "no-saddle";
    }
  };
  long counts[4] = {0, 0, 0, 0};
  {
    CsvWriter csv(out.file("raster.csv"), {"alpha_re", "alpha_im", "mu_abs", "class"});
    for (size_t i = 0; i < raster.cells.size(); ++i) {
      csv.row({cell(raster.alpha_re[i]), cell(raster.alpha_im[i]), cell(raster.mu_abs[i]),
               cls_name(raster.cells[i])});
      ++counts[static_cast<int>(raster.cells[i])];
    }
  }
  json summary = {{"kind", "boundary"},
                  {"bounded", counts[0]},
                  {"divergent", counts[1]},
                  {"boundary", counts[2]},
                  {"no_saddle", counts[3]}};

  if (cfg.params.value("orbit_check", false)) {
    // Direct-orbit comparison raster: iterate z -> alpha z + z^m / m from a
    // small start and record escape.
    CsvWriter csv(out.file("raster_orbit.csv"), {"alpha_re", "alpha_im", "escaped"});
    for (size_t i = 0; i < raster.cells.size(); ++i) {
      std::complex<double> alpha(raster.alpha_re[i], raster.alpha_im[i]);
      PolynomialC f = PolynomialC({std::complex<double>(0, 0), alpha}) +
                      PolynomialC::monomial(m, std::complex<double>(1.0 / m, 0));
      Trajectory traj = iterate_map(f, std::complex<double>(0.1, 0.1), 0, 400, 1e3);
      csv.row({cell(raster.alpha_re[i]), cell(raster.alpha_im[i]),
               std::to_string(traj.escaped ? 1 : 0)});
    }
  }
  return summary;
}

json run_fredholm(const RunConfig& cfg, OutputSet& out) {
  require_keys(cfg.params, {"kind", "out", "seed", "threads", "matrix", "point", "t"}, "config");
  const auto& mj = cfg.params.at("matrix");
  int d = static_cast<int>(mj.size());
  std::vector<MultiPolyQ> comps;
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(mj[static_cast<size_t>(i)].size()) != d)
      throw ConfigError("matrix must be square");
    MultiPolyQ row(d);
    for (int j = 0; j < d; ++j) {
      Rational a = rational_field(mj[static_cast<size_t>(i)][static_cast<size_t>(j)], "matrix");
      if (a != 0) {
        std::vector<int> e(static_cast<size_t>(d), 0);
        e[static_cast<size_t>(j)] = 1;
        row.add_term(e, a);
      }
    }
    comps.push_back(std::move(row));
  }
  VectorFieldSystem field(d, std::move(comps), "linear");
  Eigen::VectorXd point(d);
  for (int i = 0; i < d; ++i)
    point[i] = double_field(cfg.params.at("point")[static_cast<size_t>(i)], "point");

  SpectralReport rep = jacobian_spectrum(field, point);
  CsvWriter csv(out.file("spectrum.csv"), {"re", "im", "class"});
  spectrum_rows(csv, rep);

  json summary = {{"kind", "fredholm"}, {"fredholm_times", rep.fredholm_times}};
  if (cfg.params.contains("t")) {
    json results = json::array();
    std::vector<double> ts;
    if (cfg.params.at("t").is_array())
      for (const auto& tv : cfg.params.at("t")) ts.push_back(double_field(tv, "t"));
    else
      ts.push_back(double_field(cfg.params.at("t"), "t"));
    for (double t : ts) {
      json entry = {{"t", t}};
      try {
        Eigen::VectorXd s = fredholm_particular(field, point, t);
        Eigen::VectorXd resid =
            (Eigen::MatrixXd::Identity(d, d) + t * rep.jacobian) * s - point.cwiseInverse();
        entry["s"] = std::vector<double>(s.data(), s.data() + s.size());
        entry["residual"] = resid.norm();
      } catch (const Error& e) {
        entry["error"] = e.name();
      }
      results.push_back(entry);
    }
    summary["solutions"] = results;
  }
  return summary;
}

}  // namespace

std::string version_string() { return "lab 1.0.0"; }

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

RunConfig RunConfig::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  if (!doc.contains("kind") || !doc.at("kind").is_string())
    throw ConfigError("configuration needs a string 'kind'");
  RunConfig cfg;
  cfg.kind = doc.at("kind").get<std::string>();
  if (!kKinds.count(cfg.kind)) throw ConfigError("unknown kind '" + cfg.kind + "'");
  cfg.out_dir = doc.value("out", std::string("runs/") + cfg.kind);
  cfg.seed = doc.value("seed", 0ULL);
  cfg.threads = doc.value("threads", 1);
  if (cfg.threads < 1) throw ConfigError("threads must be positive");
  cfg.params = doc;
  return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return from_json(doc);
}

std::vector<Diagnostic> validate(const RunConfig& config) {
  std::vector<Diagnostic> out;
  const auto& p = config.params;
  auto warn = [&](const std::string& m) { out.push_back({Diagnostic::Level::Warning, m}); };
  auto error = [&](const std::string& m) { out.push_back({Diagnostic::Level::Error, m}); };

  try {
    if (config.kind == "zeros" || config.kind == "density" || config.kind == "compare") {
      if (p.contains("map")) {
        Map1D map = map_from_json(p.at("map"));
        Rational lam = map.multiplier();
        if (lam == 1 || lam == -1) {
          if (p.contains("pf"))
            error("Resonance: multiplier is a root of unity, the coefficient solve degenerates");
          else
            warn("multiplier on the unit circle: gap pivots 1 - lambda^m vanish");
        } else {
          double al = std::abs(to_double(lam));
          if (std::abs(al - 1.0) < 1e-6) warn("resonance-adjacent multiplier |lambda| near 1");
        }
      }
    }
    if (config.kind == "lorenz" && p.contains("rho")) {
      if (to_double(rational_field(p.at("rho"), "rho")) <= 1.0)
        warn("rho <= 1: fewer than three fixed points");
    }
    if (config.kind == "trinomial" && p.contains("alpha_re") && p.contains("alpha_im")) {
      double re = double_field(p.at("alpha_re"), "alpha_re");
      double im = double_field(p.at("alpha_im"), "alpha_im");
      if (std::abs(re - 1) < 1e-12 && std::abs(im) < 1e-12)
        error("DegenerateParameter: alpha = 1 collapses the fixed points");
    }
    if (p.contains("grid")) grid_from_json(p.at("grid"), "grid");
  } catch (const Error& e) {
    error(e.what());
  }
  return out;
}

RunManifest run(const RunConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  OutputSet out(config.out_dir);
  json summary;
  if (config.kind == "zeros") summary = run_zeros(config, out);
  else if (config.kind == "density") summary = run_density(config, out);
  else if (config.kind == "iterate") summary = run_iterate(config, out);
  else if (config.kind == "compare") summary = run_compare(config, out);
  else if (config.kind == "lorenz") summary = run_lorenz(config, out);
  else if (config.kind == "rossler") summary = run_rossler(config, out);
  else if (config.kind == "hamiltonian") summary = run_hamiltonian(config, out);
  else if (config.kind == "nbody") summary = run_nbody(config, out);
  else if (config.kind == "trinomial") summary = run_trinomial(config, out);
  else if (config.kind == "boundary") summary = run_boundary(config, out);
  else if (config.kind == "fredholm") summary = run_fredholm(config, out);
  else throw ConfigError("unknown kind '" + config.kind + "'");
  summary["seed"] = config.seed;
  out.write_summary(summary);
  double wall =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out.finish(config, wall);
}

}  // namespace lab
