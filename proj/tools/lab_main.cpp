#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "lab/errors.hpp"
#include "lab/labcli.hpp"

namespace {

int dispatch(const std::string& kind, const std::string& config_path, const std::string& out_dir,
             unsigned long long seed, bool seed_set, int threads, bool threads_set) {
  lab::RunConfig cfg = lab::RunConfig::from_file(config_path);
  if (kind != "validate" && cfg.kind != kind)
    throw lab::ConfigError("config kind '" + cfg.kind + "' does not match subcommand '" + kind +
                           "'");
  if (!out_dir.empty()) {
    cfg.out_dir = out_dir;
    cfg.params["out"] = out_dir;
  }
  if (seed_set) {
    cfg.seed = seed;
    cfg.params["seed"] = seed;
  }
  if (threads_set) {
    cfg.threads = threads;
    cfg.params["threads"] = threads;
  }

  if (kind == "validate") {
    auto diags = lab::validate(cfg);
    nlohmann::json report = nlohmann::json::array();
    for (const auto& d : diags)
      report.push_back({{"level", d.level == lab::Diagnostic::Level::Error ? "error" : "warning"},
                        {"message", d.message}});
    std::cout << report.dump(2) << std::endl;
    return 0;
  }

  lab::RunManifest manifest = lab::run(cfg);
  std::cout << "wrote " << manifest.files.size() << " files to " << cfg.out_dir.string() << " ("
            << manifest.wall_ms << " ms)" << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for iterated maps, saddle-point densities and flows"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  unsigned long long seed = 0;
  int threads = 1;

  std::vector<std::string> kinds = {"zeros",  "density", "iterate",     "compare",
                                    "lorenz", "rossler", "hamiltonian", "nbody",
                                    "trinomial", "boundary", "fredholm", "validate"};
  for (const auto& kind : kinds) {
    auto* sub = app.add_subcommand(kind);
    sub->add_option("--config", config_path, "path to the JSON experiment config")->required();
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--seed", seed, "random seed (overrides the config)");
    sub->add_option("--threads", threads, "worker threads for grid sweeps");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string kind = app.get_subcommands().front()->get_name();
  bool seed_set = app.get_subcommands().front()->count("--seed") > 0;
  bool threads_set = app.get_subcommands().front()->count("--threads") > 0;

  try {
    return dispatch(kind, config_path, out_dir, seed, seed_set, threads, threads_set);
  } catch (const lab::ConfigError& e) {
    std::cerr << e.what() << std::endl;
    return 2;
  } catch (const lab::Error& e) {
    std::cerr << e.what() << std::endl;
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "Error: " << e.what() << std::endl;
    return 3;
  }
}
