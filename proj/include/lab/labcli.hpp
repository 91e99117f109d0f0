#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace lab {

/// Parsed experiment configuration. The JSON document is schema-checked on
/// load; equal configurations produce byte-identical data files.
struct RunConfig {
  std::string kind;
  std::filesystem::path out_dir;
  unsigned long long seed = 0;
  int threads = 1;
  nlohmann::json params;  // full normalized document, including the above

  static RunConfig from_json(const nlohmann::json& doc);
  static RunConfig from_file(const std::filesystem::path& path);
  nlohmann::json to_json() const { return params; }
};

struct Diagnostic {
  enum class Level { Warning, Error } level;
  std::string message;
};

/// Non-executing schema and range checks: resonance-adjacent multipliers,
/// Lorenz rho <= 1, trinomial alpha = 1, malformed grids.
std::vector<Diagnostic> validate(const RunConfig& config);

struct ManifestFile {
  std::string name;
  std::string hash;  // FNV-1a 64 over the bytes, hex
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  nlohmann::json config_echo;
  std::vector<ManifestFile> files;
  double wall_ms = 0;
  std::string version;
};

/// Dispatches the experiment, writes its CSV data files, summary.json and
/// manifest.json into the output directory. Refuses to reuse a directory that
/// already holds a manifest.
RunManifest run(const RunConfig& config);

std::string version_string();

/// 17-significant-digit, locale-independent formatting shared by every writer.
std::string format_double(double v);

}  // namespace lab
