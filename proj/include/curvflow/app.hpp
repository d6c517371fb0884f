#pragma once

// Command layer behind the curvflow executable. Each command has an options
// struct whose fields double as TOML keys and command-line flags.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvflow::app {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConstructOptions {
  std::string example = "elliptic_torus";  ///< catenoid_capped, elliptic_torus, paraboloid_capped, sphere
  std::optional<long> n_samples;           ///< per-example default when unset
  double a = 1.0;
  double b = 2.0;
  double epsilon = 2.0;
  double radius = 1.0;  ///< sphere only
  int dim = 2;          ///< sphere only
};

struct EvolveOptions {
  std::string profile;  ///< path to a profile CSV; exclusive with example
  std::string example;
  std::optional<long> n_samples;
  double a = 1.0;
  double b = 2.0;
  double epsilon = 2.0;
  double radius = 1.0;
  int dim = 2;
  double scale = 1.0;  ///< dilation applied to the input
  std::string variant = "vp";
  double t_end = 0.05;
  double dt_max = 1e-5;
  double cfl = 0.8;
  int regrid_every = 0;
  bool projection = true;
  double drift_tol = 1e-6;
  int record_every = 100;
  double crossing_floor = 1e-8;
  int stencil_order = 0;
  bool save_profiles = false;  ///< one profile CSV per recorded state
};

struct VerifyOptions {
  long torus_samples = 1024;
  long paraboloid_samples = 1025;
  long neck_points = 201;
  double a = 1.0;
  double b = 2.0;
  double epsilon = 2.0;
  std::optional<double> tolerance;
};

/// Unset optionals take example-dependent defaults (see resolve()).
struct PerturbOptions {
  std::string profile;
  std::string example = "catenoid_capped";  ///< catenoid_capped or elliptic_torus
  std::vector<double> s{0.0, 1e-4, 1e-3};
  std::vector<std::string> variants{"vp", "ap"};
  std::optional<long> n_samples;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> epsilon;
  std::optional<double> scale;
  std::optional<double> t_end;
  std::optional<double> dt_max;
  double cfl = 0.8;
  std::optional<int> regrid_every;
  std::optional<int> stencil_order;
  std::optional<double> crossing_floor;
};

void resolve(ConstructOptions& o);
void resolve(EvolveOptions& o);
void resolve(VerifyOptions& o);
void resolve(PerturbOptions& o);

/// Overlay the keys of one `[section]` of a TOML file. Unknown sections and
/// keys, and values of the wrong type, raise ConfigError.
void load_config(const std::filesystem::path& file, ConstructOptions& o);
void load_config(const std::filesystem::path& file, EvolveOptions& o);
void load_config(const std::filesystem::path& file, VerifyOptions& o);
void load_config(const std::filesystem::path& file, PerturbOptions& o);
/// Same from TOML text (for tests).
void load_config_text(const std::string& text, ConstructOptions& o);
void load_config_text(const std::string& text, EvolveOptions& o);
void load_config_text(const std::string& text, VerifyOptions& o);
void load_config_text(const std::string& text, PerturbOptions& o);

/// `[section]` followed by one `key = value` line per set field.
std::string resolved_toml(const ConstructOptions& o);
std::string resolved_toml(const EvolveOptions& o);
std::string resolved_toml(const VerifyOptions& o);
std::string resolved_toml(const PerturbOptions& o);

struct RunResult {
  std::filesystem::path dir;
  bool passed = false;
};

/// Each command resolves its options, writes into a fresh run directory
/// `<root>/<command>-<label>-<hash>` and reports overall pass/fail.
RunResult cmd_construct(ConstructOptions o, const std::filesystem::path& root);
RunResult cmd_evolve(EvolveOptions o, const std::filesystem::path& root);
RunResult cmd_verify(VerifyOptions o, const std::filesystem::path& root);
RunResult cmd_perturb(PerturbOptions o, const std::filesystem::path& root);

/// Entry point of the executable; returns the process exit status.
int main(int argc, char** argv);

}  // namespace curvflow::app
