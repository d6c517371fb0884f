#include "curvflow/app.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <type_traits>

#include <CLI11.hpp>
#include <toml.hpp>

#include "curvflow/constructions.hpp"
#include "curvflow/diagnostics.hpp"
#include "curvflow/flow.hpp"
#include "curvflow/io.hpp"

namespace curvflow::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Field tables: one entry per TOML key / command-line flag.

template <class V>
void fields(ConstructOptions& o, V&& v) {
  v("example", o.example, "catenoid_capped | elliptic_torus | paraboloid_capped | sphere");
  v("n_samples", o.n_samples, "profile samples");
  v("a", o.a, "neck half-height (capped examples)");
  v("b", o.b, "pole height (capped examples)");
  v("epsilon", o.epsilon, "bending weight width");
  v("radius", o.radius, "sphere radius");
  v("dim", o.dim, "hypersurface dimension n (sphere)");
}

template <class V>
void fields(EvolveOptions& o, V&& v) {
  v("profile", o.profile, "profile CSV written by construct");
  v("example", o.example, "build a construct example instead of reading a profile");
  v("n_samples", o.n_samples, "profile samples (example input)");
  v("a", o.a, "neck half-height (example input)");
  v("b", o.b, "pole height (example input)");
  v("epsilon", o.epsilon, "bending weight width (example input)");
  v("radius", o.radius, "sphere radius (example input)");
  v("dim", o.dim, "sphere dimension (example input)");
  v("scale", o.scale, "dilation applied to the input");
  v("variant", o.variant, "vp | ap | mcf");
  v("t_end", o.t_end, "final time");
  v("dt_max", o.dt_max, "largest time step");
  v("cfl", o.cfl, "explicit stability factor");
  v("regrid_every", o.regrid_every, "steps between arclength regrids, 0 = never");
  v("projection", o.projection, "restore the conserved quantity after each step");
  v("drift_tol", o.drift_tol, "allowed relative drift of the conserved quantity");
  v("record_every", o.record_every, "steps between recorded states");
  v("crossing_floor", o.crossing_floor, "a minimum below -floor counts as a sign change");
  v("stencil_order", o.stencil_order, "finite-difference order 4, 6 or 8; 0 keeps the input's");
  v("save_profiles", o.save_profiles, "write a profile CSV per recorded state");
}

template <class V>
void fields(VerifyOptions& o, V&& v) {
  v("torus_samples", o.torus_samples, "torus grid size");
  v("paraboloid_samples", o.paraboloid_samples, "capped paraboloid grid size");
  v("neck_points", o.neck_points, "dense neck samples for the identities");
  v("a", o.a, "neck half-height");
  v("b", o.b, "pole height");
  v("epsilon", o.epsilon, "bending weight width");
  v("tolerance", o.tolerance, "replace every check tolerance");
}

template <class V>
void fields(PerturbOptions& o, V&& v) {
  v("profile", o.profile, "profile CSV instead of an example");
  v("example", o.example, "catenoid_capped | elliptic_torus");
  v("s", o.s, "pre-flow times");
  v("variants", o.variants, "constrained flows to run after the pre-flow");
  v("n_samples", o.n_samples, "profile samples");
  v("a", o.a, "neck half-height");
  v("b", o.b, "pole height");
  v("epsilon", o.epsilon, "bending weight width");
  v("scale", o.scale, "dilation applied before the pre-flow");
  v("t_end", o.t_end, "duration of the constrained runs");
  v("dt_max", o.dt_max, "largest time step");
  v("cfl", o.cfl, "explicit stability factor");
  v("regrid_every", o.regrid_every, "steps between arclength regrids");
  v("stencil_order", o.stencil_order, "finite-difference order 4, 6 or 8");
  v("crossing_floor", o.crossing_floor, "a minimum below -floor counts as a sign change");
}

const char* section(const ConstructOptions&) { return "construct"; }
const char* section(const EvolveOptions&) { return "evolve"; }
const char* section(const VerifyOptions&) { return "verify"; }
const char* section(const PerturbOptions&) { return "perturb"; }

template <class T>
struct Unwrap {
  using type = T;
};
template <class T>
struct Unwrap<std::optional<T>> {
  using type = T;
};
template <class T>
struct IsOptional : std::false_type {};
template <class T>
struct IsOptional<std::optional<T>> : std::true_type {};
template <class T>
struct IsVector : std::false_type {};
template <class T>
struct IsVector<std::vector<T>> : std::true_type {};

// ---------------------------------------------------------------------------
// TOML reading

template <class T>
T read_scalar(const toml::node& node, const std::string& key) {
  auto fail = [&](const char* what) { throw ConfigError("key '" + key + "' must be " + what); };
  if constexpr (std::is_same_v<T, std::string>) {
    if (!node.is_string()) fail("a string");
    return *node.value<std::string>();
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!node.is_boolean()) fail("a boolean");
    return *node.value<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!node.is_integer()) fail("an integer");
    const auto v = *node.value<std::int64_t>();
    if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max()) fail("in range");
    return static_cast<T>(v);
  } else {
    if (node.is_integer()) return static_cast<T>(*node.value<std::int64_t>());
    if (!node.is_floating_point()) fail("a number");
    return *node.value<double>();
  }
}

template <class F>
void read_field(const toml::node& node, const std::string& key, F& field) {
  using T = typename Unwrap<F>::type;
  if constexpr (IsVector<T>::value) {
    const auto* arr = node.as_array();
    if (!arr) throw ConfigError("key '" + key + "' must be an array");
    T out;
    for (const auto& el : *arr) out.push_back(read_scalar<typename T::value_type>(el, key));
    field = std::move(out);
  } else {
    field = read_scalar<T>(node, key);
  }
}

const std::vector<std::string> kSections{"construct", "evolve", "verify", "perturb"};

template <class Opts>
void apply_table(const toml::table& root, Opts& o) {
  for (const auto& [k, node] : root) {
    const std::string key(k.str());
    if (key == "out") {
      if (!node.is_string()) throw ConfigError("key 'out' must be a string");
      continue;
    }
    if (std::find(kSections.begin(), kSections.end(), key) == kSections.end())
      throw ConfigError("unknown section or key '" + key + "'");
    if (!node.is_table()) throw ConfigError("'" + key + "' must be a table");
  }
  const auto* tbl = root[section(o)].as_table();
  if (!tbl) return;
  for (const auto& [k, node] : *tbl) {
    const std::string key(k.str());
    bool known = false;
    fields(o, [&](const char* name, auto& field, const char*) {
      if (key != name) return;
      known = true;
      read_field(node, key, field);
    });
    if (!known) throw ConfigError("unknown key '" + key + "' in [" + section(o) + "]");
  }
}

toml::table parse_text(const std::string& text, const std::string& source) {
  try {
    return toml::parse(text, std::string_view(source));
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source << ": " << e.description() << " at line " << e.source().begin.line;
    throw ConfigError(msg.str());
  }
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class Opts>
void load_file(const fs::path& file, Opts& o) {
  apply_table(parse_text(read_file(file), file.string()), o);
}

template <class Opts>
void load_text(const std::string& text, Opts& o) {
  apply_table(parse_text(text, "<config>"), o);
}

// ---------------------------------------------------------------------------
// TOML writing

std::string toml_value(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}
std::string toml_value(bool b) { return b ? "true" : "false"; }
std::string toml_value(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  std::string s = io::format_double(d);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}
std::string toml_value(int v) { return std::to_string(v); }
std::string toml_value(long v) { return std::to_string(v); }
template <class T>
std::string toml_value(const std::vector<T>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + toml_value(v[i]);
  return out + "]";
}

template <class Opts>
std::string to_toml(Opts o) {
  std::string out = std::string("[") + section(o) + "]\n";
  fields(o, [&](const char* name, auto& field, const char*) {
    using F = std::decay_t<decltype(field)>;
    if constexpr (IsOptional<F>::value) {
      if (field) out += std::string(name) + " = " + toml_value(*field) + "\n";
    } else if constexpr (std::is_same_v<F, std::string>) {
      if (!field.empty()) out += std::string(name) + " = " + toml_value(field) + "\n";
    } else {
      out += std::string(name) + " = " + toml_value(field) + "\n";
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Run directories

std::uint64_t fnv1a(const std::string& data, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

fs::path make_run_dir(const fs::path& root, const std::string& command, const std::string& label,
                      const std::string& fingerprint) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(fingerprint)));
  const fs::path dir = root / (command + "-" + label + "-" + std::string(hex, 12));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// ---------------------------------------------------------------------------
// Inputs

const std::vector<std::string> kExamples{"catenoid_capped", "elliptic_torus", "paraboloid_capped", "sphere"};

void require_example(const std::string& name) {
  if (std::find(kExamples.begin(), kExamples.end(), name) == kExamples.end())
    throw ConfigError("unknown example '" + name + "'");
}

long default_samples(const std::string& example) {
  if (example == "elliptic_torus") return 1024;
  if (example == "sphere") return 257;
  return 1025;
}

std::size_t sample_count(long n) {
  if (n < 8) throw ConfigError("n_samples must be at least 8");
  return static_cast<std::size_t>(n);
}

Construction build(const std::string& example, long n, double a, double b, double epsilon, double radius, int dim) {
  const auto samples = sample_count(n);
  if (example == "elliptic_torus") return elliptic_torus(samples);
  if (example == "sphere") return round_sphere(radius, dim, samples);
  BendingParams bp;
  bp.epsilon = epsilon;
  const auto bf = bending_function(a, b, bp);
  if (example == "catenoid_capped") return capped_catenoid(a, b, bf, samples);
  return capped_paraboloid(a, b, bf, samples);
}

json state_json(const FlowState& s) {
  return {{"t", s.t},       {"h", s.h},         {"area", s.area},   {"volume", s.volume},
          {"min_H", s.min_H}, {"min_H_u", s.min_H_u}, {"min_R", s.min_R}, {"max_A2", s.max_A2}};
}

// ---------------------------------------------------------------------------
// Command-line plumbing

std::string dashed(const char* key) {
  std::string s(key);
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

template <class Opts>
void add_flags(CLI::App* sub, Opts& o, std::vector<std::function<void()>>& overrides) {
  fields(o, [&](const char* name, auto& field, const char* help) {
    using T = typename Unwrap<std::decay_t<decltype(field)>>::type;
    auto holder = std::make_shared<T>();
    CLI::Option* opt = sub->add_option("--" + dashed(name), *holder, help);
    if constexpr (IsVector<T>::value) opt->delimiter(',');
    overrides.push_back([holder, opt, &field] {
      if (opt->count() > 0) field = *holder;
    });
  });
}

fs::path output_root(const std::string& flag, const std::optional<fs::path>& config) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("CURVFLOW_OUT"); env && *env) return env;
  if (config) {
    const auto root = parse_text(read_file(*config), config->string());
    if (const auto out = root["out"].value<std::string>()) return *out;
  }
  return "runs";
}

}  // namespace

// ---------------------------------------------------------------------------

void resolve(ConstructOptions& o) {
  require_example(o.example);
  if (!o.n_samples) o.n_samples = default_samples(o.example);
  sample_count(*o.n_samples);
}

void resolve(EvolveOptions& o) {
  if (o.profile.empty() == o.example.empty()) throw ConfigError("evolve needs exactly one of profile or example");
  if (!o.example.empty()) {
    require_example(o.example);
    if (!o.n_samples) o.n_samples = default_samples(o.example);
  }
  try {
    flow_variant_from_string(o.variant);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(o.scale > 0.0)) throw ConfigError("scale must be positive");
}

void resolve(VerifyOptions& o) {
  if (o.torus_samples < 16 || o.paraboloid_samples < 16 || o.neck_points < 3)
    throw ConfigError("verify grids are too small");
  if (o.tolerance && !(*o.tolerance >= 0.0)) throw ConfigError("tolerance must be non-negative");
}

void resolve(PerturbOptions& o) {
  const bool catenoid = o.profile.empty() && o.example == "catenoid_capped";
  if (o.profile.empty() && !catenoid && o.example != "elliptic_torus")
    throw ConfigError("perturb example must be catenoid_capped or elliptic_torus");
  if (!o.profile.empty()) o.example.clear();
  if (o.profile.empty() && !o.n_samples) o.n_samples = default_samples(o.example);
  if (catenoid) {
    // Longer neck and sharper bending onset than the construct defaults, shrunk
    // so that the pre-flow times act over a useful range of rescaled time.
    if (!o.a) o.a = 1.5;
    if (!o.b) o.b = 3.5;
    if (!o.epsilon) o.epsilon = 1.0;
    if (!o.scale) o.scale = 0.03;
    if (!o.t_end) o.t_end = 1e-5;
    if (!o.dt_max) o.dt_max = 1.0;
    if (!o.regrid_every) o.regrid_every = 100;
    if (!o.stencil_order) o.stencil_order = 8;
    if (!o.crossing_floor) o.crossing_floor = 1e-7;
  } else {
    if (!o.scale) o.scale = 1.0;
    if (!o.t_end) o.t_end = 0.05;
    if (!o.dt_max) o.dt_max = 1e-5;
    if (!o.regrid_every) o.regrid_every = 0;
    if (!o.stencil_order) o.stencil_order = o.profile.empty() ? 4 : 0;
    if (!o.crossing_floor) o.crossing_floor = 1e-8;
  }
  if (o.s.empty()) throw ConfigError("perturb needs at least one pre-flow time");
  for (double s : o.s)
    if (!(s >= 0.0)) throw ConfigError("pre-flow times must be non-negative");
  if (o.variants.empty()) throw ConfigError("perturb needs at least one variant");
  for (const auto& v : o.variants) {
    try {
      flow_variant_from_string(v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (!(*o.scale > 0.0)) throw ConfigError("scale must be positive");
}

void load_config(const fs::path& file, ConstructOptions& o) { load_file(file, o); }
void load_config(const fs::path& file, EvolveOptions& o) { load_file(file, o); }
void load_config(const fs::path& file, VerifyOptions& o) { load_file(file, o); }
void load_config(const fs::path& file, PerturbOptions& o) { load_file(file, o); }
void load_config_text(const std::string& text, ConstructOptions& o) { load_text(text, o); }
void load_config_text(const std::string& text, EvolveOptions& o) { load_text(text, o); }
void load_config_text(const std::string& text, VerifyOptions& o) { load_text(text, o); }
void load_config_text(const std::string& text, PerturbOptions& o) { load_text(text, o); }

std::string resolved_toml(const ConstructOptions& o) { return to_toml(o); }
std::string resolved_toml(const EvolveOptions& o) { return to_toml(o); }
std::string resolved_toml(const VerifyOptions& o) { return to_toml(o); }
std::string resolved_toml(const PerturbOptions& o) { return to_toml(o); }

RunResult cmd_construct(ConstructOptions o, const fs::path& root) {
  resolve(o);
  const std::string config = resolved_toml(o);
  const auto c = build(o.example, *o.n_samples, o.a, o.b, o.epsilon, o.radius, o.dim);
  RunResult res{make_run_dir(root, "construct", o.example, config), c.certificate.passed()};
  io::write_text(res.dir / "config.resolved.toml", config);
  io::write_profile(res.dir / "profile.csv", c.profile);
  io::write_curvature(res.dir / "curvature.csv", c.profile);
  io::write_checks(res.dir / "checks.csv", c.certificate);
  io::write_json(res.dir / "report.json", {{"command", "construct"},
                                           {"example", o.example},
                                           {"certified", res.passed},
                                           {"certificate", io::to_json(c.certificate)}});
  return res;
}

RunResult cmd_evolve(EvolveOptions o, const fs::path& root) {
  resolve(o);
  const std::string config = resolved_toml(o);
  std::string fingerprint = config;
  GeneratingProfile input = [&] {
    if (!o.example.empty())
      return build(o.example, *o.n_samples, o.a, o.b, o.epsilon, o.radius, o.dim).require_certified();
    fingerprint += read_file(o.profile);
    fingerprint += read_file(fs::path(o.profile).replace_extension(".json"));
    return io::read_profile(o.profile);
  }();
  if (o.scale != 1.0) input = dilate(input, o.scale);

  FlowConfig fc;
  fc.variant = flow_variant_from_string(o.variant);
  fc.t_end = o.t_end;
  fc.dt_max = o.dt_max;
  fc.cfl = o.cfl;
  fc.regrid_every = o.regrid_every;
  fc.projection = o.projection;
  fc.drift_tol = o.drift_tol;
  fc.record_every = o.record_every;
  fc.crossing_floor = o.crossing_floor;
  fc.stencil_order = o.stencil_order;
  fc.validate();

  const std::string label = o.example.empty() ? fs::path(o.profile).stem().string() : o.example;
  const fs::path dir = make_run_dir(root, "evolve", label, fingerprint);
  io::write_text(dir / "config.resolved.toml", config);
  const auto traj = run(input, fc);
  const auto& rep = traj.report;
  io::write_trajectory(dir / "trajectory.csv", traj);
  io::write_profile(dir / "final_profile.csv", traj.states.back().profile);
  if (o.save_profiles) {
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "state_%05zu.csv", i);
      io::write_profile(dir / "profiles" / name, traj.states[i].profile);
    }
  }
  const double drift = rep.conserved_drift(fc.variant);
  const bool drift_ok = fc.variant == FlowVariant::Unconstrained || !fc.projection || drift <= fc.drift_tol;
  RunResult res{dir, rep.completed() && drift_ok};
  io::write_json(dir / "report.json", {{"command", "evolve"},
                                       {"input", label},
                                       {"variant", to_string(fc.variant)},
                                       {"initial", state_json(traj.states.front())},
                                       {"final", state_json(traj.states.back())},
                                       {"terminal", io::to_json(rep)},
                                       {"conserved_drift", drift},
                                       {"drift_ok", drift_ok},
                                       {"passed", res.passed}});
  return res;
}

RunResult cmd_verify(VerifyOptions o, const fs::path& root) {
  resolve(o);
  const std::string config = resolved_toml(o);
  VerifyConfig vc;
  vc.torus_samples = static_cast<std::size_t>(o.torus_samples);
  vc.paraboloid_samples = static_cast<std::size_t>(o.paraboloid_samples);
  vc.neck_points = static_cast<std::size_t>(o.neck_points);
  vc.a = o.a;
  vc.b = o.b;
  vc.bending.epsilon = o.epsilon;
  vc.tolerance = o.tolerance;
  const auto report = verify(vc);
  RunResult res{make_run_dir(root, "verify", "suite", config), report.passed()};
  io::write_text(res.dir / "config.resolved.toml", config);
  io::write_checks(res.dir / "checks.csv", report);
  auto j = io::to_json(report);
  j["command"] = "verify";
  io::write_json(res.dir / "report.json", j);
  return res;
}

RunResult cmd_perturb(PerturbOptions o, const fs::path& root) {
  resolve(o);
  const std::string config = resolved_toml(o);
  std::string fingerprint = config;
  GeneratingProfile input = [&] {
    if (o.profile.empty())
      return build(o.example, *o.n_samples, o.a.value_or(1.0), o.b.value_or(2.0), o.epsilon.value_or(2.0), 1.0, 2)
          .require_certified();
    fingerprint += read_file(o.profile);
    fingerprint += read_file(fs::path(o.profile).replace_extension(".json"));
    return io::read_profile(o.profile);
  }();
  if (*o.scale != 1.0) input = dilate(input, *o.scale);

  PerturbationConfig pc;
  pc.s_list = o.s;
  pc.variants.clear();
  for (const auto& v : o.variants) pc.variants.push_back(flow_variant_from_string(v));
  FlowConfig fc;
  fc.dt_max = *o.dt_max;
  fc.cfl = o.cfl;
  fc.regrid_every = *o.regrid_every;
  fc.stencil_order = *o.stencil_order;
  fc.crossing_floor = *o.crossing_floor;
  fc.record_every = std::numeric_limits<int>::max();
  pc.preflow = fc;
  pc.flow = fc;
  pc.flow.t_end = *o.t_end;
  pc.flow.validate();

  const std::string label = o.profile.empty() ? o.example : fs::path(o.profile).stem().string();
  const fs::path dir = make_run_dir(root, "perturb", label, fingerprint);
  io::write_text(dir / "config.resolved.toml", config);
  io::write_profile(dir / "profile.csv", input);
  const auto report = perturbation_experiment(input, pc);
  for (std::size_t i = 0; i < pc.variants.size(); ++i)
    io::write_perturbation(dir / ("perturbation_" + o.variants[i] + ".csv"), report, pc.variants[i]);
  auto j = io::to_json(report);
  j["command"] = "perturb";
  j["input"] = label;
  io::write_json(dir / "report.json", j);
  return {dir, report.passed()};
}

int main(int argc, char** argv) {
  CLI::App cli{"Constrained mean curvature flow of rotationally symmetric hypersurfaces"};
  cli.require_subcommand(1);
  std::string out_flag;
  cli.add_option("--out", out_flag, "output root (default: $CURVFLOW_OUT, then config 'out', then ./runs)");

  ConstructOptions construct;
  EvolveOptions evolve;
  VerifyOptions verify_opts;
  PerturbOptions perturb;
  std::vector<std::function<void()>> overrides;
  std::string config_file, positional;

  auto* c_cmd = cli.add_subcommand("construct", "build and certify an example profile");
  c_cmd->add_option("name", positional, "example name");
  add_flags(c_cmd, construct, overrides);
  auto* e_cmd = cli.add_subcommand("evolve", "run one flow");
  e_cmd->add_option("input", positional, "profile CSV");
  add_flags(e_cmd, evolve, overrides);
  auto* v_cmd = cli.add_subcommand("verify", "run the diagnostics suite");
  add_flags(v_cmd, verify_opts, overrides);
  auto* p_cmd = cli.add_subcommand("perturb", "pre-flow perturbation study");
  add_flags(p_cmd, perturb, overrides);
  for (auto* sub : {c_cmd, e_cmd, v_cmd, p_cmd}) sub->add_option("--config", config_file, "TOML config file");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e);
  }

  try {
    std::optional<fs::path> cfg;
    if (!config_file.empty()) cfg = config_file;
    auto prepare = [&](auto& opts, std::string* positional_target) {
      if (cfg) load_config(*cfg, opts);
      if (positional_target && !positional.empty()) *positional_target = positional;
      for (auto& f : overrides) f();
    };
    const fs::path root = output_root(out_flag, cfg);
    RunResult res;
    if (c_cmd->parsed()) {
      prepare(construct, &construct.example);
      res = cmd_construct(construct, root);
    } else if (e_cmd->parsed()) {
      prepare(evolve, &evolve.profile);
      res = cmd_evolve(evolve, root);
    } else if (v_cmd->parsed()) {
      prepare(verify_opts, nullptr);
      res = cmd_verify(verify_opts, root);
    } else {
      prepare(perturb, nullptr);
      res = cmd_perturb(perturb, root);
    }
    std::cout << res.dir.string() << '\n' << (res.passed ? "PASS" : "FAIL") << '\n';
    return res.passed ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace curvflow::app
