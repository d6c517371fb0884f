#include "curvflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "curvflow/curvature.hpp"

namespace curvflow::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string topology_token(Topology t) { return t == Topology::Torus ? "torus" : "sphere"; }

Topology topology_from_string(const std::string& s) {
  if (s == "torus") return Topology::Torus;
  if (s == "sphere") return Topology::Sphere;
  throw IoError("unknown topology '" + s + "'");
}

std::string source_token(DerivativeSource s) {
  return s == DerivativeSource::Analytic ? "analytic" : "finite_difference";
}

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void write_row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format_double(v);
    first = false;
  }
  out << '\n';
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json crossing_json(const std::optional<Crossing>& c) {
  if (!c) return nullptr;
  return {{"t", c->t}, {"t_lo", c->t_lo}, {"t_hi", c->t_hi}, {"u", c->u}, {"z", c->z}, {"refined", c->refined}};
}

}  // namespace

void write_profile(const fs::path& csv, const GeneratingProfile& profile) {
  auto out = open_out(csv);
  out << "u,r,z\n";
  for (std::size_t i = 0; i < profile.size(); ++i) write_row(out, {profile.u()[i], profile.r()[i], profile.z()[i]});
  json side{{"n", profile.dim()},
            {"topology", topology_token(profile.topology())},
            {"derivative_source", source_token(profile.source())},
            {"stencil_order", profile.stencil_order()}};
  if (profile.topology() == Topology::Torus) side["period"] = profile.period();
  write_json(fs::path(csv).replace_extension(".json"), side);
}

GeneratingProfile read_profile(const fs::path& csv) {
  std::ifstream in(csv);
  if (!in) throw IoError("cannot read " + csv.string());
  const fs::path side_path = fs::path(csv).replace_extension(".json");
  std::ifstream side_in(side_path);
  if (!side_in) throw IoError("missing sidecar " + side_path.string());
  json side;
  try {
    side = json::parse(side_in);
  } catch (const json::exception& e) {
    throw IoError(side_path.string() + ": " + e.what());
  }
  std::string line;
  std::getline(in, line);
  if (line != "u,r,z") throw IoError(csv.string() + ": expected header 'u,r,z'");
  std::vector<double> u, r, z;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
      throw IoError(csv.string() + ": malformed row " + std::to_string(row));
    try {
      u.push_back(std::stod(a));
      r.push_back(std::stod(b));
      z.push_back(std::stod(c));
    } catch (const std::exception&) {
      throw IoError(csv.string() + ": non-numeric value in row " + std::to_string(row));
    }
  }
  try {
    const Topology topo = topology_from_string(side.at("topology").get<std::string>());
    std::optional<double> period;
    if (topo == Topology::Torus) period = side.at("period").get<double>();
    const int order = side.value("stencil_order", kDefaultStencilOrder);
    return GeneratingProfile::from_samples(side.at("n").get<int>(), topo, std::move(u), std::move(r), std::move(z),
                                           period, true, order);
  } catch (const json::exception& e) {
    throw IoError(side_path.string() + ": " + e.what());
  }
}

void write_curvature(const fs::path& csv, const GeneratingProfile& profile) {
  const auto f = curvature_field(profile);
  auto out = open_out(csv);
  out << "u,lambda1,lambda2,H,A2,C,R\n";
  for (std::size_t i = 0; i < f.size(); ++i)
    write_row(out, {profile.u()[i], f.lambda1[i], f.lambda2[i], f.H[i], f.A2[i], f.C[i], f.R[i]});
}

void write_trajectory(const fs::path& csv, const Trajectory& trajectory) {
  auto out = open_out(csv);
  out << "t,area,volume,h,minH,minR,maxA2\n";
  for (const auto& s : trajectory.states) write_row(out, {s.t, s.area, s.volume, s.h, s.min_H, s.min_R, s.max_A2});
}

json to_json(const DiagnosticReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks()) {
    json j{{"name", c.name},
           {"anchor", c.anchor},
           {"computed", number_or_null(c.computed)},
           {"target", number_or_null(c.target)},
           {"tolerance", c.tolerance},
           {"kind", to_string(c.kind)},
           {"pass", c.pass}};
    if (c.location) j["location"] = *c.location;
    checks.push_back(std::move(j));
  }
  return {{"passed", report.passed()}, {"checks", std::move(checks)}};
}

json to_json(const TerminalReport& r) {
  return {{"status", r.status},
          {"completed", r.completed()},
          {"t_final", r.t_final},
          {"steps", r.steps},
          {"dt", r.dt},
          {"volume_drift", number_or_null(r.volume_drift)},
          {"area_drift", number_or_null(r.area_drift)},
          {"max_projection", number_or_null(r.max_projection)},
          {"H_crossing", crossing_json(r.H_crossing)},
          {"R_crossing", crossing_json(r.R_crossing)}};
}

json to_json(const PerturbationReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json runs = json::array();
    for (const auto& r : row.runs)
      runs.push_back({{"variant", to_string(r.variant)},
                      {"status", r.status},
                      {"min_H_end", number_or_null(r.min_H_end)},
                      {"crossing", crossing_json(r.crossing)}});
    rows.push_back({{"s", row.s},
                    {"preflow_status", row.preflow_status},
                    {"min_H", number_or_null(row.min_H)},
                    {"min_H_u", row.min_H_u},
                    {"min_H_z", row.min_H_z},
                    {"strictly_mean_convex", row.strictly_mean_convex()},
                    {"pass", row.pass()},
                    {"runs", std::move(runs)}});
  }
  return {{"passed", report.passed()}, {"monotone", report.monotone()}, {"rows", std::move(rows)}};
}

void write_perturbation(const fs::path& csv, const PerturbationReport& report, FlowVariant variant) {
  auto out = open_out(csv);
  out << "s,minH_after_preflow,first_crossing_t\n";
  for (const auto& row : report.rows) {
    out << format_double(row.s) << ',' << format_double(row.min_H) << ',';
    for (const auto& r : row.runs)
      if (r.variant == variant && r.crossing) out << format_double(r.crossing->t);
    out << '\n';
  }
}

void write_checks(const fs::path& csv, const DiagnosticReport& report) {
  auto out = open_out(csv);
  out << "name,computed,target,tolerance,kind,pass\n";
  for (const auto& c : report.checks())
    out << c.name << ',' << format_double(c.computed) << ',' << format_double(c.target) << ','
        << format_double(c.tolerance) << ',' << to_string(c.kind) << ',' << (c.pass ? "true" : "false") << '\n';
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

}  // namespace curvflow::io
