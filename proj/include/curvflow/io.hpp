#pragma once

// Plain-text serialization: CSV tables with %.17g numbers and JSON sidecars.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "curvflow/diagnostics.hpp"
#include "curvflow/flow.hpp"
#include "curvflow/profile.hpp"
#include "curvflow/report.hpp"

namespace curvflow::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest text that reads back to the same double (%.17g).
std::string format_double(double v);

std::string topology_token(Topology t);
Topology topology_from_string(const std::string& s);
std::string source_token(DerivativeSource s);

/// `u,r,z` rows plus `<stem>.json` with n, topology, derivative_source,
/// period (tori) and stencil_order.
void write_profile(const std::filesystem::path& csv, const GeneratingProfile& profile);
/// Reads a profile written by write_profile. The result always uses
/// finite-difference derivatives.
GeneratingProfile read_profile(const std::filesystem::path& csv);

/// `u,lambda1,lambda2,H,A2,C,R`.
void write_curvature(const std::filesystem::path& csv, const GeneratingProfile& profile);

/// `t,area,volume,h,minH,minR,maxA2`, one row per recorded state.
void write_trajectory(const std::filesystem::path& csv, const Trajectory& trajectory);

nlohmann::json to_json(const DiagnosticReport& report);
nlohmann::json to_json(const TerminalReport& report);
nlohmann::json to_json(const PerturbationReport& report);

/// `s,minH_after_preflow,first_crossing_t` for one variant; rows without a
/// crossing leave the last column empty.
void write_perturbation(const std::filesystem::path& csv, const PerturbationReport& report, FlowVariant variant);

/// `name,computed,target,tolerance,kind,pass`.
void write_checks(const std::filesystem::path& csv, const DiagnosticReport& report);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace curvflow::io
