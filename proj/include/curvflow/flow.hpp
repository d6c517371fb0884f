#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvflow/geometry.hpp"
#include "curvflow/profile.hpp"

namespace curvflow {

/// A guard tripped or a step precondition failed during the flow.
class FlowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FlowConfig {
  FlowVariant variant = FlowVariant::VolumePreserving;
  double t_end = 0.05;
  double dt_max = 1e-5;
  double cfl = 0.8;                ///< dt <= cfl * h_min^2 / (2n)
  int regrid_every = 0;            ///< steps between arclength redistributions, 0 = never
  bool projection = true;          ///< restore the conserved quantity after each step
  double drift_tol = 1e-6;
  double guard_max_A2 = 1e8;
  double guard_min_spacing = 1e-8;
  int embed_every = 10;            ///< steps between self-intersection checks
  int record_every = 100;
  double crossing_floor = 1e-8;    ///< a field has crossed once its minimum is below -floor
  bool refine_crossings = true;
  int stencil_order = 0;           ///< 4, 6 or 8; 0 keeps the profile's own order

  /// Throws std::invalid_argument for non-positive or inconsistent values.
  void validate() const;
};

/// Profile at time t with cached functionals. h is the discrete-gradient
/// global term the flow uses (see global_term).
struct FlowState {
  double t = 0.0;
  GeneratingProfile profile;
  FlowVariant variant = FlowVariant::VolumePreserving;
  double h = 0.0;
  double area = 0.0;
  double volume = 0.0;
  double min_H = 0.0;
  double min_H_u = 0.0;
  double min_H_z = 0.0;
  double min_R = 0.0;
  double min_R_u = 0.0;
  double min_R_z = 0.0;
  double max_A2 = 0.0;
  double projection_offset = 0.0;  ///< |epsilon| of the last conservation projection
  double reference = 0.0;          ///< conserved value the projection restores

  /// Evaluate all caches for a profile (converted to finite differences).
  static FlowState make(const GeneratingProfile& profile, FlowVariant variant, double t = 0.0);
};

/// Normal speed h - H at every sample; positive means outward.
std::vector<double> normal_velocity(const FlowState& state, FlowVariant variant);

/// Largest stable time step for the current grid.
double stable_dt(const GeneratingProfile& profile, const FlowConfig& config);

/// One classical RK4 step with h recomputed at every stage, followed by the
/// conservation projection when enabled. Throws FlowError on guard trips or
/// when dt exceeds the stability bound.
FlowState step(const FlowState& state, double dt, const FlowConfig& config);

/// Redistribute samples to uniform arclength along the same curve.
FlowState reparametrize(const FlowState& state);

struct Crossing {
  double t = 0.0;       ///< first time the minimum is below -crossing_floor
  double t_lo = 0.0;    ///< bracket: minimum still above -floor here
  double t_hi = 0.0;
  double u = 0.0;       ///< location of the minimum at t
  double z = 0.0;
  bool refined = false;
};

struct TerminalReport {
  std::string status = "completed";  ///< "completed" or "guard: <reason>"
  double t_final = 0.0;
  long steps = 0;
  double dt = 0.0;
  double volume_drift = 0.0;  ///< max relative change over all steps
  double area_drift = 0.0;
  double max_projection = 0.0;
  std::optional<Crossing> H_crossing;
  std::optional<Crossing> R_crossing;

  bool completed() const { return status == "completed"; }
  /// Drift of the quantity the variant conserves (0 for Unconstrained).
  double conserved_drift(FlowVariant v) const;
};

struct Trajectory {
  FlowConfig config;
  std::vector<FlowState> states;  ///< recorded every record_every steps, first and last included
  TerminalReport report;
};

Trajectory run(const GeneratingProfile& profile, const FlowConfig& config);

}  // namespace curvflow
