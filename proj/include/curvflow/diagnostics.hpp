#pragma once

// Checks of the closed-form identities and of the simulated dynamics against
// the evolution equations.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvflow/constructions.hpp"
#include "curvflow/flow.hpp"
#include "curvflow/geometry.hpp"
#include "curvflow/report.hpp"

namespace curvflow {

class DiagnosticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Instantaneous rates at t = 0

/// dH/dt = Laplacian(H) + |A|^2 (H - h) at every sample, with h the variant's
/// global term. Closed-form curves with jets use exact derivatives; sampled
/// profiles use the finite-volume Laplacian.
std::vector<double> initial_rate_H(const GeneratingProfile& profile, FlowVariant variant);
std::vector<double> initial_rate_H(const GeneratingProfile& profile, double h);

/// Same rate at a single parameter value of a closed-form curve.
double initial_rate_H(const ProfileCurve& curve, double u, int n, double h);

/// Paraboloid neck r = 2 cosh^2 u, z = 4 sinh u (n = 3): principal curvatures
/// (-lambda, 2 lambda, 2 lambda) with lambda = 1 / (4 cosh^3 u).
double paraboloid_neck_lambda(double u);
/// (3 lambda r' / r^2)^2, the gradient term on the paraboloid neck.
double paraboloid_neck_gradient_term(double u);
/// (H |A|^2 - C) / lambda^3 from the neck principal curvatures.
double paraboloid_neck_cubic_ratio(double u);

/// dR/dt on the neck of a capped paraboloid: 2 (3 lambda r'/r^2)^2 - 24 h lambda^3.
/// Throws DiagnosticsError when u lies outside the neck band |4 sinh u| <= a.
double initial_rate_R_neck(const Construction& capped_paraboloid, double u, double h);

/// |grad A|^2 - |grad H|^2 for an axisymmetric hypersurface from exact curve
/// jets (u-derivatives converted to arclength).
double gradient_excess(const ProfileCurve& curve, double u, int n);

/// dR/dt = Laplacian(R) + 2 (|grad A|^2 - |grad H|^2) + 2 |A|^2 R - 2 h (H |A|^2 - C)
/// from exact curve jets; independent of the neck closed forms.
double scalar_curvature_rate(const ProfileCurve& curve, double u, int n, double h);

// ---------------------------------------------------------------------------
// Trajectory diagnostics

struct EvolutionResidual {
  double residual = 0.0;  ///< sup over interior samples and interior records
  double t = 0.0;         ///< where the sup was attained
  double u = 0.0;
  std::size_t states = 0;
};

/// sup |dH/dt - (Laplacian(H) + |A|^2 (H - h))| with dH/dt from centred
/// differences of recorded states (three-point, non-uniform spacing allowed).
/// Requires >= 3 states on a fixed grid (no regridding).
EvolutionResidual evolution_residual_H(const Trajectory& trajectory);

struct Refinement {
  double coarse = 0.0;
  double fine = 0.0;
  double ratio = 0.0;
  double order = 0.0;  ///< log(ratio) / log(step_ratio)
};

Refinement refinement(double coarse, double fine, double step_ratio = 2.0);

enum class SignField { H, R };

struct SignTrack {
  SignField field = SignField::H;
  std::vector<double> t;
  std::vector<double> minimum;
  std::vector<double> u;
  std::vector<double> z;
  /// Recorded times bracketing the first state whose minimum is below -floor.
  std::optional<std::pair<double, double>> bracket;
  std::optional<std::size_t> first_negative;

  bool crossed() const { return first_negative.has_value(); }
};

SignTrack sign_tracker(const Trajectory& trajectory, SignField field, double floor = 0.0);

// ---------------------------------------------------------------------------
// Perturbation study: unconstrained pre-flow for time s, then constrained runs.

struct PerturbationConfig {
  std::vector<double> s_list{0.0, 1e-4, 1e-3};
  std::vector<FlowVariant> variants{FlowVariant::VolumePreserving, FlowVariant::AreaPreserving};
  FlowConfig preflow;  ///< variant and t_end are set per s
  FlowConfig flow;     ///< variant is set per run
};

struct PerturbationRun {
  FlowVariant variant = FlowVariant::VolumePreserving;
  std::string status;
  double min_H_end = 0.0;
  std::optional<Crossing> crossing;
};

struct PerturbationRow {
  double s = 0.0;
  std::string preflow_status;
  double min_H = 0.0;  ///< after the pre-flow (initial profile for s = 0)
  double min_H_u = 0.0;
  double min_H_z = 0.0;
  std::vector<PerturbationRun> runs;

  bool strictly_mean_convex() const { return min_H > 0.0; }
  bool all_crossed() const;
  /// s = 0 is the control row and only requires the crossings.
  bool pass() const;
};

struct PerturbationReport {
  std::vector<PerturbationRow> rows;

  bool passed() const;
  /// Smaller s gives a smaller post-pre-flow minimum (recorded, not required).
  bool monotone() const;
};

PerturbationReport perturbation_experiment(const GeneratingProfile& profile, const PerturbationConfig& config);

// ---------------------------------------------------------------------------
// Verification suite

struct VerifyConfig {
  std::size_t torus_samples = 1024;
  std::size_t paraboloid_samples = 1025;
  std::size_t neck_points = 201;  ///< dense u-sample of the neck band for the identities
  double a = 1.0;
  double b = 2.0;
  BendingParams bending;
  /// Replaces every tolerance when set (bounds keep their direction).
  std::optional<double> tolerance;
};

DiagnosticReport verify(const VerifyConfig& config);

/// Reference values computed independently of the geometry module.
double torus_hvp_reference();

}  // namespace curvflow
