#pragma once

// Generating curves of hypersurfaces of revolution in R^{n+1}. A profile is a
// sampled plane curve u -> (r(u), z(u)) rotated about the z axis, together with
// first and second u-derivatives at every sample, either from a closed form or
// from finite differences of the samples.

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvflow/taylor.hpp"

namespace curvflow {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Topology { Sphere, Torus };
enum class DerivativeSource { Analytic, FiniteDifference };

std::string to_string(Topology t);
std::string to_string(DerivativeSource s);
Topology topology_from_string(const std::string& s);
DerivativeSource derivative_source_from_string(const std::string& s);

/// Position and first two u-derivatives of the generating curve.
struct CurvePoint {
  double r = 0.0;
  double z = 0.0;
  double dr = 0.0;
  double dz = 0.0;
  double ddr = 0.0;
  double ddz = 0.0;

  double speed() const;
};

using Jet = Taylor<4>;

struct CurveJet {
  Jet r;
  Jet z;
};

/// Closed-form generating curve. point() is mandatory; jet() is provided by
/// curves simple enough to be written over Taylor arithmetic and gives the
/// exact derivatives up to fourth order needed by analytic Laplacians.
class ProfileCurve {
 public:
  virtual ~ProfileCurve() = default;
  virtual CurvePoint point(double u) const = 0;
  virtual std::optional<CurveJet> jet(double /*u*/) const { return std::nullopt; }
};

/// Central derivative stencil of one sample. Mirrored entries refer to the
/// reflection of a sample across a pole: r changes sign there, z does not.
struct StencilEntry {
  std::size_t index = 0;
  double d1 = 0.0;
  double d2 = 0.0;
  bool mirrored = false;
};

/// Up to nine entries; `width` = order + 1 are in use.
struct Stencil {
  std::array<StencilEntry, 9> entries{};
  std::size_t width = 0;
  const StencilEntry* begin() const { return entries.data(); }
  const StencilEntry* end() const { return entries.data() + width; }
};

/// Supported orders of the central stencils.
inline constexpr int kDefaultStencilOrder = 4;
bool valid_stencil_order(int order);

class GeneratingProfile {
 public:
  /// Finite-difference profile from raw samples. The period is required for
  /// tori and ignored for spheres.
  static GeneratingProfile from_samples(int n, Topology topology, std::vector<double> u, std::vector<double> r,
                                        std::vector<double> z, std::optional<double> period = std::nullopt,
                                        bool check_embedded = true, int stencil_order = kDefaultStencilOrder);

  /// Analytic profile sampling a closed-form curve on the grid u.
  static GeneratingProfile from_curve(int n, Topology topology, std::shared_ptr<const ProfileCurve> curve,
                                      std::vector<double> u, std::optional<double> period = std::nullopt,
                                      bool check_embedded = true);

  /// Same grid and topology, new positions, finite-difference derivatives.
  /// Embeddedness is not re-checked here; callers that need it run
  /// find_self_intersection() themselves.
  GeneratingProfile with_positions(std::vector<double> r, std::vector<double> z) const;

  /// Drop the closed form and recompute derivatives from the samples.
  GeneratingProfile as_finite_difference() const;
  /// Same, with central stencils of the given order (4, 6 or 8).
  GeneratingProfile as_finite_difference(int stencil_order) const;

  int stencil_order() const { return stencil_order_; }

  int dim() const { return n_; }
  Topology topology() const { return topology_; }
  DerivativeSource source() const { return source_; }
  std::size_t size() const { return u_.size(); }
  double period() const { return period_; }

  std::span<const double> u() const { return u_; }
  std::span<const double> r() const { return r_; }
  std::span<const double> z() const { return z_; }
  std::span<const CurvePoint> points() const { return points_; }
  const CurvePoint& point(std::size_t i) const { return points_.at(i); }

  bool is_pole(std::size_t i) const {
    return topology_ == Topology::Sphere && (i == 0 || i + 1 == u_.size());
  }

  const ProfileCurve* curve() const { return curve_.get(); }
  std::shared_ptr<const ProfileCurve> shared_curve() const { return curve_; }

  /// Finite-difference stencils for the grid (built for every profile so that
  /// evolved copies share them).
  std::span<const Stencil> stencils() const { return *stencils_; }

  /// True when the u grid is uniform to 1e-12 relative.
  bool uniform_grid() const { return uniform_; }

  /// Smallest chord length between consecutive samples.
  double min_spacing() const;

 private:
  GeneratingProfile() = default;
  void validate(bool check_embedded) const;
  void compute_fd_points();
  void detect_uniform();

  int n_ = 2;
  Topology topology_ = Topology::Sphere;
  DerivativeSource source_ = DerivativeSource::FiniteDifference;
  double period_ = 0.0;
  bool uniform_ = false;
  int stencil_order_ = kDefaultStencilOrder;
  std::vector<double> u_;
  std::vector<double> r_;
  std::vector<double> z_;
  std::vector<CurvePoint> points_;
  std::shared_ptr<const ProfileCurve> curve_;
  std::shared_ptr<const std::vector<Stencil>> stencils_;
};

/// Position and u-derivatives at sample i.
CurvePoint evaluate_profile(const GeneratingProfile& profile, std::size_t i);

/// First pair of non-adjacent polyline segments that intersect, if any.
std::optional<std::pair<std::size_t, std::size_t>> find_self_intersection(std::span<const double> r,
                                                                          std::span<const double> z,
                                                                          Topology topology);

/// Build central stencils of the given order for a grid.
std::vector<Stencil> build_stencils(std::span<const double> u, Topology topology, double period,
                                    int order = kDefaultStencilOrder);

/// Apply stencils: returns first and second derivatives of a sampled
/// function with the given parity under reflection across a pole (+1 even,
/// -1 odd).
void apply_stencils(std::span<const Stencil> stencils, std::span<const double> f, double parity,
                    std::span<double> d1, std::span<double> d2);

/// Dilate a profile by k about the origin (samples and closed form).
GeneratingProfile dilate(const GeneratingProfile& profile, double k);

}  // namespace curvflow
