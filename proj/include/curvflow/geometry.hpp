#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "curvflow/profile.hpp"
#include "curvflow/quadrature.hpp"

namespace curvflow {

enum class FlowVariant { VolumePreserving, AreaPreserving, Unconstrained };

std::string to_string(FlowVariant v);
/// Accepts "vp", "ap", "unconstrained" and the full enumerator names.
FlowVariant flow_variant_from_string(const std::string& s);

/// x^k for small non-negative integer k.
inline double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

/// Area of the unit k-sphere in R^{k+1}.
double unit_sphere_area(int k);
/// Volume of the unit n-ball.
double unit_ball_volume(int n);

/// du-weights of the grid rule: periodic trapezoid on tori, trapezoid on
/// spheres with endpoint corrections on uniform grids when the integrand is
/// odd across the poles (n even).
std::vector<double> quadrature_weights(const GeneratingProfile& profile);

/// Surface integral of a per-sample field with the grid rule. The error
/// estimate compares against plain trapezoid on every second sample.
Integral integrate(const GeneratingProfile& profile, std::span<const double> f);

/// Surface integral of a function of the curve point, by adaptive
/// Gauss-Kronrod on the closed form. Requires an Analytic profile.
using PointFunction = std::function<double(const CurvePoint&, double u)>;
Integral integrate(const GeneratingProfile& profile, const PointFunction& f, const AdaptiveOptions& opts = {});

/// Area and enclosed volume: adaptive quadrature for Analytic profiles, grid
/// rule otherwise. The volume is returned positive whatever the orientation.
double area(const GeneratingProfile& profile);
double enclosed_volume(const GeneratingProfile& profile);

enum class GlobalTermMethod {
  Quadrature,         ///< ratio of surface integrals
  DiscreteGradient,   ///< ratio weighted by the gradient of the discrete constraint (used by the flow)
};

/// VP: mean of H; AP: int H^2 / int H; Unconstrained: 0. Throws GeometryError
/// for AP when int H <= 0.
double global_term(const GeneratingProfile& profile, FlowVariant variant,
                   GlobalTermMethod method = GlobalTermMethod::Quadrature);

/// Discrete-gradient global term from precomputed H and unit normals.
double discrete_global_term(const GeneratingProfile& profile, FlowVariant variant, std::span<const double> H,
                            std::span<const double> nr, std::span<const double> nz);

/// Axisymmetric Laplace-Beltrami operator of a per-sample field, second order
/// finite volumes on the polyline. Pole cells close by even reflection.
std::vector<double> laplace_beltrami(const GeneratingProfile& profile, std::span<const double> f);

/// Laplacian of an axisymmetric function from its u-derivatives at a
/// non-pole point.
double laplacian_from_derivatives(const CurvePoint& p, int n, double df, double ddf);

/// Discrete volume and area on the grid and their exact gradients with
/// respect to the sample positions.
struct DiscreteFunctional {
  double value = 0.0;
  std::vector<double> grad_r;
  std::vector<double> grad_z;
};

DiscreteFunctional discrete_volume(const GeneratingProfile& profile);
DiscreteFunctional discrete_area(const GeneratingProfile& profile);

/// Outward unit normal (dz, -dr)/|c'| at every sample.
void unit_normals(const GeneratingProfile& profile, std::vector<double>& nr, std::vector<double>& nz);

}  // namespace curvflow
