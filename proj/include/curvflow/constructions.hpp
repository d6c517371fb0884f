#pragma once

#include <array>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "curvflow/profile.hpp"
#include "curvflow/report.hpp"

namespace curvflow {

class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BendingParams {
  double epsilon = 2.0;         ///< width of the flat weight exp(-epsilon/(s-a))
  int flatness_order = 4;       ///< right-derivatives at a certified up to this order
  double tol_flat = 1e-8;       ///< bound on certified derivatives at a+ and at the pole
  double positivity_floor = -1e-10;
  int dense_samples = 4000;     ///< grid size for the sign conditions
};

/// Decreasing concave cut-off phi on [a, b] with phi(a) = 1, phi(b) = 0,
/// flat to all orders at a, and phi^2 smooth with nonzero slope at b so
/// that b - phi^{-1}(y) is even in y.
///
/// phi = sqrt(Q), Q(z) = 1 - F(z)/F(b), F(z) = int_a^z exp(-epsilon/(s-a)) ds.
class BendingFunction {
 public:
  BendingFunction(double a, double b, double epsilon);

  double a() const { return a_; }
  double b() const { return b_; }
  double epsilon() const { return epsilon_; }

  struct Values {
    double phi = 0.0;
    double dphi = 0.0;
    double ddphi = 0.0;
  };

  /// phi and its first two derivatives for z in [a, b).
  Values eval(double z) const;
  double phi(double z) const { return eval(z).phi; }
  /// 1 - phi(z) without cancellation near a.
  double one_minus_phi(double z) const;
  /// dphi / W and ddphi / W, the sign-carrying parts free of underflow near a.
  std::pair<double, double> scaled_derivatives(double z) const;

  /// Weight W(s) = exp(-epsilon/(s-a)) and its first two derivatives.
  std::array<double, 3> weight(double s) const;
  /// F(z) = int_a^z W.
  double cumulative(double z) const;
  /// int_z^b W, accurate near b.
  double tail(double z) const;
  double total() const { return total_; }

  /// Near the pole z = b - w^2 and phi^2 = w^2 q(w); q is smooth and
  /// positive. Valid for w^2 <= (b - a) / 2.
  struct PoleChart {
    double q = 0.0;
    double dq = 0.0;
    double ddq = 0.0;
  };
  PoleChart pole_chart(double w) const;
  double pole_chart_limit() const { return 0.5 * (b_ - a_); }

  /// d(y) = b - phi^{-1}(y) for y in [0, 1].
  double inverse_depth(double y) const;

  const DiagnosticReport& certificate() const { return certificate_; }
  bool certified() const { return certificate_.passed(); }

 private:
  friend BendingFunction bending_function(double, double, const BendingParams&);
  double a_;
  double b_;
  double epsilon_;
  double total_;
  DiagnosticReport certificate_;
};

/// Build and certify the bending function. Inspect certificate() for failures.
BendingFunction bending_function(double a, double b, const BendingParams& params = {});

/// Neck curve given as a graph r = R(z); returns (R, R', R'').
using NeckGraph = std::function<std::array<double, 3>(double z)>;

/// Neck graph r = R(z) on |z| <= a closed by caps rho = R(z) phi(|z|) on
/// a < |z| <= b, parametrized by arclength s in [-L/2, L/2] from the south
/// pole (s = -L/2) to the north pole.
class CappedCurve final : public ProfileCurve {
 public:
  CappedCurve(NeckGraph neck, BendingFunction bf, int knots = 256);

  CurvePoint point(double s) const override;

  double half_length() const { return half_length_; }
  /// Arclength from the neck centre to the junction z = a.
  double junction_arclength() const { return s_junction_; }
  /// Height z at arclength s >= 0.
  double height(double s) const;
  const BendingFunction& bending() const { return bf_; }

 private:
  enum class Piece { Neck, Cap, Pole };
  struct Local {
    Piece piece;
    double p;
  };
  CurvePoint half_point(double s) const;
  Local locate(double s) const;
  double speed(Piece piece, double p) const;
  CurvePoint chart_point(Piece piece, double p) const;
  std::array<double, 3> rho_cap(double z) const;

  NeckGraph neck_;
  BendingFunction bf_;
  double z_pole_chart_;  ///< z where the graph chart hands over to the pole chart
  double w_max_;
  double s_junction_ = 0.0;
  double s_pole_chart_ = 0.0;
  double half_length_ = 0.0;
  // Knot tables: parameter and arclength, per piece.
  std::vector<double> neck_p_, neck_s_, cap_p_, cap_s_, pole_p_, pole_s_;
};

struct Construction {
  GeneratingProfile profile;
  DiagnosticReport certificate;
  std::shared_ptr<const CappedCurve> capped;  ///< set for capped constructions

  /// Throws CertificationError listing failed checks.
  const GeneratingProfile& require_certified() const;
};

/// Round sphere of radius rho0 in R^{n+1}, arclength grid.
Construction round_sphere(double rho0, int n, std::size_t samples);

/// r = 3 + 2 cos u, z = sqrt(2) sin u, uniform grid on [0, 2 pi).
Construction elliptic_torus(std::size_t samples);

/// Catenoid neck r = cosh z on |z| <= a with bent caps, n = 2. Even sample
/// counts are raised by one so the neck centre is a sample.
Construction capped_catenoid(double a, double b, const BendingFunction& bf, std::size_t samples);

/// Neck of r = 2 + z^2/8 on |z| <= a with bent caps, n = 3.
Construction capped_paraboloid(double a, double b, const BendingFunction& bf, std::size_t samples);

/// Closed form of H for the elliptic torus.
double elliptic_torus_mean_curvature(double u);

}  // namespace curvflow
