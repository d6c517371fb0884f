#pragma once

#include <cstddef>
#include <vector>

#include "curvflow/profile.hpp"

namespace curvflow {

/// Profile-direction (lambda1) and rotational (lambda2, multiplicity n-1)
/// principal curvatures. The normal points away from the rotation axis, so a
/// round sphere has lambda1 = lambda2 = 1/radius.
struct PrincipalCurvatures {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

struct CurvatureScalars {
  double H = 0.0;   ///< lambda1 + (n-1) lambda2
  double A2 = 0.0;  ///< lambda1^2 + (n-1) lambda2^2
  double C = 0.0;   ///< lambda1^3 + (n-1) lambda2^3
  double R = 0.0;   ///< H^2 - A2
};

CurvatureScalars curvature_scalars(const PrincipalCurvatures& k, int n);

/// Principal curvatures from curve derivatives; r must be positive.
PrincipalCurvatures principal_curvatures(const CurvePoint& p);

/// Principal curvatures at sample i. Poles of sphere profiles use the umbilic
/// limit lambda2 = lambda1.
PrincipalCurvatures principal_curvatures(const GeneratingProfile& profile, std::size_t i);

struct CurvatureField {
  int n = 2;
  std::vector<double> lambda1;
  std::vector<double> lambda2;
  std::vector<double> H;
  std::vector<double> A2;
  std::vector<double> C;
  std::vector<double> R;

  std::size_t size() const { return H.size(); }
};

CurvatureField curvature_field(const GeneratingProfile& profile);

double mean_curvature(const CurvePoint& p, int n);

/// H together with its first two u-derivatives, exact for closed-form curves
/// that provide Taylor jets. Returns (H, dH/du, d2H/du2).
struct FieldJet {
  double f = 0.0;
  double df = 0.0;
  double ddf = 0.0;
};

FieldJet mean_curvature_jet(const ProfileCurve& curve, double u, int n);

/// lambda1 and lambda2 as second-order Taylor jets in u, for curves with
/// closed-form jets. Throws GeometryError otherwise or on the axis.
struct PrincipalJets {
  CurvePoint point;
  Taylor<2> lambda1;
  Taylor<2> lambda2;
};

PrincipalJets principal_curvature_jets(const ProfileCurve& curve, double u);

inline FieldJet to_field_jet(const Taylor<2>& t) { return {t.derivative(0), t.derivative(1), t.derivative(2)}; }

}  // namespace curvflow
