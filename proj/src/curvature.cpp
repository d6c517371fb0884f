#include "curvflow/curvature.hpp"

#include <cmath>

namespace curvflow {

CurvatureScalars curvature_scalars(const PrincipalCurvatures& k, int n) {
  const double m = static_cast<double>(n - 1);
  CurvatureScalars s;
  s.H = k.lambda1 + m * k.lambda2;
  s.A2 = k.lambda1 * k.lambda1 + m * k.lambda2 * k.lambda2;
  s.C = k.lambda1 * k.lambda1 * k.lambda1 + m * k.lambda2 * k.lambda2 * k.lambda2;
  // 2 * sum_{i<j} lambda_i lambda_j, written without cancellation.
  s.R = 2.0 * m * k.lambda1 * k.lambda2 + m * (m - 1.0) * k.lambda2 * k.lambda2;
  return s;
}

PrincipalCurvatures principal_curvatures(const CurvePoint& p) {
  if (!(p.r > 0.0)) throw GeometryError("principal curvatures: r = 0 away from a pole");
  const double s2 = p.dr * p.dr + p.dz * p.dz;
  const double s = std::sqrt(s2);
  return {(p.ddz * p.dr - p.ddr * p.dz) / (s2 * s), p.dz / (p.r * s)};
}

PrincipalCurvatures principal_curvatures(const GeneratingProfile& profile, std::size_t i) {
  const CurvePoint& p = evaluate_profile(profile, i);
  if (profile.is_pole(i)) {
    const double s2 = p.dr * p.dr + p.dz * p.dz;
    const double l1 = (p.ddz * p.dr - p.ddr * p.dz) / (s2 * std::sqrt(s2));
    return {l1, l1};
  }
  return principal_curvatures(p);
}

CurvatureField curvature_field(const GeneratingProfile& profile) {
  const std::size_t n = profile.size();
  CurvatureField f;
  f.n = profile.dim();
  f.lambda1.resize(n);
  f.lambda2.resize(n);
  f.H.resize(n);
  f.A2.resize(n);
  f.C.resize(n);
  f.R.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = principal_curvatures(profile, i);
    const auto s = curvature_scalars(k, f.n);
    f.lambda1[i] = k.lambda1;
    f.lambda2[i] = k.lambda2;
    f.H[i] = s.H;
    f.A2[i] = s.A2;
    f.C[i] = s.C;
    f.R[i] = s.R;
  }
  return f;
}

double mean_curvature(const CurvePoint& p, int n) {
  return curvature_scalars(principal_curvatures(p), n).H;
}

PrincipalJets principal_curvature_jets(const ProfileCurve& curve, double u) {
  const auto jet = curve.jet(u);
  if (!jet) throw GeometryError("curvature jets: curve has no closed-form jet");
  using T2 = Taylor<2>;
  const auto dr3 = jet->r.differentiate();
  const auto dz3 = jet->z.differentiate();
  const T2 r = jet->r.truncate<2>();
  if (!(r.value() > 0.0)) throw GeometryError("curvature jets: r = 0");
  const T2 dr = dr3.truncate<2>();
  const T2 dz = dz3.truncate<2>();
  const T2 ddr = dr3.differentiate().truncate<2>();
  const T2 ddz = dz3.differentiate().truncate<2>();
  const T2 s2 = dr * dr + dz * dz;
  const T2 s = sqrt(s2);
  PrincipalJets out;
  out.point = {r.value(), jet->z.value(), dr.value(), dz.value(), ddr.value(), ddz.value()};
  out.lambda1 = (ddz * dr - ddr * dz) / (s2 * s);
  out.lambda2 = dz / (r * s);
  return out;
}

FieldJet mean_curvature_jet(const ProfileCurve& curve, double u, int n) {
  const auto k = principal_curvature_jets(curve, u);
  return to_field_jet(k.lambda1 + Taylor<2>(static_cast<double>(n - 1)) * k.lambda2);
}

}  // namespace curvflow
