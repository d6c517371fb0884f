#include "curvflow/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "curvflow/curvature.hpp"
#include "curvflow/curves.hpp"
#include "curvflow/quadrature.hpp"

namespace curvflow {

// ---------------------------------------------------------------------------
// CappedCurve

CappedCurve::CappedCurve(NeckGraph neck, BendingFunction bf, int knots) : neck_(std::move(neck)), bf_(std::move(bf)) {
  const double a = bf_.a();
  const double b = bf_.b();
  z_pole_chart_ = b - 0.25 * (b - a);
  w_max_ = std::sqrt(b - z_pole_chart_);

  auto table = [&](Piece piece, double p0, double p1, std::vector<double>& ps, std::vector<double>& ss) {
    ps.resize(knots + 1);
    ss.resize(knots + 1);
    ps[0] = p0;
    ss[0] = 0.0;
    AdaptiveOptions opts;
    opts.abs_tol = 1e-15;
    opts.rel_tol = 1e-15;
    for (int k = 1; k <= knots; ++k) {
      ps[k] = k == knots ? p1 : p0 + (p1 - p0) * k / knots;
      ss[k] = ss[k - 1] + integrate_adaptive([&](double p) { return speed(piece, p); }, ps[k - 1], ps[k], opts).value;
    }
  };
  table(Piece::Neck, 0.0, a, neck_p_, neck_s_);
  table(Piece::Cap, a, z_pole_chart_, cap_p_, cap_s_);
  table(Piece::Pole, 0.0, w_max_, pole_p_, pole_s_);
  s_junction_ = neck_s_.back();
  s_pole_chart_ = s_junction_ + cap_s_.back();
  half_length_ = s_pole_chart_ + pole_s_.back();
}

std::array<double, 3> CappedCurve::rho_cap(double z) const {
  const auto r = neck_(z);
  if (z <= bf_.a()) return r;
  const auto f = bf_.eval(z);
  return {r[0] * f.phi, r[1] * f.phi + r[0] * f.dphi, r[2] * f.phi + 2.0 * r[1] * f.dphi + r[0] * f.ddphi};
}

namespace {

struct PoleRho {
  double rho, drho, ddrho;
};

PoleRho pole_rho(const NeckGraph& neck, const BendingFunction& bf, double w) {
  const double z = bf.b() - w * w;
  const auto R = neck(z);
  const auto q = bf.pole_chart(w);
  const double A = R[0];
  const double dA = -2.0 * w * R[1];
  const double ddA = -2.0 * R[1] + 4.0 * w * w * R[2];
  const double C = std::sqrt(q.q);
  const double dC = q.dq / (2.0 * C);
  const double ddC = q.ddq / (2.0 * C) - q.dq * q.dq / (4.0 * C * C * C);
  return {A * w * C, dA * w * C + A * C + A * w * dC, ddA * w * C + 2.0 * (dA * C + dA * w * dC + A * dC) + A * w * ddC};
}

}  // namespace

double CappedCurve::speed(Piece piece, double p) const {
  if (piece == Piece::Pole) {
    const auto r = pole_rho(neck_, bf_, p);
    return std::hypot(r.drho, 2.0 * p);
  }
  const auto r = piece == Piece::Neck ? neck_(p) : rho_cap(p);
  return std::hypot(1.0, r[1]);
}

CurvePoint CappedCurve::chart_point(Piece piece, double p) const {
  if (piece == Piece::Pole) {
    const auto r = pole_rho(neck_, bf_, p);
    const double s = std::hypot(r.drho, 2.0 * p);
    const double tr = -r.drho / s;
    const double tz = 2.0 * p / s;
    const double k = (2.0 * r.drho - 2.0 * p * r.ddrho) / (s * s * s);
    return {r.rho, bf_.b() - p * p, tr, tz, -k * tz, k * tr};
  }
  const auto r = piece == Piece::Neck ? neck_(p) : rho_cap(p);
  const double s = std::hypot(1.0, r[1]);
  const double tr = r[1] / s;
  const double tz = 1.0 / s;
  const double k = -r[2] / (s * s * s);
  return {r[0], p, tr, tz, -k * tz, k * tr};
}

CappedCurve::Local CappedCurve::locate(double s) const {
  auto invert = [&](Piece piece, const std::vector<double>& ps, const std::vector<double>& ss, double target) {
    auto it = std::upper_bound(ss.begin(), ss.end(), target);
    std::size_t k = it == ss.begin() ? 0 : static_cast<std::size_t>(it - ss.begin()) - 1;
    k = std::min(k, ss.size() - 2);
    const double p0 = ps[k];
    const double p1 = ps[k + 1];
    const double s0 = ss[k];
    double p = p0 + (p1 - p0) * std::clamp((target - s0) / (ss[k + 1] - s0), 0.0, 1.0);
    for (int iter = 0; iter < 30; ++iter) {
      const double f = s0 + integrate_gauss([&](double x) { return speed(piece, x); }, p0, p, 16) - target;
      const double next = std::clamp(p - f / speed(piece, p), p0, p1);
      const bool done = std::abs(next - p) <= 1e-16 * std::max(1.0, std::abs(p));
      p = next;
      if (done) break;
    }
    return p;
  };
  if (s <= s_junction_) return {Piece::Neck, invert(Piece::Neck, neck_p_, neck_s_, s)};
  if (s <= s_pole_chart_) return {Piece::Cap, invert(Piece::Cap, cap_p_, cap_s_, s - s_junction_)};
  const double sigma = std::max(half_length_ - s, 0.0);
  return {Piece::Pole, invert(Piece::Pole, pole_p_, pole_s_, sigma)};
}

CurvePoint CappedCurve::half_point(double s) const {
  const auto loc = locate(std::min(s, half_length_));
  return chart_point(loc.piece, loc.p);
}

CurvePoint CappedCurve::point(double s) const {
  if (s >= 0.0) return half_point(s);
  const CurvePoint p = half_point(-s);
  return {p.r, -p.z, -p.dr, p.dz, p.ddr, -p.ddz};
}

double CappedCurve::height(double s) const { return point(s).z; }

// ---------------------------------------------------------------------------
// Constructions

const GeneratingProfile& Construction::require_certified() const {
  if (certificate.passed()) return profile;
  std::ostringstream msg;
  msg << "certification failed:";
  for (const auto& c : certificate.checks())
    if (!c.pass) msg << ' ' << c.name << "=" << c.computed;
  throw CertificationError(msg.str());
}

double elliptic_torus_mean_curvature(double u) {
  const double c = std::cos(0.5 * u);
  const double s = std::sin(u);
  return c * c * (5.0 + 2.0 * std::cos(u) - std::cos(2.0 * u)) /
         ((3.0 + 2.0 * std::cos(u)) * std::pow(1.0 + s * s, 1.5));
}

namespace {

void add_embedded_check(DiagnosticReport& rep, const GeneratingProfile& p) {
  const auto hit = find_self_intersection(p.r(), p.z(), p.topology());
  rep.add("embedded", "generating polyline has no self-intersection", hit ? 1.0 : 0.0, 0.0, 0.0, CheckKind::Abs,
          hit ? std::optional<double>(p.u()[hit->first]) : std::nullopt);
}

struct Extremum {
  double value;
  double where;
};

template <class Pred>
Extremum min_over(const GeneratingProfile& p, const std::vector<double>& f, Pred include) {
  Extremum e{INFINITY, 0.0};
  for (std::size_t i = 0; i < f.size(); ++i)
    if (include(i) && f[i] < e.value) e = {f[i], p.u()[i]};
  return e;
}

template <class Pred>
Extremum max_abs_over(const GeneratingProfile& p, const std::vector<double>& f, Pred include) {
  Extremum e{0.0, 0.0};
  for (std::size_t i = 0; i < f.size(); ++i)
    if (include(i) && std::abs(f[i]) > e.value) e = {std::abs(f[i]), p.u()[i]};
  return e;
}

// Cubic extrapolation of samples idx[0..3] to x.
double extrapolate(const GeneratingProfile& p, const std::vector<double>& f, const std::array<std::size_t, 4>& idx,
                   double x) {
  double out = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    double l = 1.0;
    for (std::size_t k = 0; k < 4; ++k)
      if (k != j) l *= (x - p.u()[idx[k]]) / (p.u()[idx[j]] - p.u()[idx[k]]);
    out += l * f[idx[j]];
  }
  return out;
}

std::vector<double> symmetric_arclength_grid(double half, std::size_t samples) {
  if (samples % 2 == 0) ++samples;
  const std::size_t mid = samples / 2;
  std::vector<double> s(samples);
  for (std::size_t i = 0; i < mid; ++i) {
    const double t = static_cast<double>(mid - i) / static_cast<double>(mid);
    s[i] = -half * t;
    s[samples - 1 - i] = half * t;
  }
  s[mid] = 0.0;
  return s;
}

Construction capped(int n, const NeckGraph& neck, const BendingFunction& bf, std::size_t samples,
                    const std::string& kind) {
  if (!bf.certified()) throw CertificationError("bending function is not certified");
  if (samples < 256) throw std::invalid_argument(kind + ": at least 256 samples required");
  auto curve = std::make_shared<const CappedCurve>(neck, bf);
  auto grid = symmetric_arclength_grid(curve->half_length(), samples);
  auto profile = GeneratingProfile::from_curve(n, Topology::Sphere, curve, std::move(grid), std::nullopt, false);
  Construction out{profile, {}, curve};
  DiagnosticReport& rep = out.certificate;
  rep.merge(bf.certificate(), "phi.");

  const auto field = curvature_field(profile);
  const double sj = curve->junction_arclength();
  const auto u = profile.u();
  auto in_neck = [&](std::size_t i) { return std::abs(u[i]) <= sj; };
  auto any = [](std::size_t) { return true; };
  const double floor = 1e-10;

  const auto hmin = min_over(profile, field.H, any);
  rep.add("H_nonnegative", "H >= 0 on the whole surface", hmin.value, 0.0, floor, CheckKind::LowerBound, hmin.where);
  const auto a2min = min_over(profile, field.A2, in_neck);
  rep.add("neck_A2_positive", "|A|^2 > 0 on the neck", a2min.value, 0.0, 0.0, CheckKind::LowerBound, a2min.where);

  // Junction: cubic one-sided extrapolation of H and lambda1 to z = a.
  std::size_t first_cap = 0;
  while (first_cap < u.size() && u[first_cap] <= sj) ++first_cap;
  if (first_cap >= 4 && first_cap + 4 <= u.size()) {
    const std::array<std::size_t, 4> left{first_cap - 1, first_cap - 2, first_cap - 3, first_cap - 4};
    const std::array<std::size_t, 4> right{first_cap, first_cap + 1, first_cap + 2, first_cap + 3};
    const double jh = std::abs(extrapolate(profile, field.H, left, sj) - extrapolate(profile, field.H, right, sj));
    const double jl =
        std::abs(extrapolate(profile, field.lambda1, left, sj) - extrapolate(profile, field.lambda1, right, sj));
    rep.add("junction_jump_H", "H continuous across z = a", jh, 0.0, 1e-6, CheckKind::Abs, sj);
    rep.add("junction_jump_lambda1", "lambda1 continuous across z = a", jl, 0.0, 1e-6, CheckKind::Abs, sj);
  }

  double asym = 0.0;
  const std::size_t m = u.size();
  for (std::size_t i = 0; i < m; ++i) {
    asym = std::max(asym, std::abs(profile.r()[i] - profile.r()[m - 1 - i]));
    asym = std::max(asym, std::abs(profile.z()[i] + profile.z()[m - 1 - i]));
  }
  rep.add("even_in_z", "profile symmetric under z -> -z", asym, 0.0, 1e-12, CheckKind::Abs);
  add_embedded_check(rep, profile);
  return out;
}

}  // namespace

Construction capped_catenoid(double a, double b, const BendingFunction& bf, std::size_t samples) {
  if (bf.a() != a || bf.b() != b) throw std::invalid_argument("capped_catenoid: bending function built for other a, b");
  NeckGraph neck = [](double z) {
    const double c = std::cosh(z);
    return std::array<double, 3>{c, std::sinh(z), c};
  };
  Construction out = capped(2, neck, bf, samples, "capped_catenoid");
  DiagnosticReport& rep = out.certificate;
  const auto field = curvature_field(out.profile);
  const auto u = out.profile.u();
  const double sj = out.capped->junction_arclength();

  double res = 0.0;
  double at = 0.0;
  for (int j = 0; j <= 2000; ++j) {
    const double z = -a + 2.0 * a * j / 2000.0;
    const auto r = neck(z);
    const double v = std::abs(r[1] * r[1] + 1.0 - r[2] * r[0]);
    if (v > res) { res = v; at = z; }
  }
  rep.add("minimality_residual", "rdot^2 + 1 - rddot r = 0 on the catenoid", res, 0.0, 1e-12, CheckKind::Abs, at);

  const auto k = principal_curvatures(out.capped->point(0.0));
  const auto sc = curvature_scalars(k, 2);
  rep.add("neck_lambda1", "lambda1 = -1 at z = 0", k.lambda1, -1.0, 1e-12, CheckKind::Abs, 0.0);
  rep.add("neck_lambda2", "lambda2 = 1 at z = 0", k.lambda2, 1.0, 1e-12, CheckKind::Abs, 0.0);
  rep.add("neck_H", "H = 0 at z = 0", sc.H, 0.0, 1e-12, CheckKind::Abs, 0.0);
  rep.add("neck_A2", "|A|^2 = 2 at z = 0", sc.A2, 2.0, 1e-12, CheckKind::Abs, 0.0);

  const auto hband = max_abs_over(out.profile, field.H, [&](std::size_t i) { return std::abs(u[i]) <= sj; });
  rep.add("neck_H_zero", "H = 0 on the neck band", hband.value, 0.0, 1e-10, CheckKind::Abs, hband.where);
  return out;
}

Construction capped_paraboloid(double a, double b, const BendingFunction& bf, std::size_t samples) {
  if (bf.a() != a || bf.b() != b)
    throw std::invalid_argument("capped_paraboloid: bending function built for other a, b");
  NeckGraph neck = [](double z) { return std::array<double, 3>{2.0 + z * z / 8.0, z / 4.0, 0.25}; };
  Construction out = capped(3, neck, bf, samples, "capped_paraboloid");
  DiagnosticReport& rep = out.certificate;
  const auto field = curvature_field(out.profile);
  const auto u = out.profile.u();
  const double sj = out.capped->junction_arclength();

  const auto rmin = min_over(out.profile, field.R, [](std::size_t) { return true; });
  rep.add("R_nonnegative", "R >= 0 on the whole surface", rmin.value, 0.0, 1e-10, CheckKind::LowerBound, rmin.where);
  const auto rband = max_abs_over(out.profile, field.R, [&](std::size_t i) { return std::abs(u[i]) <= sj; });
  rep.add("neck_R_zero", "R = 0 on the neck band", rband.value, 0.0, 1e-10, CheckKind::Abs, rband.where);

  const auto k = principal_curvatures(out.capped->point(0.0));
  const auto sc = curvature_scalars(k, 3);
  rep.add("neck_lambda1", "lambda1 = -1/4 at u = 0", k.lambda1, -0.25, 1e-12, CheckKind::Abs, 0.0);
  rep.add("neck_lambda2", "lambda2 = 1/2 at u = 0", k.lambda2, 0.5, 1e-12, CheckKind::Abs, 0.0);
  rep.add("neck_R", "R = 0 at u = 0", sc.R, 0.0, 1e-12, CheckKind::Abs, 0.0);
  rep.add("neck_H", "H = 3/4 at u = 0", sc.H, 0.75, 1e-12, CheckKind::Abs, 0.0);

  // S(r) = 2 r (rdot zddot - rddot zdot) + zdot (rdot^2 + zdot^2) on the neck,
  // in the closed-form parameter r = 2 cosh^2 u, z = 4 sinh u.
  const ParaboloidCurve para;
  const double umax = std::asinh(a / 4.0);
  double sres = 0.0;
  double sat = 0.0;
  for (int j = 0; j <= 2000; ++j) {
    const double uu = -umax + 2.0 * umax * j / 2000.0;
    const auto p = para.point(uu);
    const double v = std::abs(2.0 * p.r * (p.dr * p.ddz - p.ddr * p.dz) + p.dz * (p.dr * p.dr + p.dz * p.dz));
    if (v > sres) { sres = v; sat = uu; }
  }
  rep.add("S_residual", "S(r) = 0 on the neck", sres, 0.0, 1e-10, CheckKind::Abs, sat);

  // On the caps S(rho) >= 0; in arclength S = 2 r lambda1 + zdot.
  double smin = INFINITY;
  double smin_at = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) <= sj) continue;
    const auto& p = out.profile.point(i);
    const double s = 2.0 * p.r * field.lambda1[i] * std::pow(p.speed(), 3) + p.dz * (p.dr * p.dr + p.dz * p.dz);
    if (s < smin) { smin = s; smin_at = u[i]; }
  }
  rep.add("cap_S_nonnegative", "S(rho) >= 0 on the caps", smin, 0.0, 1e-10, CheckKind::LowerBound, smin_at);
  return out;
}

Construction round_sphere(double rho0, int n, std::size_t samples) {
  if (!(rho0 > 0.0)) throw std::invalid_argument("round_sphere: radius must be positive");
  auto curve = std::make_shared<const SphereCurve>(SphereShape{rho0});
  std::vector<double> s(samples);
  const double len = std::numbers::pi * rho0;
  for (std::size_t i = 0; i < samples; ++i) s[i] = len * static_cast<double>(i) / static_cast<double>(samples - 1);
  s.back() = len;
  auto profile = GeneratingProfile::from_curve(n, Topology::Sphere, curve, std::move(s), std::nullopt, false);
  Construction out{profile, {}, nullptr};
  const auto field = curvature_field(profile);
  const auto dev = max_abs_over(profile, [&] {
    std::vector<double> d(field.H.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = field.H[i] - n / rho0;
    return d;
  }(), [](std::size_t) { return true; });
  out.certificate.add("H_constant", "H = n / rho0", dev.value, 0.0, 1e-10, CheckKind::Abs, dev.where);
  add_embedded_check(out.certificate, profile);
  return out;
}

Construction elliptic_torus(std::size_t samples) {
  if (samples < 256) throw std::invalid_argument("elliptic_torus: at least 256 samples required");
  const double period = 2.0 * std::numbers::pi;
  std::vector<double> u(samples);
  for (std::size_t i = 0; i < samples; ++i) u[i] = period * static_cast<double>(i) / static_cast<double>(samples);
  auto profile = GeneratingProfile::from_curve(2, Topology::Torus, std::make_shared<const EllipticTorusCurve>(),
                                               std::move(u), period, false);
  Construction out{profile, {}, nullptr};
  DiagnosticReport& rep = out.certificate;
  const auto field = curvature_field(profile);
  const auto uu = profile.u();
  const double du = period / static_cast<double>(samples);

  std::vector<double> diff(samples), guu(samples), gvv(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const auto& p = profile.point(i);
    const double s = std::sin(uu[i]);
    const double c = 3.0 + 2.0 * std::cos(uu[i]);
    diff[i] = field.H[i] - elliptic_torus_mean_curvature(uu[i]);
    guu[i] = p.dr * p.dr + p.dz * p.dz - 2.0 * (1.0 + s * s);
    gvv[i] = p.r * p.r - c * c;
  }
  auto any = [](std::size_t) { return true; };
  const auto hdev = max_abs_over(profile, diff, any);
  rep.add("H_closed_form", "H matches cos^2(u/2)(5+2cos u-cos 2u)/((3+2cos u)(1+sin^2 u)^{3/2})", hdev.value, 0.0,
          1e-10, CheckKind::Abs, hdev.where);
  const auto hmin = min_over(profile, field.H, any);
  rep.add("H_nonnegative", "H >= 0", hmin.value, 0.0, 1e-10, CheckKind::LowerBound, hmin.where);
  rep.add("H_zero_at_pi", "minimum of H at u = pi", hmin.where, std::numbers::pi, 0.5 * du, CheckKind::Abs,
          hmin.where);
  const auto away = min_over(profile, field.H, [&](std::size_t i) { return std::abs(uu[i] - std::numbers::pi) > 1.5 * du; });
  rep.add("H_unique_zero", "H > 0 away from u = pi", away.value, 0.0, 0.0, CheckKind::LowerBound, away.where);
  const auto g1 = max_abs_over(profile, guu, any);
  rep.add("metric_guu", "g_uu = 2(1 + sin^2 u)", g1.value, 0.0, 1e-12, CheckKind::Abs, g1.where);
  const auto g2 = max_abs_over(profile, gvv, any);
  rep.add("metric_gvv", "g_vv = (3 + 2 cos u)^2", g2.value, 0.0, 1e-12, CheckKind::Abs, g2.where);
  add_embedded_check(rep, profile);
  return out;
}

}  // namespace curvflow
