#include "curvflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "curvflow/curvature.hpp"
#include "curvflow/curves.hpp"
#include "curvflow/quadrature.hpp"

namespace curvflow {

namespace {

using T2 = Taylor<2>;

double rate_from_jets(const ProfileCurve& curve, double u, int n, double h) {
  const auto k = principal_curvature_jets(curve, u);
  const FieldJet H = to_field_jet(k.lambda1 + T2(static_cast<double>(n - 1)) * k.lambda2);
  const auto s = curvature_scalars({k.lambda1.value(), k.lambda2.value()}, n);
  return laplacian_from_derivatives(k.point, n, H.df, H.ddf) + s.A2 * (s.H - h);
}

}  // namespace

std::vector<double> initial_rate_H(const GeneratingProfile& profile, FlowVariant variant) {
  return initial_rate_H(profile, global_term(profile, variant));
}

std::vector<double> initial_rate_H(const GeneratingProfile& profile, double h) {
  const auto field = curvature_field(profile);
  const auto lap = laplace_beltrami(profile, field.H);
  std::vector<double> out(profile.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = lap[i] + field.A2[i] * (field.H[i] - h);
  // Exact derivatives where the closed form allows; poles keep the
  // finite-volume value.
  const ProfileCurve* curve = profile.curve();
  if (profile.source() == DerivativeSource::Analytic && curve && curve->jet(profile.u()[profile.size() / 2])) {
    for (std::size_t i = 0; i < out.size(); ++i)
      if (!profile.is_pole(i)) out[i] = rate_from_jets(*curve, profile.u()[i], profile.dim(), h);
  }
  return out;
}

double initial_rate_H(const ProfileCurve& curve, double u, int n, double h) { return rate_from_jets(curve, u, n, h); }

double paraboloid_neck_lambda(double u) { return 1.0 / (4.0 * ipow(std::cosh(u), 3)); }

double paraboloid_neck_gradient_term(double u) {
  const double c = std::cosh(u);
  const double r = 2.0 * c * c;
  const double dr = 4.0 * c * std::sinh(u);
  const double g = 3.0 * paraboloid_neck_lambda(u) * dr / (r * r);
  return g * g;
}

double paraboloid_neck_cubic_ratio(double u) {
  const ParaboloidCurve curve;
  const auto s = curvature_scalars(principal_curvatures(curve.point(u)), 3);
  return (s.H * s.A2 - s.C) / ipow(paraboloid_neck_lambda(u), 3);
}

double initial_rate_R_neck(const Construction& capped_paraboloid, double u, double h) {
  if (!capped_paraboloid.capped) throw DiagnosticsError("initial_rate_R_neck: not a capped construction");
  const double a = capped_paraboloid.capped->bending().a();
  if (std::abs(4.0 * std::sinh(u)) > a)
    throw DiagnosticsError("initial_rate_R_neck: u = " + std::to_string(u) + " lies outside the neck band");
  const double lam = paraboloid_neck_lambda(u);
  return 2.0 * paraboloid_neck_gradient_term(u) - 24.0 * h * lam * lam * lam;
}

double gradient_excess(const ProfileCurve& curve, double u, int n) {
  const auto k = principal_curvature_jets(curve, u);
  const double speed = k.point.speed();
  const double m = static_cast<double>(n - 1);
  const double l1 = k.lambda1.value();
  const double l2 = k.lambda2.value();
  const double l1s = k.lambda1.derivative(1) / speed;
  const double l2s = k.lambda2.derivative(1) / speed;
  const double rs = k.point.dr / speed;
  // Orthonormal frame components of grad A: (1,1,1) -> l1s, (1,i,i) -> l2s,
  // (i,1,i) and (i,i,1) -> (l1 - l2) r_s / r.
  const double mixed = (l1 - l2) * rs / k.point.r;
  const double gradA2 = l1s * l1s + m * (l2s * l2s + 2.0 * mixed * mixed);
  const double Hs = l1s + m * l2s;
  return gradA2 - Hs * Hs;
}

double scalar_curvature_rate(const ProfileCurve& curve, double u, int n, double h) {
  const auto k = principal_curvature_jets(curve, u);
  const double m = static_cast<double>(n - 1);
  const T2 R = T2(2.0 * m) * k.lambda1 * k.lambda2 + T2(m * (m - 1.0)) * k.lambda2 * k.lambda2;
  const FieldJet Rj = to_field_jet(R);
  const auto s = curvature_scalars({k.lambda1.value(), k.lambda2.value()}, n);
  return laplacian_from_derivatives(k.point, n, Rj.df, Rj.ddf) + 2.0 * gradient_excess(curve, u, n) +
         2.0 * s.A2 * s.R - 2.0 * h * (s.H * s.A2 - s.C);
}

EvolutionResidual evolution_residual_H(const Trajectory& trajectory) {
  const auto& states = trajectory.states;
  if (states.size() < 3) throw DiagnosticsError("evolution residual needs at least three recorded states");
  const auto u0 = states.front().profile.u();
  for (const auto& s : states) {
    const auto u = s.profile.u();
    if (!std::equal(u.begin(), u.end(), u0.begin(), u0.end()))
      throw DiagnosticsError("evolution residual needs a fixed grid (regridding was active)");
  }
  std::vector<std::vector<double>> H(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) H[k] = curvature_field(states[k].profile).H;

  EvolutionResidual out;
  out.states = states.size();
  for (std::size_t k = 1; k + 1 < states.size(); ++k) {
    const double h1 = states[k].t - states[k - 1].t;
    const double h2 = states[k + 1].t - states[k].t;
    if (!(h1 > 0.0 && h2 > 0.0)) throw DiagnosticsError("evolution residual: recorded times are not increasing");
    const double wm = -h2 / (h1 * (h1 + h2));
    const double w0 = (h2 - h1) / (h1 * h2);
    const double wp = h1 / (h2 * (h1 + h2));
    const auto& p = states[k].profile;
    const auto field = curvature_field(p);
    const auto lap = laplace_beltrami(p, field.H);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p.is_pole(i)) continue;
      const double dHdt = wm * H[k - 1][i] + w0 * H[k][i] + wp * H[k + 1][i];
      const double rhs = lap[i] + field.A2[i] * (field.H[i] - states[k].h);
      const double res = std::abs(dHdt - rhs);
      if (res > out.residual) {
        out.residual = res;
        out.t = states[k].t;
        out.u = p.u()[i];
      }
    }
  }
  return out;
}

Refinement refinement(double coarse, double fine, double step_ratio) {
  Refinement r{coarse, fine, coarse / fine, 0.0};
  r.order = std::log(r.ratio) / std::log(step_ratio);
  return r;
}

SignTrack sign_tracker(const Trajectory& trajectory, SignField field, double floor) {
  SignTrack track;
  track.field = field;
  const auto& states = trajectory.states;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto& s = states[k];
    const bool isH = field == SignField::H;
    track.t.push_back(s.t);
    track.minimum.push_back(isH ? s.min_H : s.min_R);
    track.u.push_back(isH ? s.min_H_u : s.min_R_u);
    track.z.push_back(isH ? s.min_H_z : s.min_R_z);
    if (!track.first_negative && track.minimum.back() < -floor) {
      track.first_negative = k;
      track.bracket = std::make_pair(k == 0 ? s.t : states[k - 1].t, s.t);
    }
  }
  return track;
}

bool PerturbationRow::all_crossed() const {
  return !runs.empty() && std::all_of(runs.begin(), runs.end(), [](const PerturbationRun& r) {
           return r.crossing.has_value();
         });
}

bool PerturbationRow::pass() const { return all_crossed() && (s == 0.0 || strictly_mean_convex()); }

bool PerturbationReport::passed() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const PerturbationRow& r) { return r.pass(); });
}

bool PerturbationReport::monotone() const {
  std::vector<const PerturbationRow*> sorted;
  for (const auto& r : rows) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](auto* x, auto* y) { return x->s < y->s; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (!(sorted[i - 1]->min_H <= sorted[i]->min_H)) return false;
  return true;
}

PerturbationReport perturbation_experiment(const GeneratingProfile& profile, const PerturbationConfig& config) {
  PerturbationReport report;
  for (double s : config.s_list) {
    if (!(s >= 0.0)) throw std::invalid_argument("perturbation: pre-flow times must be non-negative");
    PerturbationRow row;
    row.s = s;
    GeneratingProfile start = profile;
    if (s == 0.0) {
      const auto field = curvature_field(profile);
      const auto it = std::min_element(field.H.begin(), field.H.end());
      const auto i = static_cast<std::size_t>(it - field.H.begin());
      row.preflow_status = "none";
      row.min_H = *it;
      row.min_H_u = profile.u()[i];
      row.min_H_z = profile.z()[i];
    } else {
      FlowConfig pre = config.preflow;
      pre.variant = FlowVariant::Unconstrained;
      pre.t_end = s;
      pre.record_every = std::numeric_limits<int>::max();
      const auto traj = run(profile, pre);
      const auto& last = traj.states.back();
      row.preflow_status = traj.report.status;
      row.min_H = last.min_H;
      row.min_H_u = last.min_H_u;
      row.min_H_z = last.min_H_z;
      start = last.profile;
      if (!traj.report.completed()) {
        report.rows.push_back(std::move(row));
        continue;
      }
    }
    for (FlowVariant v : config.variants) {
      FlowConfig fc = config.flow;
      fc.variant = v;
      const auto traj = run(start, fc);
      row.runs.push_back({v, traj.report.status, traj.states.back().min_H, traj.report.H_crossing});
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

double torus_hvp_reference() {
  const auto I = integrate_adaptive([](double t) { return std::sqrt(1.0 + std::sin(t) * std::sin(t)); }, 0.0,
                                    std::numbers::pi / 2.0);
  return std::numbers::pi / (2.0 * std::numbers::sqrt2) / I.value;
}

DiagnosticReport verify(const VerifyConfig& config) {
  DiagnosticReport rep;
  auto add = [&](const std::string& name, const std::string& anchor, double computed, double target, double tol,
                 CheckKind kind, std::optional<double> where = std::nullopt) {
    rep.add(name, anchor, computed, target, config.tolerance.value_or(tol), kind, where);
  };
  const double pi = std::numbers::pi;

  // Elliptic torus.
  const auto torus = elliptic_torus(config.torus_samples);
  const auto& tp = torus.profile;
  const EllipticTorusCurve tc;
  {
    const auto field = curvature_field(tp);
    double worst = 0.0;
    double at = 0.0;
    for (std::size_t i = 0; i < tp.size(); ++i) {
      const double e = std::abs(field.H[i] - elliptic_torus_mean_curvature(tp.u()[i]));
      if (e > worst) {
        worst = e;
        at = tp.u()[i];
      }
    }
    add("H_closed_form", "torus mean curvature equals its closed form", worst, 0.0, 1e-10, CheckKind::Abs, at);
  }
  const auto kpi = curvature_scalars(principal_curvatures(tc.point(pi)), 2);
  add("A2_at_pi", "torus |A|^2 at the inner equator", kpi.A2, 2.0, 1e-10, CheckKind::Abs, pi);
  const FieldJet Hpi = mean_curvature_jet(tc, pi, 2);
  add("lapH_at_pi", "torus Laplacian of H at the inner equator, exact derivatives",
      laplacian_from_derivatives(tc.point(pi), 2, Hpi.df, Hpi.ddf), 0.5, 1e-6, CheckKind::Abs, pi);
  {
    // Finite-volume Laplacian of the exact H on three nested grids.
    std::vector<double> err;
    for (std::size_t N : {config.torus_samples / 4, config.torus_samples / 2, config.torus_samples}) {
      const auto p = elliptic_torus(N).profile;
      const auto field = curvature_field(p);
      err.push_back(std::abs(laplace_beltrami(p, field.H)[N / 2] - 0.5));
    }
    const double order = std::min(refinement(err[0], err[1]).order, refinement(err[1], err[2]).order);
    add("lapH_fd_order", "finite-volume Laplacian of H at the inner equator, observed order", order, 1.9, 0.0,
        CheckKind::LowerBound);
  }
  const double href = torus_hvp_reference();
  const double hvp = global_term(tp, FlowVariant::VolumePreserving);
  const double hap = global_term(tp, FlowVariant::AreaPreserving);
  add("hVP_torus", "torus average mean curvature against the elliptic-integral expression", hvp, href, 1e-8,
      CheckKind::Abs);
  add("hVP_lower_bound", "torus average mean curvature is at least 1/2", hvp, 0.5, 0.0, CheckKind::LowerBound);
  add("rate_H_at_pi", "torus dH/dt at the inner equator equals 1/2 - 2 h(0)", initial_rate_H(tc, pi, 2, hvp),
      0.5 - 2.0 * href, 1e-8, CheckKind::Abs, pi);
  {
    const auto vp = initial_rate_H(tc, pi, 2, hvp);
    const auto ap = initial_rate_H(tc, pi, 2, hap);
    add("rate_H_ap_le_vp", "torus dH/dt at the inner equator is no larger under area preservation", ap, vp, 0.0,
        CheckKind::UpperBound, pi);
  }

  // Capped examples and the sphere.
  const auto bf = bending_function(config.a, config.b, config.bending);
  const auto cat = capped_catenoid(config.a, config.b, bf, config.paraboloid_samples);
  const auto par = capped_paraboloid(config.a, config.b, bf, config.paraboloid_samples);
  const auto sph = round_sphere(1.0, 2, 257);

  double jensen = std::numeric_limits<double>::infinity();
  for (const auto* p : {&tp, &cat.profile, &par.profile, &sph.profile})
    jensen = std::min(jensen, global_term(*p, FlowVariant::AreaPreserving) -
                                  global_term(*p, FlowVariant::VolumePreserving));
  add("jensen", "area-preserving global term dominates the average mean curvature (min of h_AP - h_VP)", jensen,
      0.0, 1e-12, CheckKind::LowerBound);

  {
    const double hcat = global_term(cat.profile, FlowVariant::VolumePreserving);
    const auto rate = initial_rate_H(cat.profile, hcat);
    const std::size_t mid = cat.profile.size() / 2;
    add("rate_H_catenoid_neck", "capped catenoid dH/dt at the neck centre equals -|A|^2 h = -2 h", rate[mid],
        -2.0 * hcat, 1e-8, CheckKind::Abs, cat.profile.u()[mid]);
    const auto srate = initial_rate_H(sph.profile, FlowVariant::VolumePreserving);
    double worst = 0.0;
    for (double v : srate) worst = std::max(worst, std::abs(v));
    add("rate_H_sphere", "round sphere is stationary: dH/dt = 0", worst, 0.0, 1e-9, CheckKind::Abs);
  }

  // Paraboloid neck identities.
  const ParaboloidCurve pc;
  const double hpar = global_term(par.profile, FlowVariant::VolumePreserving);
  add("rate_R_at_u0", "capped paraboloid dR/dt at u = 0 from the general evolution of R equals -(3/8) h",
      scalar_curvature_rate(pc, 0.0, 3, hpar), -0.375 * hpar, 1e-8, CheckKind::Rel, 0.0);
  add("rate_R_neck_formula", "neck closed form 2 (3 lambda r'/r^2)^2 - 24 h lambda^3 at u = 0",
      initial_rate_R_neck(par, 0.0, hpar), -0.375 * hpar, 1e-12, CheckKind::Rel, 0.0);
  {
    const double umax = std::asinh(config.a / 4.0);
    struct Worst {
      double value = 0.0;
      double u = 0.0;
      void update(double e, double at) {
        if (e > value) {
          value = e;
          u = at;
        }
      }
    } wV, wG, wR;
    const std::size_t m = std::max<std::size_t>(config.neck_points, 2);
    for (std::size_t j = 0; j < m; ++j) {
      const double u = -umax + 2.0 * umax * static_cast<double>(j) / static_cast<double>(m - 1);
      wV.update(std::abs(paraboloid_neck_cubic_ratio(u) - 12.0), u);
      wG.update(std::abs(gradient_excess(pc, u, 3) - paraboloid_neck_gradient_term(u)), u);
      wR.update(std::abs(scalar_curvature_rate(pc, u, 3, hpar) - initial_rate_R_neck(par, u, hpar)), u);
    }
    add("exV", "neck (H|A|^2 - C) / lambda^3 = 12, worst deviation", wV.value, 0.0, 1e-10, CheckKind::Abs, wV.u);
    add("gradT", "neck |grad A|^2 - |grad H|^2 = (3 lambda r'/r^2)^2, worst deviation", wG.value, 0.0, 1e-10,
        CheckKind::Abs, wG.u);
    add("gradT_at_u0", "neck gradient term vanishes at u = 0", gradient_excess(pc, 0.0, 3), 0.0, 1e-14,
        CheckKind::Abs, 0.0);
    add("rate_R_neck_consistency", "general dR/dt equals the neck closed form across the band, worst deviation",
        wR.value, 0.0, 1e-10, CheckKind::Abs, wR.u);
  }
  return rep;
}

}  // namespace curvflow
