#include "curvflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvflow/curvature.hpp"
#include "curvflow/quadrature.hpp"

namespace curvflow {

void FlowConfig::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string("flow config: ") + what + " must be positive");
  };
  positive(t_end, "t_end");
  positive(dt_max, "dt_max");
  positive(cfl, "cfl");
  if (cfl > 1.0) throw std::invalid_argument("flow config: cfl must not exceed 1");
  positive(drift_tol, "drift_tol");
  positive(guard_max_A2, "guard_max_A2");
  positive(guard_min_spacing, "guard_min_spacing");
  if (record_every < 1) throw std::invalid_argument("flow config: record_every must be at least 1");
  if (embed_every < 1) throw std::invalid_argument("flow config: embed_every must be at least 1");
  if (regrid_every < 0) throw std::invalid_argument("flow config: regrid_every must be non-negative");
  if (crossing_floor < 0.0) throw std::invalid_argument("flow config: crossing_floor must be non-negative");
  if (stencil_order != 0 && !valid_stencil_order(stencil_order))
    throw std::invalid_argument("flow config: stencil_order must be 0, 4, 6 or 8");
}

double TerminalReport::conserved_drift(FlowVariant v) const {
  switch (v) {
    case FlowVariant::VolumePreserving: return volume_drift;
    case FlowVariant::AreaPreserving: return area_drift;
    case FlowVariant::Unconstrained: return 0.0;
  }
  return 0.0;
}

FlowState FlowState::make(const GeneratingProfile& profile, FlowVariant variant, double t) {
  FlowState s{t, profile.as_finite_difference(), variant};
  const auto& p = s.profile;
  const auto field = curvature_field(p);
  {
    std::vector<double> nr, nz;
    unit_normals(p, nr, nz);
    s.h = discrete_global_term(p, variant, field.H, nr, nz);
  }
  const auto vol = discrete_volume(p);
  s.volume = std::abs(vol.value);
  s.area = discrete_area(p).value;
  s.reference = variant == FlowVariant::AreaPreserving ? s.area : vol.value;
  s.min_H = s.min_R = std::numeric_limits<double>::infinity();
  s.max_A2 = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (field.H[i] < s.min_H) {
      s.min_H = field.H[i];
      s.min_H_u = p.u()[i];
      s.min_H_z = p.z()[i];
    }
    if (field.R[i] < s.min_R) {
      s.min_R = field.R[i];
      s.min_R_u = p.u()[i];
      s.min_R_z = p.z()[i];
    }
    s.max_A2 = std::max(s.max_A2, field.A2[i]);
  }
  return s;
}

std::vector<double> normal_velocity(const FlowState& state, FlowVariant variant) {
  const double h = variant == state.variant ? state.h
                                            : global_term(state.profile, variant, GlobalTermMethod::DiscreteGradient);
  const auto field = curvature_field(state.profile);
  std::vector<double> v(field.H.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = h - field.H[i];
  return v;
}

double stable_dt(const GeneratingProfile& profile, const FlowConfig& config) {
  const double hmin = profile.min_spacing();
  return config.cfl * hmin * hmin / (2.0 * profile.dim());
}

namespace {

struct Positions {
  std::vector<double> r;
  std::vector<double> z;
};

// Velocity (h - H) N of the surface with the given positions.
Positions velocity(const GeneratingProfile& p, FlowVariant variant) {
  const auto field = curvature_field(p);
  Positions out;
  unit_normals(p, out.r, out.z);
  const double h = discrete_global_term(p, variant, field.H, out.r, out.z);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double v = h - field.H[i];
    out.r[i] *= v;
    out.z[i] *= v;
  }
  return out;
}

Positions axpy(const GeneratingProfile& base, double a, const Positions& k) {
  Positions out{std::vector<double>(base.r().begin(), base.r().end()),
                std::vector<double>(base.z().begin(), base.z().end())};
  for (std::size_t i = 0; i < out.r.size(); ++i) {
    out.r[i] += a * k.r[i];
    out.z[i] += a * k.z[i];
  }
  return out;
}

// Uniform normal offset restoring the conserved quantity, by Newton.
GeneratingProfile project(GeneratingProfile p, FlowVariant variant, double target, double& offset) {
  offset = 0.0;
  for (int it = 0; it < 6; ++it) {
    const auto g = variant == FlowVariant::AreaPreserving ? discrete_area(p) : discrete_volume(p);
    const double f = g.value - target;
    if (std::abs(f) <= 1e-15 * std::abs(target)) break;
    std::vector<double> nr, nz;
    unit_normals(p, nr, nz);
    double slope = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) slope += g.grad_r[i] * nr[i] + g.grad_z[i] * nz[i];
    if (slope == 0.0) throw FlowError("conservation projection: vanishing derivative");
    const double eps = -f / slope;
    offset += eps;
    std::vector<double> r(p.r().begin(), p.r().end());
    std::vector<double> z(p.z().begin(), p.z().end());
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] += eps * nr[i];
      z[i] += eps * nz[i];
    }
    p = p.with_positions(std::move(r), std::move(z));
  }
  offset = std::abs(offset);
  return p;
}

}  // namespace

FlowState step(const FlowState& state, double dt, const FlowConfig& config) {
  if (!(dt > 0.0)) throw FlowError("time step must be positive");
  const double limit = stable_dt(state.profile, config);
  if (dt > limit * (1.0 + 1e-12))
    throw FlowError("time step " + std::to_string(dt) + " exceeds the stability bound " + std::to_string(limit));
  if (config.variant != state.variant)
    throw FlowError("state is " + to_string(state.variant) + " but the step asks for " + to_string(config.variant));
  const FlowVariant v = config.variant;
  const auto& p0 = state.profile;

  const auto k1 = velocity(p0, v);
  auto x = axpy(p0, 0.5 * dt, k1);
  const auto k2 = velocity(p0.with_positions(std::move(x.r), std::move(x.z)), v);
  x = axpy(p0, 0.5 * dt, k2);
  const auto k3 = velocity(p0.with_positions(std::move(x.r), std::move(x.z)), v);
  x = axpy(p0, dt, k3);
  const auto k4 = velocity(p0.with_positions(std::move(x.r), std::move(x.z)), v);

  Positions next = axpy(p0, 0.0, k1);
  for (std::size_t i = 0; i < next.r.size(); ++i) {
    next.r[i] += dt / 6.0 * (k1.r[i] + 2.0 * k2.r[i] + 2.0 * k3.r[i] + k4.r[i]);
    next.z[i] += dt / 6.0 * (k1.z[i] + 2.0 * k2.z[i] + 2.0 * k3.z[i] + k4.z[i]);
  }
  GeneratingProfile p1 = p0.with_positions(std::move(next.r), std::move(next.z));
  double offset = 0.0;
  if (v != FlowVariant::Unconstrained && config.projection) p1 = project(std::move(p1), v, state.reference, offset);

  FlowState out = FlowState::make(p1, v, state.t + dt);
  out.reference = state.reference;
  out.projection_offset = offset;
  if (!std::isfinite(out.max_A2) || out.max_A2 > config.guard_max_A2)
    throw FlowError("max |A|^2 = " + std::to_string(out.max_A2) + " exceeds the guard");
  if (out.profile.min_spacing() < config.guard_min_spacing) throw FlowError("grid spacing collapsed below the guard");
  return out;
}

namespace {

// Local Lagrange interpolation of the sampled curve around interval k on
// stencil_order + 2 points, with ghost samples across poles (r odd, z even)
// or across the torus seam.
class LocalInterpolant {
 public:
  explicit LocalInterpolant(const GeneratingProfile& p)
      : p_(p), n_(p.size()), points_(p.stencil_order() + 2) {}

  void node(std::ptrdiff_t j, double& u, double& r, double& z) const {
    const auto nn = static_cast<std::ptrdiff_t>(n_);
    const auto uu = p_.u();
    if (p_.topology() == Topology::Torus) {
      const std::ptrdiff_t w = ((j % nn) + nn) % nn;
      u = uu[w] + static_cast<double>((j - w) / nn) * p_.period();
      r = p_.r()[w];
      z = p_.z()[w];
    } else if (j < 0) {
      u = 2.0 * uu[0] - uu[-j];
      r = -p_.r()[-j];
      z = p_.z()[-j];
    } else if (j >= nn) {
      const std::ptrdiff_t m = 2 * (nn - 1) - j;
      u = 2.0 * uu[n_ - 1] - uu[m];
      r = -p_.r()[m];
      z = p_.z()[m];
    } else {
      u = uu[j];
      r = p_.r()[j];
      z = p_.z()[j];
    }
  }

  // Position and derivative at parameter x inside interval k.
  void eval(std::size_t k, double x, double& r, double& z, double& dr, double& dz) const {
    std::array<double, 10> us{}, rs{}, zs{};
    const int lo = points_ / 2 - 1;
    for (int m = 0; m < points_; ++m) node(static_cast<std::ptrdiff_t>(k) + m - lo, us[m], rs[m], zs[m]);
    const auto w = fd_weights(x, std::span<const double>(us.data(), static_cast<std::size_t>(points_)), 1);
    r = z = dr = dz = 0.0;
    for (int m = 0; m < points_; ++m) {
      r += w[0][m] * rs[m];
      z += w[0][m] * zs[m];
      dr += w[1][m] * rs[m];
      dz += w[1][m] * zs[m];
    }
  }

  double speed(std::size_t k, double x) const {
    double r, z, dr, dz;
    eval(k, x, r, z, dr, dz);
    return std::hypot(dr, dz);
  }

 private:
  const GeneratingProfile& p_;
  std::size_t n_;
  int points_;
};

}  // namespace

FlowState reparametrize(const FlowState& state) {
  const auto& p = state.profile;
  const std::size_t n = p.size();
  const bool torus = p.topology() == Topology::Torus;
  const std::size_t segs = torus ? n : n - 1;
  const LocalInterpolant interp(p);
  const auto& gl = gauss_legendre(8);

  auto seg_end = [&](std::size_t k) {
    double u, r, z;
    interp.node(static_cast<std::ptrdiff_t>(k) + 1, u, r, z);
    return u;
  };
  auto partial = [&](std::size_t k, double x) {
    const double a = p.u()[k];
    double s = 0.0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double t = a + 0.5 * (x - a) * (1.0 + gl.nodes[q]);
      const double v = interp.speed(k, t);
      if (!(v > 0.0)) throw GeometryError("reparametrization: interpolant is not regular");
      s += 0.5 * (x - a) * gl.weights[q] * v;
    }
    return s;
  };

  std::vector<double> cum(segs + 1, 0.0);
  for (std::size_t k = 0; k < segs; ++k) {
    const double len = partial(k, seg_end(k));
    if (!(len > 0.0)) throw GeometryError("reparametrization: arclength is not monotone");
    cum[k + 1] = cum[k] + len;
  }
  const double total = cum.back();

  std::vector<double> r(n), z(n), u(n);
  const double u0 = p.u()[0];
  const double range = torus ? p.period() : p.u()[n - 1] - u0;
  const double denom = torus ? static_cast<double>(n) : static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    u[j] = u0 + range * static_cast<double>(j) / denom;
    if (j == 0 || (!torus && j == n - 1)) {
      r[j] = p.r()[j];
      z[j] = p.z()[j];
      continue;
    }
    const double target = total * static_cast<double>(j) / denom;
    std::size_t k = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin()) - 1;
    k = std::min(k, segs - 1);
    const double a = p.u()[k];
    const double b = seg_end(k);
    double x = a + (b - a) * (target - cum[k]) / (cum[k + 1] - cum[k]);
    for (int it = 0; it < 30; ++it) {
      const double f = cum[k] + partial(k, x) - target;
      const double next = std::clamp(x - f / interp.speed(k, x), a, b);
      const bool done = std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x));
      x = next;
      if (done) break;
    }
    double dr, dz;
    interp.eval(k, x, r[j], z[j], dr, dz);
  }
  std::optional<double> period;
  if (torus) period = p.period();
  auto q = GeneratingProfile::from_samples(p.dim(), p.topology(), std::move(u), std::move(r), std::move(z), period,
                                           false, p.stencil_order());
  FlowState out = FlowState::make(q, state.variant, state.t);
  out.reference = state.reference;
  out.projection_offset = state.projection_offset;
  return out;
}

namespace {

// Re-run the bracketing step at dt/10 to locate the first crossing.
Crossing refine_crossing(const FlowState& prev, const FlowState& next, double dt, const FlowConfig& config,
                         bool field_H) {
  auto value = [&](const FlowState& s) { return field_H ? s.min_H : s.min_R; };
  Crossing c{next.t, prev.t, next.t, field_H ? next.min_H_u : next.min_R_u, field_H ? next.min_H_z : next.min_R_z,
             false};
  if (!config.refine_crossings) return c;
  try {
    FlowState s = prev;
    const double sub = dt / 10.0;
    for (int k = 0; k < 10; ++k) {
      FlowState t = step(s, sub, config);
      if (value(t) < -config.crossing_floor) {
        return {t.t, s.t, t.t, field_H ? t.min_H_u : t.min_R_u, field_H ? t.min_H_z : t.min_R_z, true};
      }
      s = std::move(t);
    }
  } catch (const std::exception&) {
  }
  return c;
}

}  // namespace

Trajectory run(const GeneratingProfile& profile, const FlowConfig& config) {
  config.validate();
  Trajectory traj;
  traj.config = config;
  TerminalReport& rep = traj.report;

  FlowState cur = FlowState::make(
      config.stencil_order == 0 ? profile : profile.as_finite_difference(config.stencil_order), config.variant, 0.0);
  const double v0 = cur.volume;
  const double a0 = cur.area;
  // Nominal step: an integer division of t_end with 10% headroom below the
  // stability bound, so records are evenly spaced while the grid is stable.
  const double dt0 = std::min(config.dt_max, 0.9 * stable_dt(cur.profile, config));
  const auto nominal_steps = static_cast<long>(std::ceil(config.t_end / dt0 - 1e-9));
  const double dt_nominal = config.t_end / static_cast<double>(nominal_steps);
  rep.dt = dt_nominal;
  traj.states.push_back(cur);
  if (cur.min_H < -config.crossing_floor) rep.H_crossing = Crossing{0.0, 0.0, 0.0, cur.min_H_u, cur.min_H_z, false};
  if (cur.min_R < -config.crossing_floor) rep.R_crossing = Crossing{0.0, 0.0, 0.0, cur.min_R_u, cur.min_R_z, false};

  for (long k = 1; cur.t < config.t_end; ++k) {
    const double remaining = config.t_end - cur.t;
    double dt = std::min(dt_nominal, stable_dt(cur.profile, config));
    const bool last = remaining <= dt * (1.0 + 1e-9);
    if (last) dt = remaining;
    FlowState next = cur;
    try {
      next = step(cur, dt, config);
      if (config.regrid_every > 0 && k % config.regrid_every == 0) next = reparametrize(next);
      if (k % config.embed_every == 0) {
        if (auto hit = find_self_intersection(next.profile.r(), next.profile.z(), next.profile.topology()))
          throw FlowError("self-intersection between segments " + std::to_string(hit->first) + " and " +
                          std::to_string(hit->second));
      }
    } catch (const std::exception& e) {
      rep.status = std::string("guard: ") + e.what();
      break;
    }
    rep.volume_drift = std::max(rep.volume_drift, std::abs(next.volume - v0) / v0);
    rep.area_drift = std::max(rep.area_drift, std::abs(next.area - a0) / a0);
    rep.max_projection = std::max(rep.max_projection, next.projection_offset);
    if (!rep.H_crossing && next.min_H < -config.crossing_floor)
      rep.H_crossing = refine_crossing(cur, next, dt, config, true);
    if (!rep.R_crossing && next.min_R < -config.crossing_floor)
      rep.R_crossing = refine_crossing(cur, next, dt, config, false);
    rep.steps = k;
    cur = std::move(next);
    if (k % config.record_every == 0 || last) traj.states.push_back(cur);
    if (last) break;
  }
  if (traj.states.back().t != cur.t) traj.states.push_back(cur);
  rep.t_final = cur.t;
  return traj;
}

}  // namespace curvflow
