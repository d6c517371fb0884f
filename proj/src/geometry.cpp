#include "curvflow/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "curvflow/curvature.hpp"

namespace curvflow {

std::string to_string(FlowVariant v) {
  switch (v) {
    case FlowVariant::VolumePreserving: return "VolumePreserving";
    case FlowVariant::AreaPreserving: return "AreaPreserving";
    case FlowVariant::Unconstrained: return "Unconstrained";
  }
  return "?";
}

FlowVariant flow_variant_from_string(const std::string& s) {
  if (s == "vp" || s == "VolumePreserving") return FlowVariant::VolumePreserving;
  if (s == "ap" || s == "AreaPreserving") return FlowVariant::AreaPreserving;
  if (s == "unconstrained" || s == "mcf" || s == "Unconstrained") return FlowVariant::Unconstrained;
  throw std::invalid_argument("unknown flow variant: " + s);
}

double unit_sphere_area(int k) {
  const double m = 0.5 * (k + 1);
  return 2.0 * std::pow(std::numbers::pi, m) / std::tgamma(m);
}

double unit_ball_volume(int n) {
  const double m = 0.5 * n;
  return std::pow(std::numbers::pi, m) / std::tgamma(m + 1.0);
}

std::vector<double> quadrature_weights(const GeneratingProfile& profile) {
  const std::size_t n = profile.size();
  const auto u = profile.u();
  std::vector<double> w(n, 0.0);
  if (profile.topology() == Topology::Torus) {
    for (std::size_t i = 0; i < n; ++i) {
      const double next = i + 1 < n ? u[i + 1] : u[0] + profile.period();
      const double prev = i > 0 ? u[i - 1] : u[n - 1] - profile.period();
      w[i] = 0.5 * (next - prev);
    }
    return w;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = 0.5 * (u[i + 1] - u[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  // r^{n-1} is odd across a pole when n is even; the leading Euler-Maclaurin
  // terms then survive and are folded into the weights next to each pole.
  if (profile.uniform_grid() && profile.dim() % 2 == 0 && n >= 7) {
    const double h = u[1] - u[0];
    const double c1 = 82.0 / 720.0 * h;
    const double c2 = -11.0 / 720.0 * h;
    w[1] += c1;
    w[2] += c2;
    w[n - 2] += c1;
    w[n - 3] += c2;
  }
  return w;
}

namespace {

double measure_density(const CurvePoint& p, int n) { return ipow(p.r, n - 1) * p.speed(); }

// Plain trapezoid over every second sample, the coarse reference for the
// grid error estimate.
double coarse_trapezoid(const GeneratingProfile& profile, std::span<const double> g) {
  const std::size_t n = profile.size();
  const auto u = profile.u();
  double s = 0.0;
  if (profile.topology() == Topology::Torus) {
    if (n % 2 != 0) return std::nan("");
    for (std::size_t i = 0; i < n; i += 2) {
      const double next = i + 2 < n ? u[i + 2] : u[0] + profile.period();
      const double prev = i >= 2 ? u[i - 2] : u[n - 2] - profile.period();
      s += 0.5 * (next - prev) * g[i];
    }
    return s;
  }
  if ((n - 1) % 2 != 0) return std::nan("");
  for (std::size_t i = 0; i + 2 < n; i += 2) s += 0.5 * (u[i + 2] - u[i]) * (g[i] + g[i + 2]);
  return s;
}

std::pair<double, double> parameter_range(const GeneratingProfile& profile) {
  const auto u = profile.u();
  if (profile.topology() == Topology::Torus) return {u.front(), u.front() + profile.period()};
  return {u.front(), u.back()};
}

Integral integrate_curve(const GeneratingProfile& profile, const std::function<double(const CurvePoint&, double)>& g,
                         const AdaptiveOptions& opts) {
  const ProfileCurve* curve = profile.curve();
  if (curve == nullptr) throw GeometryError("adaptive integration needs a closed-form profile");
  const auto [a, b] = parameter_range(profile);
  constexpr int pieces = 16;
  AdaptiveOptions local = opts;
  local.abs_tol = opts.abs_tol / pieces;
  Integral total;
  for (int k = 0; k < pieces; ++k) {
    const double lo = a + (b - a) * k / pieces;
    const double hi = k + 1 == pieces ? b : a + (b - a) * (k + 1) / pieces;
    const auto part = integrate_adaptive([&](double u) { return g(curve->point(u), u); }, lo, hi, local);
    total.value += part.value;
    total.error += part.error;
  }
  return total;
}

}  // namespace

Integral integrate(const GeneratingProfile& profile, std::span<const double> f) {
  const std::size_t n = profile.size();
  if (f.size() != n) throw GeometryError("integrate: field length does not match the profile");
  const auto w = quadrature_weights(profile);
  const double sigma = unit_sphere_area(profile.dim() - 1);
  std::vector<double> g(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = f[i] * measure_density(profile.point(i), profile.dim());
    s += w[i] * g[i];
  }
  const double coarse = coarse_trapezoid(profile, g);
  return {sigma * s, std::isnan(coarse) ? 0.0 : sigma * std::abs(s - coarse)};
}

Integral integrate(const GeneratingProfile& profile, const PointFunction& f, const AdaptiveOptions& opts) {
  const int n = profile.dim();
  const double sigma = unit_sphere_area(n - 1);
  auto res = integrate_curve(
      profile, [&](const CurvePoint& p, double u) { return f(p, u) * measure_density(p, n); }, opts);
  return {sigma * res.value, sigma * res.error};
}

double area(const GeneratingProfile& profile) {
  if (profile.source() == DerivativeSource::Analytic)
    return integrate(profile, [](const CurvePoint&, double) { return 1.0; }).value;
  const std::vector<double> one(profile.size(), 1.0);
  return integrate(profile, one).value;
}

double enclosed_volume(const GeneratingProfile& profile) {
  const int n = profile.dim();
  double v = 0.0;
  if (profile.source() == DerivativeSource::Analytic) {
    v = integrate_curve(
            profile, [n](const CurvePoint& p, double) { return ipow(p.r, n) * p.dz; }, {})
            .value;
  } else {
    const auto w = quadrature_weights(profile);
    for (std::size_t i = 0; i < profile.size(); ++i) {
      const auto& p = profile.point(i);
      v += w[i] * ipow(p.r, n) * p.dz;
    }
  }
  return unit_ball_volume(n) * std::abs(v);
}

void unit_normals(const GeneratingProfile& profile, std::vector<double>& nr, std::vector<double>& nz) {
  const std::size_t n = profile.size();
  nr.resize(n);
  nz.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = profile.point(i);
    const double s = p.speed();
    nr[i] = p.dz / s;
    nz[i] = -p.dr / s;
  }
}

namespace {

// First u-derivatives of r and z straight from the stencils (no pole
// overrides), so that the discrete functionals are smooth in the positions.
void stencil_derivatives(const GeneratingProfile& profile, std::vector<double>& dr, std::vector<double>& dz) {
  const std::size_t n = profile.size();
  std::vector<double> scratch(n);
  dr.resize(n);
  dz.resize(n);
  apply_stencils(profile.stencils(), profile.r(), -1.0, dr, scratch);
  apply_stencils(profile.stencils(), profile.z(), 1.0, dz, scratch);
}

double weighted_ratio(const DiscreteFunctional& g, std::span<const double> nr, std::span<const double> nz,
                      std::span<const double> num, std::span<const double> den) {
  double a = 0.0;
  double b = 0.0;
  for (std::size_t i = 0; i < nr.size(); ++i) {
    const double gn = g.grad_r[i] * nr[i] + g.grad_z[i] * nz[i];
    a += gn * num[i];
    b += gn * den[i];
  }
  return a / b;
}

}  // namespace

DiscreteFunctional discrete_volume(const GeneratingProfile& profile) {
  const std::size_t n = profile.size();
  const int dim = profile.dim();
  const auto w = quadrature_weights(profile);
  const auto r = profile.r();
  const auto st = profile.stencils();
  std::vector<double> dr, dz;
  stencil_derivatives(profile, dr, dz);
  const double omega = unit_ball_volume(dim);
  DiscreteFunctional out;
  out.grad_r.assign(n, 0.0);
  out.grad_z.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double rn = ipow(r[i], dim);
    out.value += w[i] * rn * dz[i];
    out.grad_r[i] += w[i] * dim * ipow(r[i], dim - 1) * dz[i];
    for (const auto& e : st[i]) out.grad_z[e.index] += w[i] * rn * e.d1;
  }
  out.value *= omega;
  for (std::size_t i = 0; i < n; ++i) {
    out.grad_r[i] *= omega;
    out.grad_z[i] *= omega;
  }
  return out;
}

DiscreteFunctional discrete_area(const GeneratingProfile& profile) {
  const std::size_t n = profile.size();
  const int dim = profile.dim();
  const auto w = quadrature_weights(profile);
  const auto r = profile.r();
  const auto st = profile.stencils();
  std::vector<double> dr, dz;
  stencil_derivatives(profile, dr, dz);
  const double sigma = unit_sphere_area(dim - 1);
  DiscreteFunctional out;
  out.grad_r.assign(n, 0.0);
  out.grad_z.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = std::hypot(dr[i], dz[i]);
    const double rp = ipow(r[i], dim - 1);
    out.value += w[i] * rp * s;
    out.grad_r[i] += w[i] * (dim - 1) * ipow(r[i], dim - 2) * s;
    const double cr = w[i] * rp * dr[i] / s;
    const double cz = w[i] * rp * dz[i] / s;
    for (const auto& e : st[i]) {
      out.grad_r[e.index] += (e.mirrored ? -1.0 : 1.0) * cr * e.d1;
      out.grad_z[e.index] += cz * e.d1;
    }
  }
  out.value *= sigma;
  for (std::size_t i = 0; i < n; ++i) {
    out.grad_r[i] *= sigma;
    out.grad_z[i] *= sigma;
  }
  return out;
}

double discrete_global_term(const GeneratingProfile& profile, FlowVariant variant, std::span<const double> H,
                            std::span<const double> nr, std::span<const double> nz) {
  if (variant == FlowVariant::Unconstrained) return 0.0;
  const std::vector<double> one(profile.size(), 1.0);
  if (variant == FlowVariant::VolumePreserving) return weighted_ratio(discrete_volume(profile), nr, nz, H, one);
  const auto g = discrete_area(profile);
  double den = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) den += (g.grad_r[i] * nr[i] + g.grad_z[i] * nz[i]) * H[i];
  if (!(den > 0.0)) throw GeometryError("area-preserving global term undefined: total mean curvature <= 0");
  std::vector<double> h2(H.size());
  for (std::size_t i = 0; i < h2.size(); ++i) h2[i] = H[i] * H[i];
  return weighted_ratio(g, nr, nz, h2, H);
}

double global_term(const GeneratingProfile& profile, FlowVariant variant, GlobalTermMethod method) {
  if (variant == FlowVariant::Unconstrained) return 0.0;
  const int n = profile.dim();

  if (method == GlobalTermMethod::DiscreteGradient) {
    const auto field = curvature_field(profile);
    std::vector<double> nr, nz;
    unit_normals(profile, nr, nz);
    return discrete_global_term(profile, variant, field.H, nr, nz);
  }

  double int_h = 0.0;
  double int_h2 = 0.0;
  double mass = 0.0;
  if (profile.source() == DerivativeSource::Analytic) {
    int_h = integrate(profile, [n](const CurvePoint& p, double) { return mean_curvature(p, n); }).value;
    if (variant == FlowVariant::AreaPreserving) {
      int_h2 = integrate(profile, [n](const CurvePoint& p, double) {
                 const double h = mean_curvature(p, n);
                 return h * h;
               }).value;
    } else {
      mass = area(profile);
    }
  } else {
    const auto field = curvature_field(profile);
    std::vector<double> h2(field.H.size());
    for (std::size_t i = 0; i < h2.size(); ++i) h2[i] = field.H[i] * field.H[i];
    int_h = integrate(profile, field.H).value;
    int_h2 = integrate(profile, h2).value;
    mass = area(profile);
  }
  if (variant == FlowVariant::VolumePreserving) return int_h / mass;
  if (!(int_h > 0.0)) throw GeometryError("area-preserving global term undefined: total mean curvature <= 0");
  return int_h2 / int_h;
}

std::vector<double> laplace_beltrami(const GeneratingProfile& profile, std::span<const double> f) {
  const std::size_t n = profile.size();
  if (f.size() != n) throw GeometryError("laplace_beltrami: field length does not match the profile");
  const int dim = profile.dim();
  const auto r = profile.r();
  const auto z = profile.z();
  const bool torus = profile.topology() == Topology::Torus;
  const std::size_t segs = torus ? n : n - 1;
  const auto& gl = gauss_legendre(3);

  // Segment k joins samples k and k+1 (mod n on tori).
  std::vector<double> flux(segs);
  std::vector<double> half_left(segs);   // measure of the half next to sample k
  std::vector<double> half_right(segs);  // measure of the half next to sample k+1
  auto half_measure = [&](double r0, double r1, double len) {
    double s = 0.0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double t = 0.5 * (1.0 + gl.nodes[q]);
      s += 0.5 * gl.weights[q] * ipow(r0 + t * (r1 - r0), dim - 1);
    }
    return s * len;
  };
  for (std::size_t k = 0; k < segs; ++k) {
    const std::size_t j = (k + 1) % n;
    const double len = std::hypot(r[j] - r[k], z[j] - z[k]);
    const double rm = 0.5 * (r[k] + r[j]);
    flux[k] = ipow(rm, dim - 1) * (f[j] - f[k]) / len;
    half_left[k] = half_measure(r[k], rm, 0.5 * len);
    half_right[k] = half_measure(r[j], rm, 0.5 * len);
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double div = 0.0;
    double vol = 0.0;
    if (torus || i + 1 < n) {
      div += flux[i % segs];
      vol += half_left[i % segs];
    }
    if (torus || i > 0) {
      const std::size_t k = i > 0 ? i - 1 : segs - 1;
      div -= flux[k];
      vol += half_right[k];
    }
    out[i] = div / vol;
  }
  return out;
}

double laplacian_from_derivatives(const CurvePoint& p, int n, double df, double ddf) {
  if (!(p.r > 0.0)) throw GeometryError("laplacian_from_derivatives: point on the axis");
  const double s2 = p.dr * p.dr + p.dz * p.dz;
  return ddf / s2 + df * ((n - 1) * p.dr / (p.r * s2) - (p.dr * p.ddr + p.dz * p.ddz) / (s2 * s2));
}

}  // namespace curvflow
