#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "curvflow/constructions.hpp"
#include "curvflow/curvature.hpp"
#include "curvflow/curves.hpp"
#include "curvflow/geometry.hpp"
#include "curvflow/quadrature.hpp"

using namespace curvflow;

namespace {

constexpr double pi = std::numbers::pi;

// Composite Simpson rule, independent of the library quadrature.
template <class F>
double simpson(F f, double a, double b, int m) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Frozen from a 30-digit quadrature of 2 pi sqrt2 int_0^{2pi} sqrt(1+sin^2 u)(3+2cos u) du.
constexpr double kTorusArea = 203.67229892713843;
// Pappus: 2 pi * 3 * (pi * 2 * sqrt2).
const double kTorusVolume = 12.0 * std::sqrt(2.0) * pi * pi;
// pi / (4 E(1/sqrt2)), from the 30-digit oracle.
constexpr double kTorusHvp = 0.58149907197463922;
// int H^2 dA / int H dA on the torus, 30-digit oracle.
constexpr double kTorusHap = 0.77407445881686912;

double torus_H(double u) {
  const double c = std::cos(u), s = std::sin(u);
  return std::pow(std::cos(0.5 * u), 2) * (5.0 + 2.0 * c - std::cos(2.0 * u)) /
         ((3.0 + 2.0 * c) * std::pow(1.0 + s * s, 1.5));
}

}  // namespace

TEST_CASE("frozen torus oracles agree with an independent Simpson rule") {
  const double area =
      2.0 * pi * std::sqrt(2.0) *
      simpson([](double u) { return std::sqrt(1.0 + std::sin(u) * std::sin(u)) * (3.0 + 2.0 * std::cos(u)); }, 0.0,
              2.0 * pi, 2000);
  CHECK(area == doctest::Approx(kTorusArea).epsilon(1e-12));
  const double E = std::comp_ellint_2(1.0 / std::sqrt(2.0));
  CHECK(pi / (4.0 * E) == doctest::Approx(kTorusHvp).epsilon(1e-14));
}

TEST_CASE("area and volume of round spheres") {
  const auto s2 = round_sphere(2.0, 2, 129).profile;
  CHECK(area(s2) == doctest::Approx(16.0 * pi).epsilon(1e-12));
  CHECK(enclosed_volume(s2) == doctest::Approx(32.0 * pi / 3.0).epsilon(1e-12));
  const double rho = 1.3;
  const auto s3 = round_sphere(rho, 3, 129).profile;
  CHECK(area(s3) == doctest::Approx(2.0 * pi * pi * std::pow(rho, 3)).epsilon(1e-12));
  CHECK(enclosed_volume(s3) == doctest::Approx(0.5 * pi * pi * std::pow(rho, 4)).epsilon(1e-12));
  // Grid rule on the FD profile.
  const auto fd = s2.as_finite_difference();
  CHECK(area(fd) == doctest::Approx(16.0 * pi).epsilon(1e-6));
  CHECK(enclosed_volume(fd) == doctest::Approx(32.0 * pi / 3.0).epsilon(1e-6));
}

TEST_CASE("unit sphere and ball measures") {
  CHECK(unit_sphere_area(1) == doctest::Approx(2.0 * pi));
  CHECK(unit_sphere_area(2) == doctest::Approx(4.0 * pi));
  CHECK(unit_sphere_area(3) == doctest::Approx(2.0 * pi * pi));
  CHECK(unit_ball_volume(2) == doctest::Approx(pi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * pi / 3.0));
}

TEST_CASE("elliptic torus area, volume and global terms") {
  const auto t = elliptic_torus(1024).profile;
  CHECK(area(t) == doctest::Approx(kTorusArea).epsilon(1e-12));
  CHECK(enclosed_volume(t) == doctest::Approx(kTorusVolume).epsilon(1e-12));
  const double hvp = global_term(t, FlowVariant::VolumePreserving);
  const double hap = global_term(t, FlowVariant::AreaPreserving);
  CHECK(hvp == doctest::Approx(kTorusHvp).epsilon(1e-12));
  CHECK(hap == doctest::Approx(kTorusHap).epsilon(1e-10));
  CHECK(hvp >= 0.5);
  CHECK(hap >= hvp);
  CHECK(global_term(t, FlowVariant::Unconstrained) == 0.0);

  // The grid rule is spectrally accurate on the periodic torus.
  const auto f = curvature_field(t);
  CHECK(integrate(t, f.H).value == doctest::Approx(kTorusHvp * kTorusArea).epsilon(1e-12));
  const double hd = global_term(t.as_finite_difference(), FlowVariant::VolumePreserving,
                                GlobalTermMethod::DiscreteGradient);
  CHECK(hd == doctest::Approx(kTorusHvp).epsilon(1e-6));
}

TEST_CASE("sphere global terms equal n / radius") {
  for (int n : {2, 3}) {
    const auto s = round_sphere(2.0, n, 129).profile;
    CHECK(global_term(s, FlowVariant::VolumePreserving) == doctest::Approx(n / 2.0).epsilon(1e-12));
    CHECK(global_term(s, FlowVariant::AreaPreserving) == doctest::Approx(n / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("Jensen: area-preserving term dominates on random positive profiles") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> amp(-0.3, 0.3);
  for (int trial = 0; trial < 10; ++trial) {
    const double a1 = amp(rng), a2 = amp(rng), a3 = amp(rng);
    const std::size_t n = 256;
    std::vector<double> u(n), r(n), z(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = 2.0 * pi * i / n;
      const double rad = 1.0 + a1 * std::cos(2 * u[i]) * 0.5 + a2 * std::sin(3 * u[i]) * 0.3 + a3 * 0.1 * std::cos(u[i]);
      r[i] = 4.0 + rad * std::cos(u[i]);
      z[i] = rad * std::sin(u[i]);
    }
    const auto p = GeneratingProfile::from_samples(2, Topology::Torus, u, r, z, 2.0 * pi);
    const auto f = curvature_field(p);
    if (integrate(p, f.H).value <= 0.0) continue;
    CHECK(global_term(p, FlowVariant::AreaPreserving) >= global_term(p, FlowVariant::VolumePreserving) - 1e-12);
  }
}

TEST_CASE("Laplace-Beltrami: constants and the first spherical harmonic") {
  const auto s = round_sphere(1.0, 2, 257).profile;
  std::vector<double> one(s.size(), 1.0);
  for (double v : laplace_beltrami(s, one)) CHECK(std::abs(v) < 1e-10);

  auto err = [](std::size_t n) {
    const auto p = round_sphere(1.0, 2, n).profile;
    std::vector<double> z(p.z().begin(), p.z().end());
    const auto L = laplace_beltrami(p, z);
    double e = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) e = std::max(e, std::abs(L[i] + 2.0 * z[i]));
    return e;
  };
  const double e1 = err(129), e2 = err(257);
  CHECK(e2 < 1e-3);
  CHECK(std::log2(e1 / e2) > 1.9);
}

TEST_CASE("Laplacian of H at u = pi on the torus") {
  const EllipticTorusCurve curve;
  const auto j = mean_curvature_jet(curve, pi, 2);
  CHECK(laplacian_from_derivatives(curve.point(pi), 2, j.df, j.ddf) == doctest::Approx(0.5).epsilon(1e-12));

  auto fd = [](std::size_t n) {
    const auto t = elliptic_torus(n).profile;
    std::vector<double> H(n);
    for (std::size_t i = 0; i < n; ++i) H[i] = torus_H(t.u()[i]);
    return std::abs(laplace_beltrami(t, H)[n / 2] - 0.5);
  };
  const double e1 = fd(256), e2 = fd(512);
  CHECK(std::log2(e1 / e2) > 1.9);
}

TEST_CASE("discrete volume and area gradients match finite differences") {
  const auto t = elliptic_torus(256).profile.as_finite_difference();
  const auto vol = discrete_volume(t);
  const auto ar = discrete_area(t);
  std::mt19937 rng(9);
  std::uniform_int_distribution<std::size_t> pick(0, t.size() - 1);
  const double eps = 1e-6;
  for (int trial = 0; trial < 8; ++trial) {
    const auto i = pick(rng);
    std::vector<double> r(t.r().begin(), t.r().end()), z(t.z().begin(), t.z().end());
    auto rp = r, rm = r;
    rp[i] += eps;
    rm[i] -= eps;
    const auto pp = t.with_positions(rp, z), pm = t.with_positions(rm, z);
    CHECK(vol.grad_r[i] ==
          doctest::Approx((discrete_volume(pp).value - discrete_volume(pm).value) / (2 * eps)).epsilon(1e-6));
    CHECK(ar.grad_r[i] == doctest::Approx((discrete_area(pp).value - discrete_area(pm).value) / (2 * eps)).epsilon(1e-6));
    auto zp = z, zm = z;
    zp[i] += eps;
    zm[i] -= eps;
    const auto qp = t.with_positions(r, zp), qm = t.with_positions(r, zm);
    CHECK(vol.grad_z[i] == doctest::Approx((discrete_volume(qp).value - discrete_volume(qm).value) / (2 * eps))
                               .scale(1.0)
                               .epsilon(1e-6));
  }
}

TEST_CASE("quadrature primitives") {
  const auto I = integrate_adaptive([](double x) { return std::exp(-x * x); }, 0.0, 3.0);
  CHECK(I.value == doctest::Approx(0.5 * std::sqrt(pi) * std::erf(3.0)).epsilon(1e-13));
  CHECK(integrate_gauss([](double x) { return std::pow(x, 7); }, 0.0, 1.0, 4) == doctest::Approx(0.125));
  const std::vector<double> nodes{-1.0, 0.0, 1.0};
  const auto w = fd_weights(0.0, nodes, 2);
  CHECK(w[1][0] == doctest::Approx(-0.5));
  CHECK(w[1][2] == doctest::Approx(0.5));
  CHECK(w[2][1] == doctest::Approx(-2.0));
}
