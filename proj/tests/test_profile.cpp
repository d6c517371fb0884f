#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "curvflow/constructions.hpp"
#include "curvflow/curvature.hpp"
#include "curvflow/curves.hpp"
#include "curvflow/profile.hpp"

using namespace curvflow;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> periodic_grid(std::size_t n) {
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = 2.0 * pi * static_cast<double>(i) / static_cast<double>(n);
  return u;
}

GeneratingProfile sampled_torus(std::size_t n, int order = kDefaultStencilOrder) {
  auto u = periodic_grid(n);
  std::vector<double> r(n), z(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = 3.0 + 2.0 * std::cos(u[i]);
    z[i] = std::sqrt(2.0) * std::sin(u[i]);
  }
  return GeneratingProfile::from_samples(2, Topology::Torus, u, r, z, 2.0 * pi, true, order);
}

// Max error of the FD second derivative of r against -2 cos u.
double torus_ddr_error(std::size_t n, int order) {
  const auto p = sampled_torus(n, order);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(p.point(i).ddr + 2.0 * std::cos(p.u()[i])));
  return err;
}

}  // namespace

TEST_CASE("closed-form curves: values and derivatives at u = 0") {
  const auto t = EllipticTorusCurve().point(0.0);
  CHECK(t.r == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(std::abs(t.z) < 1e-15);
  CHECK(std::abs(t.dr) < 1e-15);
  CHECK(t.dz == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  const auto c = CatenoidCurve().point(0.0);
  CHECK(c.r == doctest::Approx(1.0));
  CHECK(std::abs(c.dr) < 1e-15);
  CHECK(c.ddr == doctest::Approx(1.0));

  const auto p = ParaboloidCurve().point(0.0);
  CHECK(p.r == doctest::Approx(2.0));
  CHECK(std::abs(p.z) < 1e-15);
  CHECK(std::abs(p.dr) < 1e-15);
  CHECK(p.dz == doctest::Approx(4.0));
}

TEST_CASE("evaluate_profile on the analytic torus matches hand derivatives") {
  const auto torus = elliptic_torus(256).profile;
  for (std::size_t i = 0; i < torus.size(); i += 7) {
    const double u = torus.u()[i];
    const auto p = evaluate_profile(torus, i);
    CHECK(p.r == doctest::Approx(3.0 + 2.0 * std::cos(u)).epsilon(1e-14));
    CHECK(p.dr == doctest::Approx(-2.0 * std::sin(u)).scale(1.0).epsilon(1e-14));
    CHECK(p.dz == doctest::Approx(std::sqrt(2.0) * std::cos(u)).scale(1.0).epsilon(1e-14));
    CHECK(p.ddz == doctest::Approx(-std::sqrt(2.0) * std::sin(u)).scale(1.0).epsilon(1e-14));
  }
}

TEST_CASE("profile invariants are enforced on construction") {
  auto u = periodic_grid(32);
  std::vector<double> r(32, 1.0), z(32, 0.0);
  for (std::size_t i = 0; i < 32; ++i) {
    r[i] = 3.0 + std::cos(u[i]);
    z[i] = std::sin(u[i]);
  }
  SUBCASE("negative radius") {
    auto bad = r;
    bad[5] = -0.1;
    CHECK_THROWS_AS(GeneratingProfile::from_samples(2, Topology::Torus, u, bad, z, 2.0 * pi), GeometryError);
  }
  SUBCASE("self-intersecting figure eight") {
    std::vector<double> r8(32), z8(32);
    for (std::size_t i = 0; i < 32; ++i) {
      r8[i] = 3.0 + std::sin(2.0 * u[i]);
      z8[i] = std::sin(u[i]);
    }
    CHECK_THROWS_AS(GeneratingProfile::from_samples(2, Topology::Torus, u, r8, z8, 2.0 * pi), GeometryError);
    CHECK(find_self_intersection(r8, z8, Topology::Torus).has_value());
  }
  SUBCASE("torus needs a period") {
    CHECK_THROWS(GeneratingProfile::from_samples(2, Topology::Torus, u, r, z));
  }
  SUBCASE("grid too small for the stencil") {
    CHECK_THROWS(build_stencils(std::span<const double>(u).first(6), Topology::Torus, 2.0 * pi, 8));
  }
  CHECK_FALSE(find_self_intersection(r, z, Topology::Torus).has_value());
}

TEST_CASE("sphere profiles sit on the axis exactly at the endpoints") {
  const auto s = round_sphere(1.5, 2, 65).profile;
  CHECK(s.r()[0] == 0.0);
  CHECK(s.r()[s.size() - 1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(s.is_pole(0));
  CHECK(s.is_pole(s.size() - 1));
  for (std::size_t i = 1; i + 1 < s.size(); ++i) CHECK(s.r()[i] > 0.0);
}

TEST_CASE("stencil order is validated and propagated") {
  CHECK(valid_stencil_order(4));
  CHECK(valid_stencil_order(6));
  CHECK(valid_stencil_order(8));
  CHECK_FALSE(valid_stencil_order(5));
  CHECK_FALSE(valid_stencil_order(2));
  const auto p = sampled_torus(64, 6);
  CHECK(p.stencil_order() == 6);
  CHECK(p.with_positions({p.r().begin(), p.r().end()}, {p.z().begin(), p.z().end()}).stencil_order() == 6);
  CHECK(dilate(p, 2.0).stencil_order() == 6);
  CHECK(p.as_finite_difference(8).stencil_order() == 8);
  for (const auto& st : p.stencils()) CHECK(st.width == 7);
}

TEST_CASE("finite-difference derivatives converge at the stencil order") {
  for (int order : {4, 6, 8}) {
    CAPTURE(order);
    const double e1 = torus_ddr_error(24, order);
    const double e2 = torus_ddr_error(48, order);
    CHECK(std::log2(e1 / e2) > order - 0.3);
  }
}

TEST_CASE("sphere pole stencils reflect r oddly") {
  // Unit sphere sampled by arclength; r'' = -sin s.
  const auto a = round_sphere(1.0, 2, 129).profile;
  const auto p = a.as_finite_difference();
  for (std::size_t i : {std::size_t{0}, std::size_t{1}, std::size_t{64}, p.size() - 1}) {
    const auto e = a.point(i);
    const auto f = p.point(i);
    CHECK(std::abs(f.dr - e.dr) < 1e-7);
    CHECK(std::abs(f.ddz - e.ddz) < 1e-6);
  }
}

TEST_CASE("dilation scales curvature by 1/k") {
  const auto t = elliptic_torus(256).profile;
  std::mt19937 rng(7);
  for (double k : {0.5, 3.0}) {
    const auto d = dilate(t, k);
    std::uniform_int_distribution<std::size_t> pick(0, t.size() - 1);
    for (int trial = 0; trial < 10; ++trial) {
      const auto i = pick(rng);
      const auto a = principal_curvatures(t, i);
      const auto b = principal_curvatures(d, i);
      CHECK(b.lambda1 * k == doctest::Approx(a.lambda1).epsilon(1e-12));
      CHECK(b.lambda2 * k == doctest::Approx(a.lambda2).epsilon(1e-12));
    }
  }
}

TEST_CASE("curvature is invariant under reparametrization of the closed form") {
  // The same ellipse profile sampled on u and on v = u + 0.3 sin u.
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 2.0 * pi);
  const EllipticTorusCurve curve;
  for (int trial = 0; trial < 20; ++trial) {
    const double v = dist(rng);
    // Newton for u with u + 0.3 sin u = v.
    double u = v;
    for (int it = 0; it < 50; ++it) u -= (u + 0.3 * std::sin(u) - v) / (1.0 + 0.3 * std::cos(u));
    auto p = curve.point(u);
    const auto k0 = principal_curvatures(p);
    const double du = 1.0 / (1.0 + 0.3 * std::cos(u));  // du/dv
    const double ddu = 0.3 * std::sin(u) * du * du * du;
    CurvePoint q{p.r, p.z, p.dr * du, p.dz * du, p.ddr * du * du + p.dr * ddu, p.ddz * du * du + p.dz * ddu};
    const auto k1 = principal_curvatures(q);
    CHECK(k1.lambda1 == doctest::Approx(k0.lambda1).epsilon(1e-12));
    CHECK(k1.lambda2 == doctest::Approx(k0.lambda2).epsilon(1e-12));
  }
}
