#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "curvflow/constructions.hpp"
#include "curvflow/curvature.hpp"
#include "curvflow/curves.hpp"

using namespace curvflow;

namespace {

constexpr double pi = std::numbers::pi;

// Principal curvatures of r = 3 + 2 cos u, z = sqrt2 sin u worked out by hand.
double torus_lambda1(double u) { return 1.0 / std::pow(1.0 + std::sin(u) * std::sin(u), 1.5); }
double torus_lambda2(double u) {
  return std::cos(u) / ((3.0 + 2.0 * std::cos(u)) * std::sqrt(1.0 + std::sin(u) * std::sin(u)));
}

}  // namespace

TEST_CASE("round sphere of radius 2 is umbilic with curvature 1/2") {
  const auto s = round_sphere(2.0, 2, 65).profile;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto k = principal_curvatures(s, i);
    CHECK(k.lambda1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(k.lambda2 == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("elliptic torus principal curvatures against hand formulas") {
  const EllipticTorusCurve curve;
  for (double u = 0.0; u < 2.0 * pi; u += 0.1) {
    const auto k = principal_curvatures(curve.point(u));
    CHECK(k.lambda1 == doctest::Approx(torus_lambda1(u)).epsilon(1e-13));
    CHECK(k.lambda2 == doctest::Approx(torus_lambda2(u)).scale(1.0).epsilon(1e-13));
  }
  const auto s0 = curvature_scalars(principal_curvatures(curve.point(0.0)), 2);
  CHECK(s0.H == doctest::Approx(6.0 / 5.0).epsilon(1e-14));
  const auto spi = curvature_scalars(principal_curvatures(curve.point(pi)), 2);
  CHECK(std::abs(spi.H) < 1e-14);
  CHECK(spi.A2 == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("paraboloid neck principal curvatures and vanishing R") {
  const ParaboloidCurve curve;
  for (double u : {-0.4, -0.1, 0.0, 0.2, 0.5}) {
    const double lam = 1.0 / (4.0 * std::pow(std::cosh(u), 3));
    const auto k = principal_curvatures(curve.point(u));
    CHECK(k.lambda1 == doctest::Approx(-lam).epsilon(1e-13));
    CHECK(k.lambda2 == doctest::Approx(2.0 * lam).epsilon(1e-13));
    CHECK(std::abs(curvature_scalars(k, 3).R) < 1e-14);
  }
  const auto k0 = principal_curvatures(curve.point(0.0));
  CHECK(k0.lambda1 == doctest::Approx(-0.25));
  CHECK(k0.lambda2 == doctest::Approx(0.5));
}

TEST_CASE("catenoid is minimal") {
  const CatenoidCurve curve;
  for (double u = -1.0; u <= 1.0; u += 0.125) {
    const auto k = principal_curvatures(curve.point(u));
    CHECK(k.lambda1 == doctest::Approx(-k.lambda2).epsilon(1e-13));
  }
}

TEST_CASE("curvature scalars: algebraic identities on random samples") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> lam(-5.0, 5.0);
  for (int n = 2; n <= 5; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      const PrincipalCurvatures k{lam(rng), lam(rng)};
      const auto s = curvature_scalars(k, n);
      const double m = n - 1.0;
      CHECK(s.H == doctest::Approx(k.lambda1 + m * k.lambda2));
      CHECK(s.A2 == doctest::Approx(k.lambda1 * k.lambda1 + m * k.lambda2 * k.lambda2));
      CHECK(s.C == doctest::Approx(std::pow(k.lambda1, 3) + m * std::pow(k.lambda2, 3)));
      // Gauss equation, and the closed form of R for a hypersurface of revolution.
      CHECK(s.R == doctest::Approx(s.H * s.H - s.A2));
      CHECK(s.R == doctest::Approx(2.0 * m * k.lambda1 * k.lambda2 + m * (m - 1.0) * k.lambda2 * k.lambda2));
      // Cauchy-Schwarz.
      CHECK(s.A2 >= s.H * s.H / n - 1e-12);
    }
  }
}

TEST_CASE("curvature field satisfies Cauchy-Schwarz and Gauss on every construction") {
  const auto bf = bending_function(1.0, 2.0);
  for (const auto& p : {elliptic_torus(256).profile, capped_catenoid(1.0, 2.0, bf, 257).profile,
                        capped_paraboloid(1.0, 2.0, bf, 257).profile, round_sphere(1.0, 3, 65).profile}) {
    const auto f = curvature_field(p);
    for (std::size_t i = 0; i < f.size(); ++i) {
      CHECK(f.A2[i] >= f.H[i] * f.H[i] / f.n - 1e-12);
      CHECK(f.R[i] == doctest::Approx(f.H[i] * f.H[i] - f.A2[i]).scale(1.0).epsilon(1e-12));
    }
    // Umbilic poles.
    if (p.topology() == Topology::Sphere) {
      CHECK(f.lambda1.front() == doctest::Approx(f.lambda2.front()));
      CHECK(f.lambda1.back() == doctest::Approx(f.lambda2.back()));
    }
  }
}

TEST_CASE("mean curvature jet matches finite differences of H") {
  const EllipticTorusCurve curve;
  const double h = 1e-4;
  for (double u : {0.3, 1.7, pi}) {
    const auto j = mean_curvature_jet(curve, u, 2);
    auto H = [&](double x) { return mean_curvature(curve.point(x), 2); };
    CHECK(j.f == doctest::Approx(H(u)).scale(1.0).epsilon(1e-14));
    CHECK(j.df == doctest::Approx((H(u + h) - H(u - h)) / (2 * h)).scale(1.0).epsilon(1e-7));
    CHECK(j.ddf == doctest::Approx((H(u + h) - 2 * H(u) + H(u - h)) / (h * h)).scale(1.0).epsilon(1e-5));
  }
}
