#include "doctest.h"

#include <cmath>
#include <numbers>

#include "curvflow/constructions.hpp"
#include "curvflow/curvature.hpp"

using namespace curvflow;

TEST_CASE("bending function: endpoint values, monotone and concave") {
  for (double eps : {1.0, 2.0}) {
    const auto bf = bending_function(1.0, 2.0, BendingParams{eps});
    CHECK(bf.certified());
    CHECK(bf.phi(1.0) == 1.0);
    CHECK(bf.phi(2.0 - 1e-15) == doctest::Approx(0.0).epsilon(1e-6));
    for (int i = 1; i < 400; ++i) {
      const double z = 1.0 + i / 400.0;
      const auto [d1, d2] = bf.scaled_derivatives(z);
      CHECK(d1 < 0.0);
      CHECK(d2 < 0.0);
    }
  }
}

TEST_CASE("bending function is flat at the junction") {
  const auto bf = bending_function(1.0, 2.0);
  // One-sided differences of phi at a+ from points inside the flat region.
  const double h = 1e-3;
  std::array<double, 6> f{};
  for (int k = 0; k < 6; ++k) f[k] = bf.one_minus_phi(1.0 + k * h);
  const double d1 = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
  const double d2 = (45 * f[0] - 154 * f[1] + 214 * f[2] - 156 * f[3] + 61 * f[4] - 10 * f[5]) / (12 * h * h);
  CHECK(std::abs(d1) < 1e-8);
  CHECK(std::abs(d2) < 1e-8);
  CHECK(bf.certificate().passed());
}

TEST_CASE("capped catenoid: certificate and neck values") {
  const auto bf = bending_function(1.0, 2.0);
  const auto c = capped_catenoid(1.0, 2.0, bf, 1024);
  CHECK(c.profile.size() == 1025);  // raised to odd
  CHECK(c.certificate.passed());
  REQUIRE(c.certificate.find("minimality_residual") != nullptr);
  CHECK(c.certificate.find("minimality_residual")->computed < 1e-12);
  const std::size_t mid = c.profile.size() / 2;
  CHECK(std::abs(c.profile.z()[mid]) < 1e-14);
  const auto k = principal_curvatures(c.profile, mid);
  CHECK(k.lambda1 == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(k.lambda2 == doctest::Approx(1.0).epsilon(1e-12));
  const auto f = curvature_field(c.profile);
  CHECK(std::abs(f.H[mid]) < 1e-12);
  CHECK(f.A2[mid] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(*std::min_element(f.H.begin(), f.H.end()) >= -1e-10);
  CHECK_NOTHROW(c.require_certified());
}

TEST_CASE("capped paraboloid: certificate, neck values and S identity") {
  const auto bf = bending_function(1.0, 2.0);
  const auto c = capped_paraboloid(1.0, 2.0, bf, 1025);
  CHECK(c.certificate.passed());
  CHECK(c.profile.dim() == 3);
  for (const char* name : {"S_residual", "cap_S_nonnegative", "R_nonnegative", "neck_R"}) {
    CAPTURE(name);
    REQUIRE(c.certificate.find(name) != nullptr);
    CHECK(c.certificate.find(name)->pass);
  }
  const std::size_t mid = c.profile.size() / 2;
  const auto k = principal_curvatures(c.profile, mid);
  CHECK(k.lambda1 == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(k.lambda2 == doctest::Approx(0.5).epsilon(1e-12));
  const auto s = curvature_scalars(k, 3);
  CHECK(s.H == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(std::abs(s.R) < 1e-12);
}

TEST_CASE("elliptic torus certificate flags the unique zero of H") {
  const auto t = elliptic_torus(1024);
  CHECK(t.certificate.passed());
  for (const char* name : {"H_closed_form", "H_nonnegative", "H_zero_at_pi", "H_unique_zero", "metric_guu", "metric_gvv"}) {
    CAPTURE(name);
    REQUIRE(t.certificate.find(name) != nullptr);
    CHECK(t.certificate.find(name)->pass);
  }
  CHECK(t.certificate.find("H_closed_form")->computed < 1e-10);
  CHECK(t.certificate.find("H_zero_at_pi")->computed == doctest::Approx(std::numbers::pi));
}

TEST_CASE("round sphere has constant H and passes") {
  for (int n : {2, 3, 4}) {
    const auto s = round_sphere(2.0, n, 65);
    CHECK(s.certificate.passed());
    const auto f = curvature_field(s.profile);
    for (double h : f.H) CHECK(h == doctest::Approx(n / 2.0).epsilon(1e-12));
  }
  CHECK_THROWS(round_sphere(-1.0, 2, 65));
}

TEST_CASE("construction scale covariance: dilated catenoid keeps H = 0 on the neck") {
  const auto bf = bending_function(1.0, 2.0);
  const auto c = capped_catenoid(1.0, 2.0, bf, 257);
  const auto d = dilate(c.profile, 0.1);
  const auto f0 = curvature_field(c.profile);
  const auto f1 = curvature_field(d);
  for (std::size_t i = 0; i < f0.size(); i += 16)
    CHECK(f1.H[i] * 0.1 == doctest::Approx(f0.H[i]).scale(1.0).epsilon(1e-12));
}
