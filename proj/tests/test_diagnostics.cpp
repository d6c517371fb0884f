#include "doctest.h"

#include <cmath>
#include <numbers>

#include "curvflow/constructions.hpp"
#include "curvflow/curves.hpp"
#include "curvflow/diagnostics.hpp"

using namespace curvflow;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kTorusHvp = 0.58149907197463922;

}  // namespace

TEST_CASE("reference value for the torus volume-preserving term") {
  CHECK(torus_hvp_reference() == doctest::Approx(kTorusHvp).epsilon(1e-14));
  CHECK(torus_hvp_reference() == doctest::Approx(pi / (4.0 * std::comp_ellint_2(1.0 / std::sqrt(2.0)))).epsilon(1e-14));
}

TEST_CASE("initial rate of H") {
  const EllipticTorusCurve torus;
  CHECK(initial_rate_H(torus, pi, 2, kTorusHvp) == doctest::Approx(0.5 - 2.0 * kTorusHvp).epsilon(1e-12));

  const auto t = elliptic_torus(1024).profile;
  const auto rate = initial_rate_H(t, FlowVariant::VolumePreserving);
  CHECK(rate[512] == doctest::Approx(0.5 - 2.0 * kTorusHvp).epsilon(1e-10));
  const auto rate_ap = initial_rate_H(t, FlowVariant::AreaPreserving);
  CHECK(rate_ap[512] <= rate[512]);

  // Catenoid neck: Laplacian of H vanishes where H does, |A|^2 = 2.
  const CatenoidCurve cat;
  CHECK(initial_rate_H(cat, 0.0, 2, 0.9) == doctest::Approx(-1.8).epsilon(1e-12));

  const auto s = round_sphere(1.0, 2, 65).profile;
  for (double x : initial_rate_H(s, FlowVariant::VolumePreserving)) CHECK(std::abs(x) < 1e-9);
}

TEST_CASE("paraboloid neck closed forms") {
  for (double u : {-0.3, 0.0, 0.1, 0.2}) {
    CAPTURE(u);
    const double lam = paraboloid_neck_lambda(u);
    CHECK(lam == doctest::Approx(1.0 / (4.0 * std::pow(std::cosh(u), 3))));
    CHECK(paraboloid_neck_cubic_ratio(u) == doctest::Approx(12.0).epsilon(1e-12));
    // Independent: |grad A|^2 - |grad H|^2 from the generic axisymmetric formula.
    CHECK(gradient_excess(ParaboloidCurve(), u, 3) ==
          doctest::Approx(paraboloid_neck_gradient_term(u)).scale(1e-3).epsilon(1e-10));
  }
  CHECK(paraboloid_neck_gradient_term(0.0) == 0.0);
}

TEST_CASE("scalar curvature rate on the paraboloid neck") {
  const auto bf = bending_function(1.0, 2.0);
  const auto c = capped_paraboloid(1.0, 2.0, bf, 257);
  const double h = 1.3;
  CHECK(initial_rate_R_neck(c, 0.0, h) == doctest::Approx(-0.375 * h).epsilon(1e-12));
  for (double u : {-0.2, 0.05, 0.2}) {
    CAPTURE(u);
    CHECK(scalar_curvature_rate(ParaboloidCurve(), u, 3, h) ==
          doctest::Approx(initial_rate_R_neck(c, u, h)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(initial_rate_R_neck(c, 1.0, h), DiagnosticsError);
}

TEST_CASE("refinement ratios and orders") {
  const auto r = refinement(1.6e-3, 1e-4);
  CHECK(r.ratio == doctest::Approx(16.0));
  CHECK(r.order == doctest::Approx(4.0));
  CHECK(refinement(8.0, 1.0, 4.0).order == doctest::Approx(1.5));
}

TEST_CASE("evolution residual needs a fixed grid and three states") {
  FlowConfig c;
  c.t_end = 1e-4;
  c.record_every = 1000000;
  const auto tr = run(elliptic_torus(256).profile, c);
  REQUIRE(tr.states.size() == 2);
  CHECK_THROWS(evolution_residual_H(tr));
}

TEST_CASE("sign tracker on a hand-made trajectory") {
  Trajectory tr;
  const auto s = round_sphere(1.0, 2, 33).profile;
  for (double t : {0.0, 0.1, 0.2}) {
    auto st = FlowState::make(s, FlowVariant::VolumePreserving, t);
    tr.states.push_back(st);
  }
  tr.states[2].min_H = -0.5;
  tr.states[1].min_H = -1e-9;
  const auto loose = sign_tracker(tr, SignField::H, 1e-8);
  REQUIRE(loose.crossed());
  CHECK(*loose.first_negative == 2);
  CHECK(loose.bracket->first == 0.1);
  CHECK(loose.bracket->second == 0.2);
  CHECK(*sign_tracker(tr, SignField::H).first_negative == 1);
  CHECK_FALSE(sign_tracker(tr, SignField::R).crossed());
}

TEST_CASE("verify: default suite passes and tight tolerances fail") {
  const auto rep = verify({});
  for (const auto& c : rep.checks()) {
    CAPTURE(c.name);
    CAPTURE(c.computed);
    CHECK(c.pass);
  }
  for (const char* name : {"A2_at_pi", "lapH_at_pi", "hVP_torus", "rate_H_at_pi", "rate_R_at_u0", "jensen", "exV", "gradT"})
    CHECK(rep.find(name) != nullptr);

  VerifyConfig tight;
  tight.tolerance = 1e-15;
  const auto t = verify(tight);
  CHECK_FALSE(t.passed());
  CHECK(t.checks().size() == rep.checks().size());
}

TEST_CASE("perturbation study on a coarse torus") {
  PerturbationConfig pc;
  pc.s_list = {0.0, 1e-4};
  pc.variants = {FlowVariant::VolumePreserving};
  pc.preflow.record_every = 1000000;
  pc.flow.record_every = 1000000;
  pc.flow.t_end = 5e-4;
  const auto rep = perturbation_experiment(elliptic_torus(256).profile, pc);
  REQUIRE(rep.rows.size() == 2);
  CHECK(std::abs(rep.rows[0].min_H) < 1e-12);
  CHECK(rep.rows[0].preflow_status == "none");
  CHECK(rep.rows[1].strictly_mean_convex());
  CHECK(rep.rows[1].min_H_u == doctest::Approx(pi).epsilon(1e-2));
  CHECK(rep.rows[1].all_crossed());
  CHECK(rep.passed());
  CHECK(rep.monotone());
}
