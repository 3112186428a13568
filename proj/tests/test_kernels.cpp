#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "swarmflow/kernels.hpp"

using namespace swarmflow;

TEST_CASE("potential values") {
  const auto a = InteractionPotential::remark_a();
  CHECK(eval_potential(a, 2.0) == doctest::Approx(0.0));
  CHECK(eval_potential(a, 0.0) == 0.0);
  CHECK(eval_potential(a, -2.0) == doctest::Approx(0.0));
  const auto b = InteractionPotential::remark_b(0.25);
  CHECK(eval_potential(b, 1.0) == doctest::Approx(-2.0));
  CHECK(eval_potential(InteractionPotential::zero(), 0.7) == 0.0);
}

TEST_CASE("potential derivative is odd and matches differences") {
  const auto a = InteractionPotential::remark_a();
  CHECK(eval_potential_deriv(a, 0.0) == 0.0);
  for (double x : {-1.3, -0.4, 0.2, 0.9}) {
    const double h = 1e-6;
    const double fd = (eval_potential(a, x + h) - eval_potential(a, x - h)) / (2 * h);
    CHECK(eval_potential_deriv(a, x) == doctest::Approx(fd).epsilon(1e-7));
    CHECK(eval_potential_deriv(a, -x) == doctest::Approx(-eval_potential_deriv(a, x)));
  }
}

TEST_CASE("lower bound of remark-a on the domain") {
  // -|x| + x^2/2 is minimal at |x| = 1
  CHECK(potential_lower_bound(InteractionPotential::remark_a(), 1.0) == doctest::Approx(-0.5));
  CHECK(potential_lower_bound(InteractionPotential::remark_a(), 0.25) == doctest::Approx(-0.5 + 0.125));
}

TEST_CASE("communication weights") {
  const auto pw = CommunicationWeight::power(0.25);
  CHECK(eval_phi(pw, 16.0, false) == doctest::Approx(0.5));
  CHECK(eval_phi(CommunicationWeight::constant(), 3.0, false) == 1.0);
  CHECK(eval_phi(CommunicationWeight::constant(), 0.0, true) == 1.0);
  const auto capped = CommunicationWeight::power(0.25, 100.0);
  CHECK(eval_phi(capped, 0.0, true) == 100.0);
  CHECK_THROWS_AS(eval_phi(pw, 0.0, false), std::domain_error);
  CHECK_THROWS_AS(eval_phi(pw, 0.0, true), std::domain_error);
  const auto dflt = with_default_cap(pw, 0.02);
  REQUIRE(dflt.cap.has_value());
  CHECK(*dflt.cap == doctest::Approx(std::pow(0.01, -0.25)));
}

TEST_CASE("regularization error shrinks with a larger cap") {
  const auto pw = CommunicationWeight::power(0.25);
  const double e1 = phi_regularization_error(pw, 2.0, 2.0, 1.0);
  const double e2 = phi_regularization_error(pw, 4.0, 2.0, 1.0);
  CHECK(e1 > e2);
  CHECK(e2 > 0.0);
}

TEST_CASE("assumption constants") {
  ModelParams p;
  auto r = check_assumptions(InteractionPotential::remark_a(), CommunicationWeight::constant(), p);
  CHECK(r.c_W == doctest::Approx(1.0));
  CHECK(r.c_phi_W == doctest::Approx(0.0));
  CHECK(r.satisfied);
  CHECK(r.newtonian_form);

  r = check_assumptions(InteractionPotential::remark_b(0.25), CommunicationWeight::power(0.25), p);
  CHECK(r.c_W == doctest::Approx(0.0));
  CHECK(r.c_phi_W == doctest::Approx(1.3125));

  r = check_assumptions(InteractionPotential::remark_a(), CommunicationWeight::power(0.9), p);
  CHECK_FALSE(r.phi_integrability_ok);
  CHECK_FALSE(r.satisfied);
}

TEST_CASE("sampled constants for a custom smooth part") {
  ModelParams p;
  auto W = InteractionPotential::tabulated({0.0, 0.5, 1.0, 2.0}, {0.0, 0.125, 0.5, 2.0});
  const auto r = check_assumptions(W, CommunicationWeight::constant(), p, 0.01);
  CHECK(r.estimated);
  CHECK(r.c_W > 0.0);
}
