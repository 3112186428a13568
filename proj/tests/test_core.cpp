#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "swarmflow/core.hpp"

using namespace swarmflow;

TEST_CASE("domain half width against high precision evaluation") {
  ModelParams p;
  const double want = oracle::domain_half_width(2.0, 0.25, 0.01, 0.1);
  CHECK(domain_half_width(p) == doctest::Approx(want).epsilon(1e-14));
  CHECK(want == doctest::Approx(0.7626).epsilon(2e-4));
  const auto d = derive_constants(p);
  CHECK(d.beta == doctest::Approx((2.0 - 0.25) / 1.5 + 1.0));
  CHECK(d.eps_beta == doctest::Approx(std::pow(0.01, d.beta)));
}

TEST_CASE("grid is symmetric") {
  ModelParams p;
  const auto g = build_grid(p, 100);
  CHECK(g.cell_centers.size() == 100);
  CHECK(g.x(0) == -g.x(99));
  for (int i = 0; i < 100; ++i) CHECK(g.x(i) == -g.x(99 - i));
  CHECK(g.dx * 100 == doctest::Approx(2.0 * g.half_width));
  CHECK(g.half_width == doctest::Approx(domain_half_width(p)).epsilon(1e-10));
}

TEST_CASE("grid preconditions") {
  ModelParams p;
  p.epsilon = 0.5;
  CHECK_THROWS_AS(build_grid(p, 64), ConfigError);
  CHECK_THROWS_AS(Grid::uniform(4, 1.0), ConfigError);
}

TEST_CASE("parameter validation") {
  ModelParams p;
  CHECK(validate_params(p).empty());

  p.kappa = 1.5;
  auto v = validate_params(p);
  REQUIRE(v.size() == 1);
  CHECK(v[0].field == "kappa");
  CHECK(v[0].message.find("kappa exceeds 2/γ") != std::string::npos);
  CHECK(v[0].constraint == "0<κ≤min{2γ−1,2/γ}");

  p = {};
  p.alpha = 0.6;
  v = validate_params(p);
  REQUIRE(v.size() == 1);
  CHECK(v[0].message.find("alpha outside (0,1/2)") != std::string::npos);
  CHECK(!format_violations(v).empty());
}

TEST_CASE("state helpers") {
  const auto g = Grid::uniform(8, 1.0);
  auto s = make_state(g, std::vector<double>(8, 0.5));
  CHECK(s.u.size() == 8);
  CHECK(grid_mass(g, s.rho) == doctest::Approx(1.0));
  for (int i = 0; i < 8; ++i) s.u[static_cast<std::size_t>(i)] = g.x(i);
  const auto r = reflect(s);
  for (std::size_t i = 0; i < 8; ++i) CHECK(r.u[i] == s.u[i]);
  s.rho[3] = -1.0;
  CHECK_THROWS(check_state(g, s));
}
