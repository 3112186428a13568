#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "swarmflow/initdata.hpp"
#include "swarmflow/solver.hpp"
#include "swarmflow/steady.hpp"

using namespace swarmflow;

namespace {

Problem benchmark_problem(int n) {
  return Problem::make(ModelParams{}, n, InteractionPotential::remark_a(), CommunicationWeight::constant());
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("cfl step size") {
  const auto g = Grid::uniform(200, 1.0);
  REQUIRE(g.dx == doctest::Approx(0.01));
  const ConstitutiveLaws laws{2.0, 0.25, 0.0};
  StepControl c;
  c.cfl = 0.5;
  c.dt_max = 1.0;
  auto s = make_state(g, std::vector<double>(200, 1.0));
  CHECK(cfl_dt(g, s, laws, c) == doctest::Approx(3.5355339e-3));
  c.cfl = 1.0;
  CHECK(cfl_dt(g, s, laws, c) == doctest::Approx(2 * 3.5355339e-3));
  s.rho.assign(200, 0.0);
  CHECK(cfl_dt(g, s, laws, c) == 1.0);
}

TEST_CASE("control validation") {
  StepControl c;
  c.cfl = 1.5;
  CHECK_THROWS_AS(validate_control(c), ConfigError);
  c = {};
  c.dt_max = 0.0;
  CHECK_THROWS_AS(validate_control(c), ConfigError);
}

TEST_CASE("tridiagonal solve") {
  std::vector<double> d{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> a{0.0, -1.0, -1.0, -1.0}, b{4.0, 4.0, 4.0, 4.0}, c{-1.0, -1.0, -1.0, 0.0};
  const auto rhs = d;
  thomas_solve(a, b, c, d);
  for (std::size_t i = 0; i < 4; ++i) {
    double r = b[i] * d[i];
    if (i > 0) r += a[i] * d[i - 1];
    if (i < 3) r += c[i] * d[i + 1];
    CHECK(r == doctest::Approx(rhs[i]).epsilon(1e-14));
  }
}

TEST_CASE("uniform density at rest is a fixed point") {
  const auto pb = Problem::make(ModelParams{}, 64, InteractionPotential::zero(), CommunicationWeight::zero());
  const auto s = make_state(pb.grid, std::vector<double>(64, 0.6));
  const auto next = step(pb, s, 1e-3);
  for (std::size_t i = 0; i < 64; ++i) {
    CHECK(next.rho[i] == s.rho[i]);
    CHECK(next.u[i] == 0.0);
  }
}

TEST_CASE("minimizer at rest is preserved") {
  const auto pb = benchmark_problem(128);
  MinimizerOptions mo;
  mo.regularized = true;
  const auto prof = fixed_point_minimizer(pb.grid, pb.laws, pb.ops.W, mo);
  REQUIRE(prof.converged);
  const auto s = make_state(pb.grid, prof.rho_inf);
  const auto next = step(pb, s, 2e-3);
  CHECK(max_diff(next.rho, s.rho) <= 1e-10);
  CHECK(max_diff(next.u, s.u) <= 1e-10);
}

TEST_CASE("steps conserve mass") {
  const auto pb = benchmark_problem(128);
  auto s = initial_state(InitialDataSpec::benchmark(), pb.params, pb.grid);
  for (int k = 0; k < 50; ++k) {
    const double m0 = grid_mass(pb.grid, s.rho);
    s = step(pb, s, 1e-3);
    CHECK(std::abs(grid_mass(pb.grid, s.rho) - m0) <= 1e-13 * m0);
  }
}

TEST_CASE("reflection equivariance") {
  const auto pb = benchmark_problem(128);
  auto a = initial_state(InitialDataSpec::benchmark(), pb.params, pb.grid);
  auto b = reflect(a);
  for (int k = 0; k < 100; ++k) {
    a = step(pb, a, 1e-3);
    b = step(pb, b, 1e-3);
  }
  const auto ra = reflect(a);
  CHECK(max_diff(ra.rho, b.rho) <= 1e-12);
  CHECK(max_diff(ra.u, b.u) <= 1e-12);
}

TEST_CASE("rest at the minimizer keeps the energy") {
  const auto pb = benchmark_problem(128);
  MinimizerOptions mo;
  mo.regularized = true;
  const auto prof = fixed_point_minimizer(pb.grid, pb.laws, pb.ops.W, mo);
  StepControl c;
  c.dt_max = 2e-3;
  c.t_end = 1.0;
  const auto res = run(pb, make_state(pb.grid, prof.rho_inf), c);
  for (const auto& r : res.reports) CHECK(r.E == doctest::Approx(res.reports.front().E).epsilon(1e-12));
}

TEST_CASE("energy and J decrease from rest and kinetic energy decays") {
  const auto pb = benchmark_problem(128);
  auto spec = InitialDataSpec::benchmark();
  spec.u0 = VelocityProfile::zero();
  StepControl c;
  c.dt_max = 2e-3;
  c.t_end = 20.0;
  c.report_every = 5;
  const auto res = run(pb, initial_state(spec, pb.params, pb.grid), c);
  for (std::size_t k = 0; k + 1 < res.reports.size(); ++k) {
    CHECK(res.reports[k + 1].E <= res.reports[k].E + 1e-14);
    CHECK(res.reports[k + 1].J <= res.reports[k].J + 1e-12);
  }
  CHECK(res.reports.back().kinetic < 1e-6 * std::abs(res.reports.front().F));
  CHECK(res.reports.back().time == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(res.max_step_mass_drift <= 1e-13);
}

TEST_CASE("uniform prefix") {
  std::vector<EnergyReport> r(4);
  r[1].time = 0.1;
  r[2].time = 0.2;
  r[3].time = 0.25;
  CHECK(uniform_prefix(r).size() == 3);
}
