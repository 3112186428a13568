#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "swarmflow/initdata.hpp"
#include "swarmflow/solver.hpp"
#include "swarmflow/steady.hpp"

using namespace swarmflow;

namespace {

const ConstitutiveLaws kLaws{2.0, 0.25, 0.0};

ConvolutionPlan remark_a_plan(const Grid& g) {
  const auto W = InteractionPotential::remark_a();
  return ConvolutionPlan(g, [&](double x) { return eval_potential(W, x); });
}

}  // namespace

TEST_CASE("support half length oracle") {
  const double L = oracle::steady_support_half_length();
  CHECK(L - std::tanh(L) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(L - 1.9605) < 1e-3);
  CHECK(oracle::simpson(oracle::steady_profile, -L, L) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("minimizer matches the analytic profile") {
  const auto g = Grid::uniform(512, 3.0);
  const auto prof = fixed_point_minimizer(g, kLaws, remark_a_plan(g));
  REQUIRE(prof.converged);
  double l1 = 0.0;
  for (int i = 0; i < g.n_cells; ++i) l1 += g.dx * std::abs(prof.rho_inf[static_cast<std::size_t>(i)] - oracle::steady_cell_average(g.x(i), g.dx));
  CHECK(l1 <= 2 * g.dx);
  CHECK(grid_mass(g, prof.rho_inf) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prof.el_residual <= 10 * g.dx);
}

TEST_CASE("residual stays below the first-order bound") {
  // the minimizer solves the discrete identity to round-off; sampling the exact profile carries the quadrature error
  for (int n : {128, 256, 512}) {
    const auto g = Grid::uniform(n, 3.0);
    const auto prof = fixed_point_minimizer(g, kLaws, remark_a_plan(g));
    CHECK(el_residual(g, prof.rho_inf, kLaws, remark_a_plan(g)).residual <= 1e-9);
    std::vector<double> exact(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) exact[static_cast<std::size_t>(i)] = oracle::steady_profile(g.x(i));
    const double r = el_residual(g, exact, kLaws, remark_a_plan(g)).residual;
    CHECK(r <= 10 * g.dx);
  }
}

TEST_CASE("pressure only minimizer is flat") {
  const auto g = Grid::uniform(100, 0.75);
  const ConvolutionPlan zero(g, [](double) { return 0.0; });
  const auto prof = fixed_point_minimizer(g, kLaws, zero);
  for (double v : prof.rho_inf) CHECK(v == doctest::Approx(1.0 / 1.5).epsilon(1e-10));
  CHECK(el_residual(g, std::vector<double>(100, 0.4), kLaws, zero).residual <= 1e-14);
}

TEST_CASE("perturbing the minimizer raises the residual") {
  const auto g = Grid::uniform(256, 3.0);
  const auto W = remark_a_plan(g);
  const auto prof = fixed_point_minimizer(g, kLaws, W);
  auto bumped = prof.rho_inf;
  for (int i = 0; i < g.n_cells; ++i) {
    auto& v = bumped[static_cast<std::size_t>(i)];
    if (v > 0.0) v += 0.01 * std::exp(-g.x(i) * g.x(i) / 0.1);
  }
  const double m = grid_mass(g, bumped);
  for (auto& v : bumped) v /= m;
  CHECK(el_residual(g, bumped, kLaws, W).residual > el_residual(g, prof.rho_inf, kLaws, W).residual);
}

TEST_CASE("renormalized rerun reproduces the profile") {
  const auto g = Grid::uniform(128, 3.0);
  const auto W = remark_a_plan(g);
  const auto a = fixed_point_minimizer(g, kLaws, W);
  MinimizerOptions two;
  two.mass = 2.0;
  const auto b = fixed_point_minimizer(g, kLaws, W, two);
  CHECK(grid_mass(g, b.rho_inf) == doctest::Approx(2.0));
  CHECK(b.lagrange_C != doctest::Approx(a.lagrange_C));
  const auto c = fixed_point_minimizer(g, kLaws, W, {}, b.rho_inf);
  for (std::size_t i = 0; i < a.rho_inf.size(); ++i) CHECK(c.rho_inf[i] == doctest::Approx(a.rho_inf[i]).epsilon(1e-9).scale(1.0));
}

TEST_CASE("primitive inversion") {
  const ConstitutiveLaws reg{2.0, 0.25, 1e-3};
  for (double r : {1e-6, 0.01, 0.3, 2.0}) {
    CHECK(invert_primitive(kLaws, pressure_primitive(kLaws, r, false), false) == doctest::Approx(r));
    CHECK(invert_primitive(reg, pressure_primitive(reg, r, true), true) == doctest::Approx(r).epsilon(1e-10));
  }
  CHECK(invert_primitive(kLaws, -1.0, false) == 0.0);
}

TEST_CASE("steady detection") {
  const auto pb = Problem::make(ModelParams{}, 128, InteractionPotential::remark_a(), CommunicationWeight::constant());
  MinimizerOptions mo;
  mo.regularized = true;
  const auto prof = fixed_point_minimizer(pb.grid, pb.laws, pb.ops.W, mo);
  StepControl c;
  c.dt_max = 2e-3;
  c.t_end = 0.5;
  c.report_every = 5;
  auto res = run(pb, make_state(pb.grid, prof.rho_inf), c);
  const auto det = detect_steady(res.reports);
  CHECK(det.steady);
  CHECK(det.first_index <= 10);

  ModelParams p;
  p.tau = 0.0;
  const auto gas = Problem::make(p, 128, InteractionPotential::zero(), CommunicationWeight::zero());
  auto spec = InitialDataSpec::benchmark();
  spec.u0 = VelocityProfile::zero();
  c.t_end = 2.0;
  res = run(gas, initial_state(spec, p, gas.grid), c);
  CHECK(res.reports.back().kinetic < res.reports[res.reports.size() / 4].kinetic);
  CHECK_FALSE(detect_steady(res.reports).steady);
}
