#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "swarmflow/energetics.hpp"

using namespace swarmflow;

namespace {

struct Setup {
  Grid g;
  ConstitutiveLaws laws{2.0, 0.25, 0.0};
  NonlocalOperators ops;
  EnergyContext ctx;

  Setup(int n, double R, const InteractionPotential& W, const CommunicationWeight& phi, bool regularized = false)
      : g(Grid::uniform(n, R)), ops(make_operators(g, W, phi)) {
    ctx.grid = &g;
    ctx.laws = &laws;
    ctx.ops = &ops;
    ctx.tau = 0.1;
    ctx.regularized = regularized;
    if (regularized) laws.eps_beta = 1e-4;
  }
};

std::vector<double> gaussian(const Grid& g, double s) {
  std::vector<double> r(static_cast<std::size_t>(g.n_cells));
  for (int i = 0; i < g.n_cells; ++i) r[static_cast<std::size_t>(i)] = std::exp(-0.5 * g.x(i) * g.x(i) / (s * s)) + 0.01;
  const double m = grid_mass(g, r);
  for (auto& v : r) v /= m;
  return r;
}

}  // namespace

TEST_CASE("gradient of dF vanishes for uniform density without interaction") {
  Setup s(64, 1.0, InteractionPotential::zero(), CommunicationWeight::zero());
  const auto gr = grad_delta_F(s.g, std::vector<double>(64, 0.5), s.laws, s.ops, false);
  for (double v : gr) CHECK(std::abs(v) <= 1e-12);
  const auto zero = grad_delta_F(s.g, std::vector<double>(64, 0.0), s.laws, s.ops, false);
  for (double v : zero) CHECK(v == 0.0);
}

TEST_CASE("gradient of dF for a quadratic potential is x minus the mean") {
  Setup s(128, 1.0, InteractionPotential::quadratic_only(), CommunicationWeight::zero());
  const auto gr = grad_delta_F(s.g, std::vector<double>(128, 0.5), s.laws, s.ops, false);
  for (int i = 1; i + 1 < 128; ++i) CHECK(gr[static_cast<std::size_t>(i)] == doctest::Approx(s.g.x(i)).epsilon(1e-10).scale(1.0));
}

TEST_CASE("free energy") {
  const int n = 512;
  std::vector<double> half(n, 0.5);
  Setup a(n, 1.0, InteractionPotential::zero(), CommunicationWeight::zero());
  CHECK(free_energy(a.g, half, a.laws, a.ops.W, false) == doctest::Approx(0.5).epsilon(1e-12));
  Setup b(n, 1.0, InteractionPotential::quadratic_only(), CommunicationWeight::zero());
  const double second = oracle::simpson([](double x) { return 0.5 * x * x; }, -1.0, 1.0);
  CHECK(second == doctest::Approx(1.0 / 3.0));
  CHECK(free_energy(b.g, half, b.laws, b.ops.W, false) == doctest::Approx(0.5 + 0.5 * second).epsilon(1e-5));
  CHECK(free_energy(b.g, std::vector<double>(n, 0.0), b.laws, b.ops.W, false) == 0.0);
}

TEST_CASE("alignment dissipation") {
  Setup s(128, 1.0, InteractionPotential::zero(), CommunicationWeight::constant());
  const auto rho = gaussian(s.g, 0.3);
  CHECK(alignment_dissipation(s.g, rho, std::vector<double>(128, 0.7), s.ops.phi) <= 1e-15);
  std::vector<double> u(128);
  for (int i = 0; i < 128; ++i) u[static_cast<std::size_t>(i)] = std::sin(3 * s.g.x(i));
  double ru2 = 0, ru = 0;
  for (std::size_t i = 0; i < 128; ++i) {
    ru2 += s.g.dx * rho[i] * u[i] * u[i];
    ru += s.g.dx * rho[i] * u[i];
  }
  CHECK(alignment_dissipation(s.g, rho, u, s.ops.phi) == doctest::Approx(ru2 - ru * ru).epsilon(1e-12));
  std::vector<double> point(128, 0.0);
  point[40] = 1.0 / s.g.dx;
  CHECK(alignment_dissipation(s.g, point, u, s.ops.phi) <= 1e-15);
}

TEST_CASE("choose constants") {
  ModelParams p;
  p.tau = 1.0;
  p.lambda = 3.0;
  auto c = choose_constants(p, 1.0, 0.0, 1.0);
  CHECK(c.ell == doctest::Approx(2.0));
  CHECK(c.c_lambda == doctest::Approx(0.5));
  CHECK_FALSE(c.warning);

  p.tau = 0.0;
  c = choose_constants(p, 1.0, 0.0, 1.0);
  CHECK(c.ell == doctest::Approx(-2.0));
  CHECK(c.warning);

  p.tau = 1.0;
  p.lambda = 1.0;
  c = choose_constants(p, 0.0, 0.0, 0.0);
  CHECK(c.ell == doctest::Approx(2.0));
  CHECK(c.c_lambda == doctest::Approx(0.5));

  p.lambda.reset();
  p.tau = 0.1;
  c = choose_constants(p, 1.0, 0.0, 1.2);
  CHECK(c.lambda == 32.0);
  CHECK(c.ell > 0.0);
  CHECK(c.c_lambda > 0.0);
}

TEST_CASE("report identities") {
  Setup s(128, 1.0, InteractionPotential::zero(), CommunicationWeight::constant());
  State st{gaussian(s.g, 0.3), std::vector<double>(128, 0.0), 0.0};
  const BdConstants c{4.0, 0.3, 0.2, false, {}};
  auto r = energy_report(s.ctx, st, c);
  CHECK(r.E == doctest::Approx(r.F));
  CHECK(r.E_mod - r.E == doctest::Approx(0.5 * r.bd_grad_norm).epsilon(1e-12));

  for (auto& v : st.u) v = 0.4;
  r = energy_report(s.ctx, st, c);
  CHECK(r.K_phi <= 1e-15);
  CHECK(r.E - r.F == doctest::Approx(0.08 * r.m0).epsilon(1e-12));
}

TEST_CASE("E_kappa of a linear velocity") {
  Setup s(1000, 1.0, InteractionPotential::zero(), CommunicationWeight::constant());
  State st{std::vector<double>(1000, 0.5), std::vector<double>(s.g.cell_centers), 0.0};
  const auto r = energy_report(s.ctx, st, {});
  const double want = oracle::simpson([](double x) { return 0.5 * std::pow(std::abs(x), 3.0) / 3.0; }, -1.0, 1.0);
  CHECK(want == doctest::Approx(1.0 / 12.0));
  CHECK(r.E_kappa == doctest::Approx(want).epsilon(1e-5));
}

TEST_CASE("expansion of the modulated energy, reflection and positivity on random states") {
  Setup s(128, 0.8, InteractionPotential::remark_a(), CommunicationWeight::constant(), true);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  ModelParams p;
  for (int trial = 0; trial < 20; ++trial) {
    State st{std::vector<double>(128), std::vector<double>(128), 0.0};
    for (std::size_t i = 0; i < 128; ++i) {
      st.rho[i] = 0.05 + U(rng);
      st.u[i] = U(rng) - 0.5;
    }
    auto r = energy_report(s.ctx, st, {});
    const auto c = choose_constants(p, 1.0, 0.0, r.phi_conv_rho_sup);
    apply_constants(r, c);
    CHECK(r.E_mod - r.E == doctest::Approx(r.cross + 0.5 * r.bd_grad_norm).epsilon(1e-12));
    CHECK(r.D >= 0.0);
    const auto m = energy_report(s.ctx, reflect(st), c);
    CHECK(m.J == doctest::Approx(r.J).epsilon(1e-12));
    CHECK(m.D == doctest::Approx(r.D).epsilon(1e-12));
  }
}

TEST_CASE("residual check") {
  EnergyReport a, b, c;
  a.time = 0.0;
  b.time = 0.1;
  c.time = 0.3;
  CHECK_THROWS_AS(bd_inequality_check({a, b, c}, 1e-3), ConfigError);
  c.time = 0.2;
  const auto chk = bd_inequality_check({a, b, c}, 1e-12);
  CHECK(chk.ok);
  CHECK(chk.max_r_bd == 0.0);
  b.J = 1.0;
  CHECK_FALSE(bd_inequality_check({a, b, c}, 1e-3).ok);
}

TEST_CASE("csv row") {
  EnergyReport r;
  r.time = 1.5;
  r.max_rho = 2.0;
  std::ostringstream os;
  r.write_csv(os);
  CHECK(os.str().rfind("1.5,", 0) == 0);
  CHECK(std::string(EnergyReport::csv_header()).find("bd_grad_norm,min_rho,max_rho") != std::string::npos);
}
