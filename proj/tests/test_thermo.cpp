#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "swarmflow/thermo.hpp"

using namespace swarmflow;

namespace {
ConstitutiveLaws laws(double gamma, double eps_beta = 0.0) { return {gamma, 0.25, eps_beta}; }
}  // namespace

TEST_CASE("pressure primitive") {
  CHECK(pressure_primitive(laws(2.0), 1.0, false) == doctest::Approx(2.0));
  CHECK(pressure_primitive(laws(1.5), 4.0, false) == doctest::Approx(6.0));
  CHECK(pressure_primitive(laws(2.0, 0.01), 1.0, true) == doctest::Approx(2.0 - 1.0 / 300.0).epsilon(1e-14));
  CHECK_THROWS(pressure_primitive(laws(2.0, 0.01), 0.0, true));
}

TEST_CASE("viscosity") {
  CHECK(viscosity(laws(2.0), 2.0, false) == doctest::Approx(8.0));
  CHECK(viscosity(laws(2.0), 0.0, false) == 0.0);
  CHECK(viscosity(laws(2.0, 0.01), 1.0, true) == doctest::Approx(2.0025));
  const double h = 1e-6;
  for (double r : {0.3, 1.0, 2.5}) {
    const double fd = (viscosity(laws(2.0, 0.01), r + h, true) - viscosity(laws(2.0, 0.01), r - h, true)) / (2 * h);
    CHECK(viscosity_deriv(laws(2.0, 0.01), r, true) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("internal energy is the antiderivative of the primitive") {
  CHECK(internal_energy_density(laws(2.0), 1.0, false) == doctest::Approx(1.0));
  CHECK(internal_energy_density(laws(2.0), 0.0, false) == 0.0);
  const auto L = laws(2.0, 0.01);
  // the regularized integrand is singular at 0; substitute r = s^4 to make it smooth
  const double q = oracle::simpson(
      [&](double s) {
        s = std::max(s, 1e-12);
        return 4 * s * s * s * pressure_primitive(L, s * s * s * s, true);
      },
      0.0, 1.0, 200000);
  CHECK(std::abs(internal_energy_density(L, 1.0, true) - q) <= 1e-10);
}

TEST_CASE("viscosity and primitive are linked") {
  for (bool reg : {false, true}) {
    const auto L = laws(2.0, 0.01);
    for (double r : {0.05, 0.5, 1.7}) {
      const double h = 1e-6 * r;
      const double dphi = (pressure_primitive(L, r + h, reg) - pressure_primitive(L, r - h, reg)) / (2 * h);
      CHECK(std::abs(viscosity(L, r, reg) - r * r * dphi) / (1 + viscosity(L, r, reg)) <= 1e-6);
    }
  }
}

TEST_CASE("sound speed") { CHECK(sound_speed(laws(2.0), 1.0) == doctest::Approx(std::sqrt(2.0))); }
