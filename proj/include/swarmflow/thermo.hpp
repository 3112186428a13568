#pragma once

#include "swarmflow/core.hpp"

namespace swarmflow {

struct ConstitutiveLaws {
  double gamma = 2.0;
  double alpha = 0.25;
  double eps_beta = 0.0;  // weight of the regularizing power

  static ConstitutiveLaws from_params(const ModelParams& p);
};

// gamma/(gamma-1) rho^(gamma-1), plus eps_beta*alpha/(alpha-1) rho^(alpha-1) when regularized.
double pressure_primitive(const ConstitutiveLaws& laws, double rho, bool regularized);
double viscosity(const ConstitutiveLaws& laws, double rho, bool regularized);
double viscosity_deriv(const ConstitutiveLaws& laws, double rho, bool regularized);
// Antiderivative of pressure_primitive vanishing at 0.
double internal_energy_density(const ConstitutiveLaws& laws, double rho, bool regularized);
double sound_speed(const ConstitutiveLaws& laws, double rho);

}  // namespace swarmflow
