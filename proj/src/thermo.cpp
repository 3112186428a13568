#include "swarmflow/thermo.hpp"

#include <cmath>
#include <stdexcept>

namespace swarmflow {

ConstitutiveLaws ConstitutiveLaws::from_params(const ModelParams& p) {
  const auto d = derive_constants(p);
  return {p.gamma, p.alpha, d.eps_beta};
}

double pressure_primitive(const ConstitutiveLaws& L, double rho, bool regularized) {
  if (rho < 0.0) throw std::domain_error("negative density in pressure primitive");
  double v = L.gamma / (L.gamma - 1.0) * std::pow(rho, L.gamma - 1.0);
  if (regularized && L.eps_beta != 0.0) {
    if (rho == 0.0) throw std::domain_error("regularized pressure primitive is singular at rho = 0");
    v += L.eps_beta * L.alpha / (L.alpha - 1.0) * std::pow(rho, L.alpha - 1.0);
  }
  return v;
}

double viscosity(const ConstitutiveLaws& L, double rho, bool regularized) {
  if (rho < 0.0) throw std::domain_error("negative density in viscosity");
  double v = L.gamma * std::pow(rho, L.gamma);
  if (regularized) v += L.eps_beta * L.alpha * std::pow(rho, L.alpha);
  return v;
}

double viscosity_deriv(const ConstitutiveLaws& L, double rho, bool regularized) {
  if (rho <= 0.0) return 0.0;
  double v = L.gamma * L.gamma * std::pow(rho, L.gamma - 1.0);
  if (regularized) v += L.eps_beta * L.alpha * L.alpha * std::pow(rho, L.alpha - 1.0);
  return v;
}

double internal_energy_density(const ConstitutiveLaws& L, double rho, bool regularized) {
  if (rho < 0.0) throw std::domain_error("negative density in internal energy");
  double v = std::pow(rho, L.gamma) / (L.gamma - 1.0);
  if (regularized) v -= L.eps_beta / (1.0 - L.alpha) * std::pow(rho, L.alpha);
  return v;
}

double sound_speed(const ConstitutiveLaws& L, double rho) {
  return rho > 0.0 ? std::sqrt(L.gamma * std::pow(rho, L.gamma - 1.0)) : 0.0;
}

}  // namespace swarmflow
