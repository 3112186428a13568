#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "swarmflow/core.hpp"
#include "swarmflow/nonlocal.hpp"
#include "swarmflow/thermo.hpp"

namespace swarmflow {

// How the interaction part of d/dx dF enters the gradient.
//   differenced: central difference of W*rho, so dF = phi(rho) + W*rho is differenced as a whole
//   convolved_derivative: (dW)*rho with the sampled a.e. derivative
enum class GradientScheme { differenced, convolved_derivative };

struct Gradients {
  std::vector<double> cell;  // d/dx dF per cell, 0 on vacuum cells
  std::vector<double> face;  // n-1 interior faces, face k sits between cells k and k+1
  std::vector<double> potential;  // dF itself (primitive + W*rho), 0 on vacuum cells
};

Gradients delta_F_gradients(const Grid& g, std::span<const double> rho, const ConstitutiveLaws& laws,
                            const NonlocalOperators& ops, bool regularized,
                            GradientScheme scheme = GradientScheme::differenced);

std::vector<double> grad_delta_F(const Grid& g, std::span<const double> rho, const ConstitutiveLaws& laws,
                                 const NonlocalOperators& ops, bool regularized,
                                 GradientScheme scheme = GradientScheme::differenced);

double free_energy(const Grid& g, std::span<const double> rho, const ConstitutiveLaws& laws,
                   const ConvolutionPlan& W, bool regularized);

// Via the convolution identity; see reference::alignment_double_sum for the oracle.
double alignment_dissipation(const Grid& g, std::span<const double> rho, std::span<const double> u,
                             const ConvolutionPlan& phi);

// Central differences, one-sided at the ends.
std::vector<double> velocity_gradient(const Grid& g, std::span<const double> u);

struct BdConstants {
  double lambda = 0.0;
  double ell = 0.0;
  double c_lambda = 0.0;
  bool warning = false;
  std::string message;
};

BdConstants choose_constants(const ModelParams& p, double c_W, double c_phi_W, double phi_conv_rho_sup,
                             bool phi_bounded_below = false);

struct EnergyReport {
  double time = 0.0;
  double m0 = 0.0, m1 = 0.0, m2 = 0.0, m2k = 0.0;
  double F = 0.0, E = 0.0, E_mod = 0.0, K_phi = 0.0, E_kappa = 0.0, J = 0.0, D = 0.0;
  double bd_grad_norm = 0.0;
  double min_rho = 0.0, max_rho = 0.0;

  // not part of the CSV row
  double kinetic = 0.0;     // int rho u^2
  double viscous = 0.0;     // int mu |u_x|^2
  double cross = 0.0;       // int rho u d/dx dF
  double phi_conv_rho_sup = 0.0;
  double lambda = 0.0, ell = 0.0, c_lambda = 0.0, tau = 0.0;

  static const char* csv_header();
  void write_csv(std::ostream& os) const;
};

struct EnergyContext {
  const Grid* grid = nullptr;
  const ConstitutiveLaws* laws = nullptr;
  const NonlocalOperators* ops = nullptr;
  double tau = 0.0;
  double kappa = 1.0;
  bool regularized = true;
  GradientScheme scheme = GradientScheme::differenced;
};

EnergyReport energy_report(const EnergyContext& ctx, const State& s, const BdConstants& constants);

// Recompute J and D of a report with different BD constants.
void apply_constants(EnergyReport& r, const BdConstants& c);

struct StepResidual {
  double t0 = 0.0, t1 = 0.0;
  double r_bd = 0.0;  // dJ/dt + mean D
  double r_e = 0.0;   // dE/dt + mean(int mu u_x^2 + tau int rho u^2 + K_phi)
  bool flagged = false;
};

struct BdCheck {
  std::vector<StepResidual> steps;
  double max_r_bd = 0.0;
  double max_r_e = 0.0;
  double min_D = 0.0;
  bool ok = true;
};

// Throws ConfigError when report spacing is not uniform. tol applies to both residuals.
BdCheck bd_inequality_check(const std::vector<EnergyReport>& reports, double tol,
                            std::optional<double> dt = std::nullopt);

}  // namespace swarmflow
