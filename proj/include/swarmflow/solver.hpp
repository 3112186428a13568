#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "swarmflow/core.hpp"
#include "swarmflow/energetics.hpp"
#include "swarmflow/kernels.hpp"
#include "swarmflow/nonlocal.hpp"
#include "swarmflow/thermo.hpp"

namespace swarmflow {

struct StepControl {
  double cfl = 0.9;
  double dt_max = 1e-3;
  double t_end = 1.0;
  int report_every = 10;
};

void validate_control(const StepControl& c);

// Everything a run needs besides the state.
struct Problem {
  Grid grid;
  ModelParams params;
  ConstitutiveLaws laws;
  InteractionPotential W;
  CommunicationWeight phi;  // with the cap resolved
  NonlocalOperators ops;
  AssumptionReport assumptions;
  bool regularized = true;
  GradientScheme scheme = GradientScheme::differenced;
  // Face-gradient correction of the transport velocity; suppresses odd-even decoupling.
  bool stabilize = true;

  static Problem make(const ModelParams& p, int n_cells, InteractionPotential W, CommunicationWeight phi,
                      ConvMethod method = ConvMethod::fft);
  static Problem on_grid(Grid g, const ModelParams& p, InteractionPotential W, CommunicationWeight phi,
                         ConvMethod method = ConvMethod::fft);

  EnergyContext energy_context() const;
  BdConstants constants_for(const State& s, const BdConstants* previous = nullptr) const;
};

double cfl_dt(const Grid& g, const State& s, const ConstitutiveLaws& laws, const StepControl& c);

// Tridiagonal solve, a = sub, b = diag, c = super; overwrites d with the solution.
void thomas_solve(std::vector<double> a, std::vector<double> b, std::vector<double> c, std::vector<double>& d);

// One split step: upwind transport, explicit forces, implicit viscosity.
State step(const Problem& pb, const State& s, double dt);

struct RunOptions {
  double energy_increase_tol = std::numeric_limits<double>::infinity();
  std::function<void(const State&, const EnergyReport&)> on_report;
};

struct RunResult {
  State final_state;
  std::vector<EnergyReport> reports;
  BdConstants constants;
  long steps = 0;
  double min_rho_seen = 0.0;
  double max_rho_seen = 0.0;
  double max_step_mass_drift = 0.0;  // relative
};

RunResult run(const Problem& pb, State initial, const StepControl& c, const RunOptions& opt = {});

// Longest prefix of reports with uniform spacing.
std::vector<EnergyReport> uniform_prefix(const std::vector<EnergyReport>& reports);

}  // namespace swarmflow
