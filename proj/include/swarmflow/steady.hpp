#pragma once

#include <span>
#include <vector>

#include "swarmflow/core.hpp"
#include "swarmflow/energetics.hpp"
#include "swarmflow/nonlocal.hpp"
#include "swarmflow/thermo.hpp"

namespace swarmflow {

struct SteadyTolerances {
  double kinetic = 1e-8;
  double bd_grad = 1e-6;
  int window = 10;
};

struct SteadyDetection {
  bool steady = false;
  int first_index = -1;  // first report at which the test passed
  double time = 0.0;
  struct Row {
    double time, kinetic, bd_grad_norm;
  };
  std::vector<Row> table;
};

SteadyDetection detect_steady(const std::vector<EnergyReport>& reports, const SteadyTolerances& tol = {});

struct ElResidual {
  double residual = 0.0;
  double C = 0.0;
  int support_lo = -1;
  int support_hi = -1;
  double threshold = 0.0;
};

// Support = cells above support_rel * max(rho). Throws ConfigError on empty support.
ElResidual el_residual(const Grid& g, std::span<const double> rho, const ConstitutiveLaws& laws,
                       const ConvolutionPlan& W, double support_rel = 1e-10, bool regularized = false);

struct MinimizerOptions {
  double mass = 1.0;
  double damping = 0.5;
  double tol = 1e-12;
  long max_sweeps = 100000;
  bool regularized = false;
  double support_rel = 1e-10;
};

struct SteadyProfile {
  std::vector<double> rho_inf;
  int support_lo = -1;
  int support_hi = -1;
  double el_residual = 0.0;
  double lagrange_C = 0.0;
  double support_threshold = 0.0;
  bool converged = false;
  long sweeps = 0;
  double last_change = 0.0;
};

SteadyProfile fixed_point_minimizer(const Grid& g, const ConstitutiveLaws& laws, const ConvolutionPlan& W,
                                    const MinimizerOptions& opt = {}, std::span<const double> initial = {});

// Inverse of the pressure primitive on its range; 0 below the unregularized range.
double invert_primitive(const ConstitutiveLaws& laws, double value, bool regularized);

}  // namespace swarmflow
