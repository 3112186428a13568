#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "swarmflow/core.hpp"

namespace swarmflow {

enum class SmoothKind { zero, quadratic, power, custom };

// W(x) = -|x| + W~(x) when newtonian is set, otherwise W = W~.
struct InteractionPotential {
  bool newtonian = true;
  SmoothKind smooth = SmoothKind::quadratic;
  double a = 0.0;
  std::function<double(double)> custom;        // W~, even
  std::function<double(double)> custom_deriv;  // W~', odd; finite differences if empty
  std::string name = "remark-a";

  static InteractionPotential remark_a();
  static InteractionPotential remark_b(double a);
  static InteractionPotential zero();
  static InteractionPotential quadratic_only();
  // Linear interpolation in |x| of tabulated (|x|, W~) pairs; constant extrapolation.
  static InteractionPotential tabulated(std::vector<double> abs_x, std::vector<double> values, bool newtonian = true);

  double smooth_value(double x) const;
  double smooth_deriv(double x) const;
};

double eval_potential(const InteractionPotential& W, double x);
// a.e. derivative with d/dx(-|x|) := 0 at x = 0.
double eval_potential_deriv(const InteractionPotential& W, double x);
double potential_lower_bound(const InteractionPotential& W, double R);

enum class WeightKind { constant, power, zero, custom };

struct CommunicationWeight {
  WeightKind kind = WeightKind::constant;
  double value = 1.0;
  double a = 0.0;
  std::optional<double> cap;
  std::function<double(double)> custom;  // must be even, nonnegative, bounded
  std::string name = "constant";

  static CommunicationWeight constant(double value = 1.0);
  static CommunicationWeight power(double a, std::optional<double> cap = std::nullopt);
  static CommunicationWeight zero();
  static CommunicationWeight from_function(std::function<double(double)> f, std::string name = "custom");

  bool singular() const { return kind == WeightKind::power; }
  double raw(double x) const;
};

// Regularized evaluation returns min(phi, cap). Singular weights need a cap.
double eval_phi(const CommunicationWeight& phi, double x, bool regularized);

// Fill in the default cap phi(dx/2) for singular weights without one.
CommunicationWeight with_default_cap(CommunicationWeight phi, double dx);

// || phi_cap - phi ||_{L^p(-R,R)} with p = gamma/(gamma-1), by quadrature.
double phi_regularization_error(const CommunicationWeight& phi, double cap, double gamma, double R);

struct AssumptionReport {
  double c_W = 0.0;
  double c_phi_W = 0.0;
  double l_W = 0.0;
  double lower_bound = 0.0;
  bool phi_integrability_ok = false;
  bool newtonian_form = false;
  bool satisfied = false;
  bool estimated = false;  // constants sampled rather than closed form
  std::string notes;
};

AssumptionReport check_assumptions(const InteractionPotential& W, const CommunicationWeight& phi, const ModelParams& p,
                                   std::optional<double> dx = std::nullopt);

}  // namespace swarmflow
