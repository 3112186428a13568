#include "swarmflow/kernels.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <sstream>

namespace swarmflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double interp_abs(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  const double ax = std::abs(x);
  if (ax <= xs.front()) return ys.front();
  if (ax >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), ax);
  const auto k = static_cast<std::size_t>(it - xs.begin());
  const double t = (ax - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return ys[k - 1] + t * (ys[k] - ys[k - 1]);
}

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

InteractionPotential InteractionPotential::remark_a() { return {}; }

InteractionPotential InteractionPotential::remark_b(double a) {
  InteractionPotential W;
  W.smooth = SmoothKind::power;
  W.a = a;
  W.name = "remark-b";
  return W;
}

InteractionPotential InteractionPotential::zero() {
  InteractionPotential W;
  W.newtonian = false;
  W.smooth = SmoothKind::zero;
  W.name = "zero";
  return W;
}

InteractionPotential InteractionPotential::quadratic_only() {
  InteractionPotential W;
  W.newtonian = false;
  W.name = "quadratic";
  return W;
}

InteractionPotential InteractionPotential::tabulated(std::vector<double> abs_x, std::vector<double> values,
                                                     bool newtonian) {
  if (abs_x.size() < 2 || abs_x.size() != values.size())
    throw ConfigError("tabulated potential needs matching |x| and value arrays of length >= 2");
  if (!std::is_sorted(abs_x.begin(), abs_x.end()) || abs_x.front() < 0.0)
    throw ConfigError("tabulated potential abscissae must be nonnegative and increasing");
  InteractionPotential W;
  W.newtonian = newtonian;
  W.smooth = SmoothKind::custom;
  W.name = "tabulated";
  W.custom = [xs = abs_x, ys = values](double x) { return interp_abs(xs, ys, x); };
  W.custom_deriv = [xs = std::move(abs_x), ys = std::move(values)](double x) {
    const double ax = std::abs(x);
    if (ax <= xs.front() || ax >= xs.back()) return 0.0;
    auto it = std::upper_bound(xs.begin(), xs.end(), ax);
    const auto k = static_cast<std::size_t>(it - xs.begin());
    return sgn(x) * (ys[k] - ys[k - 1]) / (xs[k] - xs[k - 1]);
  };
  return W;
}

double InteractionPotential::smooth_value(double x) const {
  switch (smooth) {
    case SmoothKind::zero: return 0.0;
    case SmoothKind::quadratic: return 0.5 * x * x;
    case SmoothKind::power: return -std::pow(std::abs(x), 2.0 - a);
    case SmoothKind::custom: return custom ? custom(x) : 0.0;
  }
  return 0.0;
}

double InteractionPotential::smooth_deriv(double x) const {
  switch (smooth) {
    case SmoothKind::zero: return 0.0;
    case SmoothKind::quadratic: return x;
    case SmoothKind::power: return x == 0.0 ? 0.0 : -(2.0 - a) * sgn(x) * std::pow(std::abs(x), 1.0 - a);
    case SmoothKind::custom: {
      if (custom_deriv) return custom_deriv(x);
      if (!custom) return 0.0;
      const double h = 1e-6 * std::max(1.0, std::abs(x));
      return (custom(x + h) - custom(x - h)) / (2.0 * h);
    }
  }
  return 0.0;
}

double eval_potential(const InteractionPotential& W, double x) {
  return (W.newtonian ? -std::abs(x) : 0.0) + W.smooth_value(x);
}

double eval_potential_deriv(const InteractionPotential& W, double x) {
  return (W.newtonian ? -sgn(x) : 0.0) + W.smooth_deriv(x);
}

double potential_lower_bound(const InteractionPotential& W, double R) {
  const double L = 2.0 * R;
  if (W.newtonian && W.smooth == SmoothKind::quadratic) return L >= 1.0 ? -0.5 : -L + 0.5 * L * L;
  if (W.smooth == SmoothKind::zero) return W.newtonian ? -L : 0.0;
  if (W.smooth == SmoothKind::power && W.newtonian) return -L - std::pow(L, 2.0 - W.a);
  const int m = 8192;
  double lo = kInf;
  for (int k = 0; k <= m; ++k) lo = std::min(lo, eval_potential(W, -L + 2.0 * L * k / m));
  return lo;
}

CommunicationWeight CommunicationWeight::constant(double value) {
  CommunicationWeight w;
  w.value = value;
  return w;
}

CommunicationWeight CommunicationWeight::power(double a, std::optional<double> cap) {
  CommunicationWeight w;
  w.kind = WeightKind::power;
  w.a = a;
  w.cap = cap;
  w.name = "power";
  return w;
}

CommunicationWeight CommunicationWeight::zero() {
  CommunicationWeight w;
  w.kind = WeightKind::zero;
  w.value = 0.0;
  w.name = "zero";
  return w;
}

CommunicationWeight CommunicationWeight::from_function(std::function<double(double)> f, std::string name) {
  CommunicationWeight w;
  w.kind = WeightKind::custom;
  w.custom = std::move(f);
  w.name = std::move(name);
  return w;
}

double CommunicationWeight::raw(double x) const {
  switch (kind) {
    case WeightKind::constant: return value;
    case WeightKind::zero: return 0.0;
    case WeightKind::power: return x == 0.0 ? kInf : std::pow(std::abs(x), -a);
    case WeightKind::custom: return custom ? custom(x) : 0.0;
  }
  return 0.0;
}

double eval_phi(const CommunicationWeight& phi, double x, bool regularized) {
  if (!regularized) {
    if (phi.singular() && x == 0.0) throw std::domain_error("singular communication weight evaluated at 0");
    return phi.raw(x);
  }
  if (phi.singular() && !phi.cap) throw std::domain_error("regularized singular weight needs a cap");
  const double v = phi.raw(x);
  return phi.cap ? std::min(v, *phi.cap) : v;
}

CommunicationWeight with_default_cap(CommunicationWeight phi, double dx) {
  if (phi.singular() && !phi.cap) phi.cap = phi.raw(0.5 * dx);
  return phi;
}

double phi_regularization_error(const CommunicationWeight& phi, double cap, double gamma, double R) {
  const double p = gamma / (gamma - 1.0);
  auto excess = [&](double x) {
    const double v = phi.raw(x);
    return v > cap ? std::pow(v - cap, p) : 0.0;
  };
  double upper = R;
  if (phi.kind == WeightKind::power) upper = std::min(R, std::pow(cap, -1.0 / phi.a));
  if (phi.kind == WeightKind::constant || phi.kind == WeightKind::zero)
    return std::pow(2.0 * R * excess(1.0), 1.0 / p);
  if (!(upper > 0.0)) return 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double half = integrator.integrate(excess, 0.0, upper);
  return std::pow(2.0 * half, 1.0 / p);
}

AssumptionReport check_assumptions(const InteractionPotential& W, const CommunicationWeight& phi,
                                   const ModelParams& p, std::optional<double> dx) {
  AssumptionReport r;
  std::ostringstream notes;
  const double R = domain_half_width(p);
  r.newtonian_form = W.newtonian;
  if (!W.newtonian) notes << "potential is not of the form -|x| + W~; ";

  switch (phi.kind) {
    case WeightKind::constant: r.phi_integrability_ok = phi.value >= 0.0; break;
    case WeightKind::zero: r.phi_integrability_ok = true; break;
    case WeightKind::power: r.phi_integrability_ok = phi.a > 0.0 && phi.a < (p.gamma - 1.0) / p.gamma; break;
    case WeightKind::custom: {
      const double h = dx ? 0.25 * *dx : 1e-6;
      r.phi_integrability_ok = static_cast<bool>(phi.custom) && std::isfinite(phi.custom(h)) && phi.custom(h) >= 0.0;
      break;
    }
  }
  if (!r.phi_integrability_ok) notes << "communication weight fails local integrability; ";

  switch (W.smooth) {
    case SmoothKind::zero:
      r.c_W = 0.0;
      r.c_phi_W = 0.0;
      r.l_W = 0.0;
      break;
    case SmoothKind::quadratic:
      r.c_W = 1.0;
      r.c_phi_W = 0.0;
      r.l_W = 1.0;
      break;
    case SmoothKind::power: {
      const double a = W.a;
      const double k = (2.0 - a) * (1.0 - a);
      r.c_W = k < 0.0 ? kInf : 0.0;
      r.l_W = 2.0 - a;
      if (k <= 0.0) {
        r.c_phi_W = 0.0;
      } else if (phi.kind == WeightKind::power && phi.a >= a) {
        r.c_phi_W = phi.a == a ? k : k * std::max(1.0, std::pow(2.0 * R, phi.a - a));
        if (phi.a > a) notes << "c_phi_W taken over |x| <= 2R; ";
      } else {
        r.c_phi_W = a > 0.0 ? kInf : k / std::max(phi.raw(1.0), 0.0);
      }
      break;
    }
    case SmoothKind::custom: {
      r.estimated = true;
      const double lo = dx ? 0.25 * *dx : 1e-4 * R;
      const double hi = 4.0 * R;
      const int m = 256;
      double cw = 0.0, cpw = 0.0, lw = 0.0;
      for (int k = 0; k < m; ++k) {
        const double ax = lo * std::pow(hi / lo, static_cast<double>(k) / (m - 1));
        for (double x : {ax, -ax}) {
          const double h = 1e-3 * ax;
          const double w2 = (W.smooth_deriv(x + h) - W.smooth_deriv(x - h)) / (2.0 * h);
          cw = std::max(cw, std::max(w2, 0.0));
          const double neg = std::max(-w2, 0.0);
          if (neg > 0.0) {
            const double ph = phi.raw(x);
            cpw = std::max(cpw, ph > 0.0 ? neg / ph : kInf);
          }
          lw = std::max(lw, std::abs(W.smooth_deriv(x)) / (1.0 + ax));
        }
      }
      r.c_W = cw;
      r.c_phi_W = cpw;
      r.l_W = lw;
      notes << "constants estimated by sampling; ";
      break;
    }
  }
  r.lower_bound = potential_lower_bound(W, R);
  const bool finite = std::isfinite(r.c_W) && std::isfinite(r.c_phi_W) && std::isfinite(r.l_W);
  if (!finite) notes << "assumption constants are not finite; ";
  r.satisfied = r.newtonian_form && finite && r.phi_integrability_ok;
  r.notes = notes.str();
  return r;
}

}  // namespace swarmflow
