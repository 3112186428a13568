#include "swarmflow/steady.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <limits>

namespace swarmflow {

namespace {

template <class F>
double solve_increasing(F f, double lo, double hi) {
  double flo = f(lo), fhi = f(hi);
  double step = std::max(1.0, hi - lo);
  for (int k = 0; flo > 0.0 && k < 200; ++k) {
    hi = lo;
    fhi = flo;
    lo -= step;
    step *= 2.0;
    flo = f(lo);
  }
  step = std::max(1.0, hi - lo);
  for (int k = 0; fhi < 0.0 && k < 200; ++k) {
    lo = hi;
    flo = fhi;
    hi += step;
    step *= 2.0;
    fhi = f(hi);
  }
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo > 0.0 || fhi < 0.0) throw NumericalAbort("root bracketing failed");
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52),
                                             iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

double invert_primitive(const ConstitutiveLaws& L, double value, bool regularized) {
  const double A = L.gamma / (L.gamma - 1.0);
  if (!regularized || L.eps_beta == 0.0) return value > 0.0 ? std::pow(value / A, 1.0 / (L.gamma - 1.0)) : 0.0;
  const double B = L.eps_beta * L.alpha / (1.0 - L.alpha);
  auto f = [&](double t) { return A * std::exp((L.gamma - 1.0) * t) - B * std::exp((L.alpha - 1.0) * t) - value; };
  const double guess = value > 0.0 ? std::log(std::pow(value / A, 1.0 / (L.gamma - 1.0))) : 0.0;
  return std::exp(solve_increasing(f, guess - 1.0, guess + 1.0));
}

SteadyDetection detect_steady(const std::vector<EnergyReport>& reports, const SteadyTolerances& tol) {
  SteadyDetection out;
  out.table.reserve(reports.size());
  for (const auto& r : reports) out.table.push_back({r.time, r.kinetic, r.bd_grad_norm});
  const double slack_k = 1e-3 * tol.kinetic;
  const double slack_b = 1e-3 * tol.bd_grad;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    if (!(reports[k].kinetic < tol.kinetic && reports[k].bd_grad_norm < tol.bd_grad)) continue;
    const std::size_t start = k >= static_cast<std::size_t>(tol.window - 1) ? k - (tol.window - 1) : 0;
    bool mono = true;
    for (std::size_t j = start; j < k && mono; ++j) {
      mono = reports[j + 1].kinetic <= reports[j].kinetic + slack_k &&
             reports[j + 1].bd_grad_norm <= reports[j].bd_grad_norm + slack_b;
    }
    if (mono) {
      out.steady = true;
      out.first_index = static_cast<int>(k);
      out.time = reports[k].time;
      break;
    }
  }
  return out;
}

ElResidual el_residual(const Grid& g, std::span<const double> rho, const ConstitutiveLaws& laws,
                       const ConvolutionPlan& W, double support_rel, bool regularized) {
  const auto n = rho.size();
  const double mx = *std::max_element(rho.begin(), rho.end());
  ElResidual out;
  out.threshold = support_rel * mx;
  std::vector<char> in(n, 0);
  for (std::size_t i = 0; i < n; ++i) in[i] = rho[i] > out.threshold && rho[i] >= kVacuumFloor;
  const auto V = W.convolve(rho);
  std::vector<double> dF(n, 0.0);
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in[i]) continue;
    dF[i] = pressure_primitive(laws, rho[i], regularized) + V[i];
    sum += dF[i];
    ++count;
    if (out.support_lo < 0) out.support_lo = static_cast<int>(i);
    out.support_hi = static_cast<int>(i);
  }
  if (count == 0) throw ConfigError("empty support in el_residual");
  out.C = sum / count;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(in[i - 1] && in[i] && in[i + 1])) continue;
    out.residual = std::max(out.residual, std::abs(dF[i + 1] - dF[i - 1]) / (2.0 * g.dx));
  }
  return out;
}

SteadyProfile fixed_point_minimizer(const Grid& g, const ConstitutiveLaws& laws, const ConvolutionPlan& W,
                                    const MinimizerOptions& opt, std::span<const double> initial) {
  const auto n = static_cast<std::size_t>(g.n_cells);
  std::vector<double> rho(n, opt.mass / (2.0 * g.half_width));
  if (!initial.empty()) {
    if (initial.size() != n) throw ConfigError("initial guess does not match the grid");
    rho.assign(initial.begin(), initial.end());
    const double m = grid_mass(g, rho);
    for (auto& r : rho) r *= opt.mass / m;
  }
  std::vector<double> target(n), next(n);
  SteadyProfile prof;
  prof.last_change = std::numeric_limits<double>::infinity();
  for (long sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    const auto V = W.convolve(rho);
    auto fill = [&](double C) {
      for (std::size_t i = 0; i < n; ++i) target[i] = invert_primitive(laws, C - V[i], opt.regularized);
    };
    auto excess = [&](double C) {
      fill(C);
      return grid_mass(g, target) - opt.mass;
    };
    const double vmin = *std::min_element(V.begin(), V.end());
    const double C = solve_increasing(excess, vmin, vmin + 1.0);
    fill(C);
    const double m = grid_mass(g, target);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = (1.0 - opt.damping) * rho[i] + opt.damping * target[i] * (opt.mass / m);
      change += std::abs(next[i] - rho[i]);
    }
    change *= g.dx;
    rho.swap(next);
    prof.sweeps = sweep;
    prof.last_change = change;
    if (change < opt.tol) {
      prof.converged = true;
      break;
    }
  }
  const auto el = el_residual(g, rho, laws, W, opt.support_rel, opt.regularized);
  prof.rho_inf = std::move(rho);
  prof.support_lo = el.support_lo;
  prof.support_hi = el.support_hi;
  prof.el_residual = el.residual;
  prof.lagrange_C = el.C;
  prof.support_threshold = el.threshold;
  return prof;
}

}  // namespace swarmflow
