#include "swarmflow/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace swarmflow {

Grid Grid::uniform(int n_cells, double half_width) {
  if (n_cells < 8) throw ConfigError("grid needs at least 8 cells, got " + std::to_string(n_cells));
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw ConfigError("grid half width must be positive and finite");
  Grid g;
  g.n_cells = n_cells;
  g.dx = std::ldexp(std::nearbyint(std::ldexp(2.0 * half_width / n_cells, 40)), -40);
  g.half_width = 0.5 * (g.dx * n_cells);
  g.cell_centers.resize(static_cast<std::size_t>(n_cells));
  const double h = 0.5 * g.dx;
  for (int i = 0; i < n_cells; ++i) g.cell_centers[static_cast<std::size_t>(i)] = (2 * i + 1 - n_cells) * h;
  return g;
}

double kappa_tilde(const ModelParams& p) {
  return (2.0 + p.kappa) * (p.gamma - 0.5) / (p.gamma - 1.0) + 1.0;
}

double theta_bound(const ModelParams& p) {
  return std::min(0.5, 3.0 / (4.0 * (p.gamma - 1.0) * kappa_tilde(p)));
}

std::vector<Violation> validate_params(const ModelParams& p) {
  std::vector<Violation> out;
  auto add = [&](std::string f, std::string m, std::string c) {
    out.push_back({std::move(f), std::move(m), std::move(c)});
  };
  const bool gamma_ok = std::isfinite(p.gamma) && p.gamma > 1.0;
  if (!gamma_ok) add("gamma", "gamma must exceed 1", "γ>1");
  if (!(p.tau >= 0.0) || !std::isfinite(p.tau)) add("tau", "tau must be nonnegative", "τ≥0");
  if (!(p.kappa > 0.0)) {
    add("kappa", "kappa must be positive", "0<κ≤min{2γ−1,2/γ}");
  } else if (gamma_ok) {
    if (p.kappa > 2.0 / p.gamma) add("kappa", "kappa exceeds 2/γ", "0<κ≤min{2γ−1,2/γ}");
    if (p.kappa > 2.0 * p.gamma - 1.0) add("kappa", "kappa exceeds 2γ−1", "0<κ≤min{2γ−1,2/γ}");
  }
  if (!(p.alpha > 0.0 && p.alpha < 0.5)) add("alpha", "alpha outside (0,1/2)", "α∈(0,1/2)");
  if (!(p.epsilon > 0.0 && p.epsilon < std::exp(-1.0)))
    add("epsilon", "epsilon outside (0,1/e)", "ε∈(0,e^{−1})");
  if (gamma_ok && p.kappa > 0.0 && !(p.theta < theta_bound(p))) {
    std::ostringstream m;
    m << "theta must be below " << theta_bound(p);
    add("theta", m.str(), "θ<min{1/2,3/(4(γ−1)κ̃)}");
  }
  if (!std::isfinite(p.theta)) add("theta", "theta must be finite", "θ finite");
  if (p.lambda && !(*p.lambda > 0.0)) add("lambda", "lambda must be positive or auto", "λ>0");
  return out;
}

std::string format_violations(const std::vector<Violation>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << "; ";
    os << v[i].field << ": " << v[i].message << " (requires " << v[i].constraint << ")";
  }
  return os.str();
}

double regularization_exponent(double gamma, double alpha) {
  return (gamma - alpha) / (gamma - 0.5) + 1.0;
}

double domain_half_width(const ModelParams& p) {
  const double a = std::sqrt((p.gamma - 0.5) / (2.0 * (p.gamma - p.alpha)));
  return a * std::pow(std::abs(std::log(p.epsilon)), p.theta);
}

DerivedConstants derive_constants(const ModelParams& p) {
  DerivedConstants d;
  d.beta = regularization_exponent(p.gamma, p.alpha);
  d.a = std::sqrt((p.gamma - 0.5) / (2.0 * (p.gamma - p.alpha)));
  d.R_eps = domain_half_width(p);
  d.eps_beta = std::pow(p.epsilon, d.beta);
  return d;
}

Grid build_grid(const ModelParams& p, int n_cells) {
  if (!(p.epsilon < std::exp(-1.0))) throw ConfigError("epsilon must be below 1/e to build the domain");
  if (auto v = validate_params(p); !v.empty()) throw ConfigError(format_violations(v));
  return Grid::uniform(n_cells, domain_half_width(p));
}

State make_state(const Grid& g, std::vector<double> rho, std::vector<double> u) {
  State s;
  s.rho = std::move(rho);
  s.u = u.empty() ? std::vector<double>(s.rho.size(), 0.0) : std::move(u);
  check_state(g, s);
  enforce_dirichlet(s.u);
  return s;
}

void check_state(const Grid& g, const State& s) {
  const auto n = static_cast<std::size_t>(g.n_cells);
  if (s.rho.size() != n || s.u.size() != n) throw ConfigError("state arrays do not match the grid");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(s.rho[i] >= 0.0) || !std::isfinite(s.rho[i]))
      throw NumericalAbort("invalid density " + std::to_string(s.rho[i]) + " at cell " + std::to_string(i));
    if (!std::isfinite(s.u[i])) throw NumericalAbort("non-finite velocity at cell " + std::to_string(i));
  }
}

void enforce_dirichlet(std::span<double> u) {
  if (u.empty()) return;
  u.front() = 0.0;
  u.back() = 0.0;
}

State reflect(const State& s) {
  State r = s;
  std::reverse(r.rho.begin(), r.rho.end());
  std::reverse(r.u.begin(), r.u.end());
  for (auto& v : r.u) v = -v;
  return r;
}

double grid_integral(const Grid& g, std::span<const double> f) {
  double s = 0.0;
  for (double v : f) s += v;
  return g.dx * s;
}

double grid_mass(const Grid& g, std::span<const double> rho) { return grid_integral(g, rho); }

}  // namespace swarmflow
