#include "swarmflow/energetics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace swarmflow {

Gradients delta_F_gradients(const Grid& g, std::span<const double> rho, const ConstitutiveLaws& laws,
                            const NonlocalOperators& ops, bool regularized, GradientScheme scheme) {
  const int n = g.n_cells;
  const auto N = static_cast<std::size_t>(n);
  std::vector<char> vac(N);
  std::vector<double> P(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    vac[i] = rho[i] < kVacuumFloor;
    if (!vac[i]) P[i] = pressure_primitive(laws, rho[i], regularized);
  }
  const auto V = ops.W.convolve(rho);
  std::vector<double> h;
  if (scheme == GradientScheme::convolved_derivative) h = ops.dW.convolve(rho);

  Gradients out;
  out.cell.assign(N, 0.0);
  out.face.assign(N - 1, 0.0);
  out.potential.assign(N, 0.0);
  for (std::size_t i = 0; i < N; ++i)
    if (!vac[i]) out.potential[i] = P[i] + V[i];

  const double idx = 1.0 / g.dx;
  for (std::size_t k = 0; k + 1 < N; ++k) {
    if (vac[k] || vac[k + 1]) continue;
    double G = (P[k + 1] - P[k]) * idx;
    G += scheme == GradientScheme::differenced ? (V[k + 1] - V[k]) * idx : 0.5 * (h[k] + h[k + 1]);
    out.face[k] = G;
  }

  for (std::size_t i = 0; i < N; ++i) {
    if (vac[i]) continue;
    const bool left = i > 0 && !vac[i - 1];
    const bool right = i + 1 < N && !vac[i + 1];
    double dP = 0.0, dV = 0.0;
    if (left && right) {
      dP = 0.5 * (P[i + 1] - P[i - 1]) * idx;
      dV = 0.5 * (V[i + 1] - V[i - 1]) * idx;
    } else if (right) {
      dP = (P[i + 1] - P[i]) * idx;
      dV = (V[i + 1] - V[i]) * idx;
    } else if (left) {
      dP = (P[i] - P[i - 1]) * idx;
      dV = (V[i] - V[i - 1]) * idx;
    }
    out.cell[i] = dP + (scheme == GradientScheme::differenced ? dV : h[i]);
  }
  return out;
}

std::vector<double> grad_delta_F(const Grid& g, std::span<const double> rho, const ConstitutiveLaws& laws,
                                 const NonlocalOperators& ops, bool regularized, GradientScheme scheme) {
  return delta_F_gradients(g, rho, laws, ops, regularized, scheme).cell;
}

double free_energy(const Grid& g, std::span<const double> rho, const ConstitutiveLaws& laws,
                   const ConvolutionPlan& W, bool regularized) {
  const auto V = W.convolve(rho);
  double internal = 0.0, interaction = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] < kVacuumFloor) continue;
    internal += internal_energy_density(laws, rho[i], regularized);
    interaction += rho[i] * V[i];
  }
  return g.dx * (internal + 0.5 * interaction);
}

double alignment_dissipation(const Grid& g, std::span<const double> rho, std::span<const double> u,
                             const ConvolutionPlan& phi) {
  const auto n = rho.size();
  std::vector<double> ru(n);
  for (std::size_t i = 0; i < n; ++i) ru[i] = rho[i] * u[i];
  const auto a = phi.convolve(rho);
  const auto b = phi.convolve(ru);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += ru[i] * (u[i] * a[i] - b[i]);
  return std::max(g.dx * s, 0.0);
}

std::vector<double> velocity_gradient(const Grid& g, std::span<const double> u) {
  const auto n = u.size();
  std::vector<double> ux(n, 0.0);
  const double idx = 1.0 / g.dx;
  for (std::size_t i = 1; i + 1 < n; ++i) ux[i] = 0.5 * (u[i + 1] - u[i - 1]) * idx;
  if (n >= 2) {
    ux[0] = (u[1] - u[0]) * idx;
    ux[n - 1] = (u[n - 1] - u[n - 2]) * idx;
  }
  return ux;
}

BdConstants choose_constants(const ModelParams& p, double c_W, double c_phi_W, double phi_conv_rho_sup,
                             bool phi_bounded_below) {
  auto ell_of = [&](double lam) { return (1.0 + lam) * p.tau - 2.0 * c_W * c_W; };
  auto cl_of = [&](double lam) {
    return lam / 2.0 - (0.5 * c_phi_W + (1.0 + c_phi_W) * (1.0 + c_phi_W) * phi_conv_rho_sup);
  };
  BdConstants c;
  if (p.lambda) {
    c.lambda = *p.lambda;
  } else {
    c.lambda = 1.0;
    for (int k = 0; k < 1100; ++k) {
      const bool ok = cl_of(c.lambda) > 0.0 && (p.tau <= 0.0 || ell_of(c.lambda) > 0.0);
      if (ok) break;
      c.lambda *= 2.0;
    }
  }
  c.ell = ell_of(c.lambda);
  c.c_lambda = cl_of(c.lambda);
  std::ostringstream msg;
  if (p.tau <= 0.0 && !phi_bounded_below) {
    c.warning = true;
    msg << "tau = 0 without a positive lower bound on phi: ell = " << c.ell << " < 0, only a Gronwall-type bound holds";
  } else if (c.c_lambda <= 0.0 || (p.tau > 0.0 && c.ell <= 0.0)) {
    c.warning = true;
    msg << "lambda = " << c.lambda << " gives ell = " << c.ell << ", c_lambda = " << c.c_lambda;
  }
  c.message = msg.str();
  return c;
}

const char* EnergyReport::csv_header() {
  return "time,m0,m1,m2,m2k,F,E,E_mod,K_phi,E_kappa,J,D,bd_grad_norm,min_rho,max_rho";
}

void EnergyReport::write_csv(std::ostream& os) const {
  std::ostringstream line;
  line << std::setprecision(17);
  const double v[] = {time, m0, m1, m2, m2k, F, E, E_mod, K_phi, E_kappa, J, D, bd_grad_norm, min_rho, max_rho};
  for (std::size_t i = 0; i < std::size(v); ++i) line << (i ? "," : "") << v[i];
  os << line.str() << '\n';
}

void apply_constants(EnergyReport& r, const BdConstants& c) {
  r.lambda = c.lambda;
  r.ell = c.ell;
  r.c_lambda = c.c_lambda;
  r.J = r.E_mod + r.tau * r.F + c.lambda * r.E;
  r.D = 0.5 * r.bd_grad_norm + c.ell * r.kinetic + c.lambda * r.viscous + c.c_lambda * r.K_phi;
}

EnergyReport energy_report(const EnergyContext& ctx, const State& s, const BdConstants& constants) {
  const Grid& g = *ctx.grid;
  const auto n = s.rho.size();
  const auto grad = delta_F_gradients(g, s.rho, *ctx.laws, *ctx.ops, ctx.regularized, ctx.scheme).cell;
  const auto ux = velocity_gradient(g, s.u);

  EnergyReport r;
  r.time = s.time;
  r.tau = ctx.tau;
  r.min_rho = std::numeric_limits<double>::infinity();
  r.max_rho = -std::numeric_limits<double>::infinity();
  double m0 = 0, m1 = 0, m2 = 0, m2k = 0, kin = 0, modk = 0, ek = 0, visc = 0, bd = 0, cross = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g.cell_centers[i], rho = s.rho[i], u = s.u[i];
    r.min_rho = std::min(r.min_rho, rho);
    r.max_rho = std::max(r.max_rho, rho);
    m0 += rho;
    m1 += x * rho;
    m2 += x * x * rho;
    m2k += std::pow(std::abs(x), 2.0 + ctx.kappa) * rho;
    kin += rho * u * u;
    const double w = u + grad[i];
    modk += rho * w * w;
    ek += rho * std::pow(std::abs(u), 2.0 + ctx.kappa);
    visc += viscosity(*ctx.laws, rho, ctx.regularized) * ux[i] * ux[i];
    bd += rho * grad[i] * grad[i];
    cross += rho * u * grad[i];
  }
  const double dx = g.dx;
  r.m0 = dx * m0;
  r.m1 = dx * m1;
  r.m2 = dx * m2;
  r.m2k = dx * m2k;
  r.kinetic = dx * kin;
  r.viscous = dx * visc;
  r.bd_grad_norm = dx * bd;
  r.cross = dx * cross;
  r.F = free_energy(g, s.rho, *ctx.laws, ctx.ops->W, ctx.regularized);
  r.E = 0.5 * r.kinetic + r.F;
  r.E_mod = 0.5 * dx * modk + r.F;
  r.E_kappa = dx * ek / (2.0 + ctx.kappa);
  r.K_phi = alignment_dissipation(g, s.rho, s.u, ctx.ops->phi);
  r.phi_conv_rho_sup = 0.0;
  for (double v : ctx.ops->phi.convolve(s.rho)) r.phi_conv_rho_sup = std::max(r.phi_conv_rho_sup, std::abs(v));
  apply_constants(r, constants);
  return r;
}

BdCheck bd_inequality_check(const std::vector<EnergyReport>& reports, double tol, std::optional<double> dt) {
  if (reports.size() < 2) throw ConfigError("bd_inequality_check needs at least two reports");
  const double h0 = reports[1].time - reports[0].time;
  const double h = dt.value_or(h0);
  if (!(h > 0.0)) throw ConfigError("report spacing must be positive");
  for (std::size_t k = 0; k + 1 < reports.size(); ++k) {
    const double hk = reports[k + 1].time - reports[k].time;
    if (std::abs(hk - h) > 1e-6 * h) throw ConfigError("reports are not uniformly spaced in time");
  }
  BdCheck out;
  out.max_r_bd = -std::numeric_limits<double>::infinity();
  out.max_r_e = -std::numeric_limits<double>::infinity();
  out.min_D = std::numeric_limits<double>::infinity();
  for (const auto& r : reports) out.min_D = std::min(out.min_D, r.D);
  for (std::size_t k = 0; k + 1 < reports.size(); ++k) {
    EnergyReport a = reports[k];
    const EnergyReport& b = reports[k + 1];
    if (a.lambda != b.lambda) apply_constants(a, {b.lambda, b.ell, b.c_lambda, false, {}});
    const double hk = b.time - a.time;
    StepResidual s;
    s.t0 = a.time;
    s.t1 = b.time;
    s.r_bd = (b.J - a.J) / hk + 0.5 * (a.D + b.D);
    auto diss = [](const EnergyReport& r) { return r.viscous + r.tau * r.kinetic + r.K_phi; };
    s.r_e = (b.E - a.E) / hk + 0.5 * (diss(a) + diss(b));
    s.flagged = s.r_bd > tol || s.r_e > tol;
    out.ok = out.ok && !s.flagged;
    out.max_r_bd = std::max(out.max_r_bd, s.r_bd);
    out.max_r_e = std::max(out.max_r_e, s.r_e);
    out.steps.push_back(s);
  }
  return out;
}

}  // namespace swarmflow
