#include "swarmflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace swarmflow {

void validate_control(const StepControl& c) {
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw ConfigError("cfl must lie in (0,1]");
  if (!(c.dt_max > 0.0)) throw ConfigError("dt_max must be positive");
  if (!(c.t_end >= 0.0)) throw ConfigError("t_end must be nonnegative");
  if (c.report_every < 1) throw ConfigError("report_every must be a positive integer");
}

Problem Problem::make(const ModelParams& p, int n_cells, InteractionPotential W, CommunicationWeight phi,
                      ConvMethod method) {
  return on_grid(build_grid(p, n_cells), p, std::move(W), std::move(phi), method);
}

Problem Problem::on_grid(Grid g, const ModelParams& p, InteractionPotential W, CommunicationWeight phi,
                         ConvMethod method) {
  if (auto v = validate_params(p); !v.empty()) throw ConfigError(format_violations(v));
  Problem pb;
  pb.grid = std::move(g);
  pb.params = p;
  pb.laws = ConstitutiveLaws::from_params(p);
  pb.W = std::move(W);
  pb.phi = with_default_cap(std::move(phi), pb.grid.dx);
  pb.ops = make_operators(pb.grid, pb.W, pb.phi, method);
  pb.assumptions = check_assumptions(pb.W, pb.phi, p, pb.grid.dx);
  return pb;
}

EnergyContext Problem::energy_context() const {
  return {&grid, &laws, &ops, params.tau, params.kappa, regularized, scheme};
}

BdConstants Problem::constants_for(const State& s, const BdConstants* previous) const {
  double sup = 0.0;
  for (double v : ops.phi.convolve(s.rho)) sup = std::max(sup, std::abs(v));
  const bool bounded_below =
      (phi.kind == WeightKind::constant && phi.value > 0.0) || phi.kind == WeightKind::power;
  const auto& a = assumptions;
  BdConstants c = choose_constants(params, a.c_W, a.c_phi_W, sup, bounded_below);
  if (!params.lambda && previous && previous->lambda > c.lambda) {
    ModelParams fixed = params;
    fixed.lambda = previous->lambda;
    c = choose_constants(fixed, a.c_W, a.c_phi_W, sup, bounded_below);
  }
  return c;
}

double cfl_dt(const Grid& g, const State& s, const ConstitutiveLaws& laws, const StepControl& c) {
  double speed = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    if (s.rho[i] < kVacuumFloor) continue;
    speed = std::max(speed, std::abs(s.u[i]) + sound_speed(laws, s.rho[i]));
  }
  if (speed <= 0.0) return c.dt_max;
  return std::min(c.dt_max, c.cfl * g.dx / speed);
}

void thomas_solve(std::vector<double> a, std::vector<double> b, std::vector<double> c, std::vector<double>& d) {
  const std::size_t n = d.size();
  if (n == 0) return;
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  d[n - 1] /= b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

State step(const Problem& pb, const State& s, double dt) {
  const Grid& g = pb.grid;
  const auto n = s.rho.size();
  const double lam = dt / g.dx;

  // (i) conservative upwind transport of rho and rho u
  std::vector<double> uf(n - 1);
  {
    Gradients gr;
    if (pb.stabilize) gr = delta_F_gradients(g, s.rho, pb.laws, pb.ops, pb.regularized, pb.scheme);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      double v = 0.5 * (s.u[k] + s.u[k + 1]);
      if (pb.stabilize && s.rho[k] >= kVacuumFloor && s.rho[k + 1] >= kVacuumFloor)
        v -= dt * (gr.face[k] - 0.5 * (gr.cell[k] + gr.cell[k + 1]));
      uf[k] = v;
    }
  }
  std::vector<double> F(n + 1, 0.0), M(n + 1, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const bool fwd = uf[k] > 0.0;
    F[k + 1] = uf[k] * (fwd ? s.rho[k] : s.rho[k + 1]);
    M[k + 1] = F[k + 1] * (fwd ? s.u[k] : s.u[k + 1]);
  }
  State out;
  out.time = s.time + dt;
  out.rho.resize(n);
  out.u.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = s.rho[i] - lam * (F[i + 1] - F[i]);
    if (r < 0.0) {
      std::ostringstream m;
      m << "negative density " << r << " after transport at cell " << i << " (x = " << g.cell_centers[i]
        << ", t = " << s.time << ", dt = " << dt << ")";
      throw NumericalAbort(m.str());
    }
    out.rho[i] = r;
    const double mom = s.rho[i] * s.u[i] - lam * (M[i + 1] - M[i]);
    out.u[i] = r >= kVacuumFloor ? mom / r : 0.0;
  }
  enforce_dirichlet(out.u);

  // (ii) forces on the transported state; the local part of the alignment and damping is implicit
  const auto grad = delta_F_gradients(g, out.rho, pb.laws, pb.ops, pb.regularized, pb.scheme).cell;
  std::vector<double> ru(n);
  for (std::size_t i = 0; i < n; ++i) ru[i] = out.rho[i] * out.u[i];
  const auto phi_ru = pb.ops.phi.convolve(ru);
  const auto phi_r = pb.ops.phi.convolve(out.rho);
  const double tau = pb.params.tau;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (out.rho[i] < kVacuumFloor) {
      out.u[i] = 0.0;
      continue;
    }
    out.u[i] = (out.u[i] + dt * (phi_ru[i] - grad[i])) / (1.0 + dt * (tau + phi_r[i]));
  }

  // (iii) implicit viscosity with coefficients frozen at the transported density
  const std::size_t m = n - 2;
  std::vector<double> mu(n);
  for (std::size_t i = 0; i < n; ++i) mu[i] = viscosity(pb.laws, out.rho[i], pb.regularized);
  std::vector<double> a(m, 0.0), b(m, 0.0), c(m, 0.0), d(m, 0.0);
  const double q = dt / (g.dx * g.dx);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t i = r + 1;
    if (out.rho[i] < kVacuumFloor) {
      b[r] = 1.0;
      continue;
    }
    const double ml = 0.5 * (mu[i - 1] + mu[i]);
    const double mr = 0.5 * (mu[i] + mu[i + 1]);
    b[r] = out.rho[i] + q * (ml + mr);
    if (r > 0) a[r] = -q * ml;
    if (r + 1 < m) c[r] = -q * mr;
    d[r] = out.rho[i] * out.u[i];
  }
  thomas_solve(std::move(a), std::move(b), std::move(c), d);
  for (std::size_t r = 0; r < m; ++r) out.u[r + 1] = d[r];
  enforce_dirichlet(out.u);
  return out;
}

RunResult run(const Problem& pb, State initial, const StepControl& c, const RunOptions& opt) {
  validate_control(c);
  check_state(pb.grid, initial);
  enforce_dirichlet(initial.u);
  const auto ctx = pb.energy_context();

  RunResult res;
  res.constants = pb.constants_for(initial);
  State s = std::move(initial);
  res.min_rho_seen = *std::min_element(s.rho.begin(), s.rho.end());
  res.max_rho_seen = *std::max_element(s.rho.begin(), s.rho.end());

  auto emit = [&](const State& st) {
    res.constants = pb.constants_for(st, &res.constants);
    auto r = energy_report(ctx, st, res.constants);
    if (!res.reports.empty() && r.E > res.reports.back().E + opt.energy_increase_tol) {
      std::ostringstream m;
      m << "energy increased from " << res.reports.back().E << " to " << r.E << " between t = "
        << res.reports.back().time << " and t = " << r.time;
      throw NumericalAbort(m.str());
    }
    if (opt.on_report) opt.on_report(st, r);
    res.reports.push_back(r);
  };
  emit(s);

  const double t_end = c.t_end;
  long since_report = 0;
  while (t_end - s.time > 1e-12 * std::max(1.0, t_end)) {
    double dt = cfl_dt(pb.grid, s, pb.laws, c);
    if (s.time + dt > t_end || t_end - (s.time + dt) < 1e-9 * dt) dt = t_end - s.time;
    const double m_before = grid_mass(pb.grid, s.rho);
    State next = step(pb, s, dt);
    const double m_after = grid_mass(pb.grid, next.rho);
    if (m_before > 0.0) res.max_step_mass_drift = std::max(res.max_step_mass_drift, std::abs(m_after - m_before) / m_before);
    if (t_end - next.time <= 1e-12 * std::max(1.0, t_end)) next.time = t_end;
    s = std::move(next);
    ++res.steps;
    for (double r : s.rho) {
      res.min_rho_seen = std::min(res.min_rho_seen, r);
      res.max_rho_seen = std::max(res.max_rho_seen, r);
    }
    if (++since_report == c.report_every || s.time == t_end) {
      emit(s);
      since_report = 0;
    }
  }
  res.final_state = std::move(s);
  return res;
}

std::vector<EnergyReport> uniform_prefix(const std::vector<EnergyReport>& reports) {
  if (reports.size() < 2) return reports;
  const double h = reports[1].time - reports[0].time;
  std::size_t k = 1;
  while (k + 1 < reports.size() && std::abs(reports[k + 1].time - reports[k].time - h) <= 1e-6 * h) ++k;
  return {reports.begin(), reports.begin() + static_cast<long>(k + 1)};
}

}  // namespace swarmflow
