#include <omp.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "swarmflow/cli.hpp"

namespace swarmflow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << s;
  if (!out) throw ConfigError("write failed for " + p.string());
}

void write_reports(const fs::path& p, const std::vector<EnergyReport>& reports) {
  std::ostringstream os;
  os << EnergyReport::csv_header() << '\n';
  for (const auto& r : reports) r.write_csv(os);
  write_text(p, os.str());
}

void write_profile(const fs::path& p, const Grid& g, std::span<const double> rho, std::span<const double> u) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << (u.empty() ? "x,rho\n" : "x,rho,u\n");
  for (std::size_t i = 0; i < rho.size(); ++i) {
    os << g.cell_centers[i] << ',' << rho[i];
    if (!u.empty()) os << ',' << u[i];
    os << '\n';
  }
  write_text(p, os.str());
}

void write_binary_snapshot(const fs::path& p, const Grid& g, const State& s) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  auto put = [&](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    unsigned char b[8];
    for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
    out.write(reinterpret_cast<const char*>(b), 8);
  };
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    put(g.cell_centers[i]);
    put(s.rho[i]);
    put(s.u[i]);
  }
}

json params_json(const RunConfig& c) {
  json j;
  const auto& m = c.model;
  j["gamma"] = m.gamma;
  j["tau"] = m.tau;
  j["kappa"] = m.kappa;
  j["alpha"] = m.alpha;
  j["epsilon"] = m.epsilon;
  j["theta"] = m.theta;
  j["lambda"] = m.lambda ? json(*m.lambda) : json("auto");
  j["n_cells"] = c.n_cells;
  j["potential"] = c.potential.name;
  j["comm_weight"] = c.comm_weight.name;
  return j;
}

json assumptions_json(const AssumptionReport& a) {
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json("inf"); };
  return {{"c_W", num(a.c_W)},
          {"c_phi_W", num(a.c_phi_W)},
          {"l_W", num(a.l_W)},
          {"lower_bound", num(a.lower_bound)},
          {"phi_integrability_ok", a.phi_integrability_ok},
          {"satisfied", a.satisfied},
          {"notes", a.notes}};
}

struct Outcome {
  json summary;
  std::vector<std::string> failed;
};

Problem make_problem(const RunConfig& c) {
  return Problem::make(c.model, c.n_cells, c.potential, c.comm_weight, c.convolution);
}

Outcome do_simulate(const RunConfig& c, const fs::path& dir) {
  Outcome o;
  const Problem pb = make_problem(c);
  State s0 = initial_state(c.initial, c.model, pb.grid);
  RunOptions ro;
  int report_index = 0;
  if (c.output.snapshot_every > 0) {
    fs::create_directories(dir / "snapshots");
    ro.on_report = [&](const State& st, const EnergyReport&) {
      if (report_index % c.output.snapshot_every == 0) {
        std::ostringstream name;
        name << "snap_" << std::setw(6) << std::setfill('0') << report_index;
        if (c.output.binary_snapshots) write_binary_snapshot(dir / "snapshots" / (name.str() + ".bin"), pb.grid, st);
        else write_profile(dir / "snapshots" / (name.str() + ".csv"), pb.grid, st.rho, st.u);
      }
      ++report_index;
    };
  }
  const auto res = run(pb, std::move(s0), c.control, ro);
  write_reports(dir / "reports.csv", res.reports);
  write_profile(dir / "final.csv", pb.grid, res.final_state.rho, res.final_state.u);

  double max_increase = -INFINITY;
  for (std::size_t k = 0; k + 1 < res.reports.size(); ++k)
    max_increase = std::max(max_increase, res.reports[k + 1].E - res.reports[k].E);
  double min_D = INFINITY;
  for (const auto& r : res.reports) min_D = std::min(min_D, r.D);

  o.summary["steps"] = res.steps;
  o.summary["reports"] = res.reports.size();
  o.summary["max_step_mass_drift"] = res.max_step_mass_drift;
  o.summary["max_energy_increase"] = res.reports.size() > 1 ? json(max_increase) : json(nullptr);
  o.summary["min_rho_seen"] = res.min_rho_seen;
  o.summary["max_rho_seen"] = res.max_rho_seen;
  o.summary["min_D"] = min_D;
  o.summary["lambda"] = res.constants.lambda;
  o.summary["ell"] = res.constants.ell;
  o.summary["c_lambda"] = res.constants.c_lambda;
  if (res.constants.warning) o.summary["constants_warning"] = res.constants.message;
  o.summary["assumptions"] = assumptions_json(pb.assumptions);
  if (res.max_step_mass_drift > 1e-13) o.failed.push_back("mass conservation");
  if (res.reports.size() > 1 && max_increase > c.energy_tol) o.failed.push_back("energy monotonicity");
  return o;
}

Outcome do_steady(const RunConfig& c, const fs::path& dir) {
  Outcome o;
  const Problem pb = make_problem(c);
  MinimizerOptions mo;
  mo.max_sweeps = c.steady.max_sweeps;
  mo.support_rel = c.steady.support_rel;
  mo.regularized = pb.regularized;
  const auto prof = fixed_point_minimizer(pb.grid, pb.laws, pb.ops.W, mo);
  write_profile(dir / "steady.csv", pb.grid, prof.rho_inf, {});
  const double el_tol = c.steady.el_tol > 0.0 ? c.steady.el_tol : 10.0 * pb.grid.dx;
  json s;
  s["el_residual"] = prof.el_residual;
  s["el_tol"] = el_tol;
  s["lagrange_C"] = prof.lagrange_C;
  s["support_threshold"] = prof.support_threshold;
  s["support"] = {pb.grid.cell_centers[static_cast<std::size_t>(prof.support_lo)],
                  pb.grid.cell_centers[static_cast<std::size_t>(prof.support_hi)]};
  s["converged"] = prof.converged;
  s["sweeps"] = prof.sweeps;
  if (prof.el_residual > el_tol) o.failed.push_back("el residual");
  if (!prof.converged) o.failed.push_back("minimizer convergence");

  if (c.control.t_end > 0.0) {
    const auto res = run(pb, initial_state(c.initial, c.model, pb.grid), c.control);
    write_reports(dir / "reports.csv", res.reports);
    write_profile(dir / "final.csv", pb.grid, res.final_state.rho, res.final_state.u);
    const auto det = detect_steady(res.reports, c.steady.tolerances);
    double l1 = 0.0;
    for (std::size_t i = 0; i < prof.rho_inf.size(); ++i) l1 += std::abs(res.final_state.rho[i] - prof.rho_inf[i]);
    l1 *= pb.grid.dx;
    const double l1_tol = std::max(5.0 * pb.grid.dx, 1e-2);
    s["pde_steady"] = det.steady;
    s["pde_steady_time"] = det.steady ? json(det.time) : json(nullptr);
    s["pde_final_kinetic"] = res.reports.back().kinetic;
    s["pde_final_bd_grad_norm"] = res.reports.back().bd_grad_norm;
    s["l1_pde_vs_minimizer"] = l1;
    s["l1_tol"] = l1_tol;
    if (c.steady.require_steady && !det.steady) o.failed.push_back("steady detection");
    if (c.steady.require_steady && l1 > l1_tol) o.failed.push_back("pde profile vs minimizer");
  }
  write_text(dir / "steady_summary.json", s.dump(2) + "\n");
  o.summary["steady"] = s;
  return o;
}

Outcome do_study(const RunConfig& c, const fs::path& dir) {
  Outcome o;
  std::vector<double> ladder = c.study.eps_ladder;
  if (ladder.empty())
    for (int k = 4; k <= 10; ++k) ladder.push_back(std::ldexp(1.0, -k));
  const int n = c.study.n_cells > 0 ? c.study.n_cells : c.n_cells;
  const auto st = convergence_study(c.initial, c.model, ladder, n, c.potential, c.comm_weight);
  std::ostringstream os;
  st.write_csv(os);
  write_text(dir / "study.csv", os.str());
  o.summary["target_J"] = st.target_J;
  o.summary["target_E_kappa"] = st.target_E_kappa;
  o.summary["lambda"] = st.lambda;
  for (const auto& [name, ok] : st.checks) {
    o.summary["checks"][name] = ok;
    if (!ok) o.failed.push_back(name);
  }
  return o;
}

Outcome do_picard(const RunConfig& c, const fs::path& dir) {
  Outcome o;
  const Problem pb = make_problem(c);
  const State s0 = initial_state(c.initial, c.model, pb.grid);
  const auto res = picard_run(pb, s0, c.picard.picard, c.control);
  std::ostringstream os;
  res.write_csv(os);
  write_text(dir / "cauchy.csv", os.str());
  o.summary["t_horizon"] = res.t_horizon;
  o.summary["dt"] = res.dt;
  o.summary["steps"] = res.steps;
  o.summary["restarts"] = res.restarts;
  o.summary["tail_nonincreasing"] = res.tail_nonincreasing;
  bool mono = true;
  for (std::size_t k = 1; k + 1 < res.cauchy.size(); ++k)
    mono = mono && res.cauchy[k + 1].delta() <= res.cauchy[k].delta();
  o.summary["contracting_from_2"] = mono;
  if (!res.tail_nonincreasing) o.failed.push_back("cauchy tail nonincreasing");
  if (!mono) o.failed.push_back("cauchy table nonincreasing from n = 2");
  if (c.picard.compare_solver) {
    StepControl sc = c.control;
    sc.cfl = 1.0;
    sc.dt_max = res.dt;
    sc.t_end = res.t_horizon;
    sc.report_every = res.steps;
    const auto sol = run(pb, s0, sc);
    const auto& last = res.iterates.back();
    const double err = l2_norm_diff(pb.grid, last.rho, sol.final_state.rho) +
                       l2_norm_diff(pb.grid, last.u, sol.final_state.u);
    const double tol = c.picard.compare_C * (res.dt + pb.grid.dx);
    o.summary["solver_difference"] = err;
    o.summary["solver_tolerance"] = tol;
    if (err > tol) o.failed.push_back("picard limit vs solver");
  }
  return o;
}

Outcome dispatch(const RunConfig& c, const fs::path& dir);

Outcome do_sweep(const RunConfig& c, const fs::path& dir) {
  Outcome o;
  const int m = static_cast<int>(c.sweep.values.size());
  std::vector<json> runs(static_cast<std::size_t>(m));
  std::vector<std::vector<std::string>> fails(static_cast<std::size_t>(m));
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < m; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    RunConfig rc = c;
    rc.mode = Mode::simulate;
    set_parameter(rc, c.sweep.parameter, c.sweep.values[kk]);
    std::ostringstream name;
    name << "run_" << std::setw(3) << std::setfill('0') << k;
    const fs::path sub = dir / name.str();
    json r;
    r["value"] = c.sweep.values[kk];
    r["dir"] = name.str();
    try {
      fs::create_directories(sub);
      auto out = dispatch(rc, sub);
      r["failed"] = out.failed;
      r["status"] = out.failed.empty() ? "pass" : "assertion failure";
      fails[kk] = out.failed;
      out.summary["status"] = r["status"];
      write_text(sub / "summary.json", out.summary.dump(2) + "\n");
    } catch (const ConfigError& e) {
      r["status"] = "config error";
      r["message"] = e.what();
      fails[kk].push_back(std::string("config error: ") + e.what());
    } catch (const std::exception& e) {
      r["status"] = "numerical abort";
      r["message"] = e.what();
      fails[kk].push_back(std::string("numerical abort: ") + e.what());
    }
    runs[kk] = r;
  }
  o.summary["parameter"] = c.sweep.parameter;
  o.summary["runs"] = runs;
  for (int k = 0; k < m; ++k)
    for (const auto& f : fails[static_cast<std::size_t>(k)]) o.failed.push_back("run " + std::to_string(k) + ": " + f);
  return o;
}

Outcome dispatch(const RunConfig& c, const fs::path& dir) {
  switch (c.mode) {
    case Mode::simulate: return do_simulate(c, dir);
    case Mode::steady: return do_steady(c, dir);
    case Mode::initdata_study: return do_study(c, dir);
    case Mode::picard: return do_picard(c, dir);
    case Mode::sweep: return do_sweep(c, dir);
  }
  return {};
}

}  // namespace

ExecResult execute(const RunConfig& cfg, const ExecOptions& opt) {
  ExecResult res;
  const fs::path dir = opt.out_dir.empty() ? fs::path(cfg.output.dir) : opt.out_dir;
  json summary;
  summary["mode"] = to_string(cfg.mode);
  summary["params"] = params_json(cfg);
  summary["threads"] = opt.threads;
  summary["seed"] = opt.seed;
  omp_set_num_threads(std::max(1, opt.threads));
  try {
    fs::create_directories(dir);
  } catch (const std::exception& e) {
    res.exit_code = kExitConfig;
    res.message = std::string("cannot create output directory: ") + e.what();
    return res;
  }
  try {
    auto out = dispatch(cfg, dir);
    summary["result"] = out.summary;
    res.failed_assertions = out.failed;
    res.exit_code = out.failed.empty() ? kExitOk : kExitAssertion;
    res.message = out.failed.empty() ? "all runtime assertions passed" : "runtime assertion failure";
  } catch (const ConfigError& e) {
    res.exit_code = kExitConfig;
    res.message = e.what();
  } catch (const NumericalAbort& e) {
    res.exit_code = kExitNumerical;
    res.message = e.what();
  } catch (const fs::filesystem_error& e) {
    res.exit_code = kExitConfig;
    res.message = e.what();
  } catch (const std::exception& e) {
    res.exit_code = kExitNumerical;
    res.message = e.what();
  }
  summary["exit_code"] = res.exit_code;
  summary["message"] = res.message;
  summary["failed_assertions"] = res.failed_assertions;
  try {
    write_text(dir / "summary.json", summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    if (res.exit_code == kExitOk) res.exit_code = kExitConfig;
    res.message += std::string("; ") + e.what();
  }
  return res;
}

}  // namespace swarmflow
