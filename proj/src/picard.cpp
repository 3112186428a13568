#include "swarmflow/picard.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace swarmflow {

namespace {

struct Level {
  std::vector<std::vector<double>> rho, u;  // indexed by time step
};

struct DensityLoss {
  double time;
  double value;
};

// Throws DensityLoss when rho drops below floor.
Level advance_level(const Problem& pb, const Level& prev, const State& init, double dt, int K, double floor) {
  const Grid& g = pb.grid;
  const auto n = init.rho.size();
  const double idx = 1.0 / g.dx;
  const double tau = pb.params.tau;
  Level cur;
  cur.rho.reserve(static_cast<std::size_t>(K + 1));
  cur.u.reserve(static_cast<std::size_t>(K + 1));
  cur.rho.push_back(init.rho);
  cur.u.push_back(init.u);
  std::vector<double> a(n - 2), b(n - 2), c(n - 2), d(n - 2);
  for (int k = 0; k < K; ++k) {
    const auto& rp = prev.rho[static_cast<std::size_t>(k)];
    const auto& up = prev.u[static_cast<std::size_t>(k)];
    const auto& rc = cur.rho.back();
    const auto upx = velocity_gradient(g, up);

    std::vector<double> rn(n);
    for (std::size_t i = 0; i < n; ++i) {
      double drho = 0.0;
      if (up[i] > 0.0 && i > 0) drho = (rc[i] - rc[i - 1]) * idx;
      else if (up[i] < 0.0 && i + 1 < n) drho = (rc[i + 1] - rc[i]) * idx;
      rn[i] = rc[i] - dt * (up[i] * drho + rp[i] * upx[i]);
      if (!(rn[i] >= floor)) throw DensityLoss{(k + 1) * dt, rn[i]};
    }

    std::vector<double> mu(n);
    for (std::size_t i = 0; i < n; ++i) mu[i] = viscosity(pb.laws, rp[i], pb.regularized);
    const auto mux = velocity_gradient(g, mu);
    const auto grad = grad_delta_F(g, rp, pb.laws, pb.ops, pb.regularized, pb.scheme);
    const auto align = alignment_acceleration(pb.ops.phi, rp, up);

    const double q = dt * idx * idx;
    for (std::size_t r = 0; r + 2 < n; ++r) {
      const std::size_t i = r + 1;
      const double G = -up[i] * upx[i] - grad[i] + mux[i] / rp[i] * upx[i] + align[i] - tau * up[i];
      const double nu = viscosity(pb.laws, rn[i], pb.regularized) / rn[i];
      a[r] = r > 0 ? -q * nu : 0.0;
      c[r] = r + 3 < n ? -q * nu : 0.0;
      b[r] = 1.0 + 2.0 * q * nu;
      d[r] = cur.u.back()[i] + dt * G;
    }
    thomas_solve(a, b, c, d);
    std::vector<double> un(n, 0.0);
    for (std::size_t r = 0; r + 2 < n; ++r) un[r + 1] = d[r];
    cur.rho.push_back(std::move(rn));
    cur.u.push_back(std::move(un));
  }
  return cur;
}

}  // namespace

double l2_norm_diff(const Grid& g, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(g.dx * s);
}

double default_picard_horizon(const Grid& g, const State& s, const ConstitutiveLaws& laws) {
  double speed = 0.0;
  for (std::size_t i = 0; i < s.rho.size(); ++i) speed = std::max(speed, std::abs(s.u[i]) + sound_speed(laws, s.rho[i]));
  if (speed <= 0.0) speed = 1.0;
  return 0.1 * (g.dx / speed) * g.n_cells / 10.0;
}

const char* PicardResult::csv_header() { return "n,delta_rho,delta_u"; }

void PicardResult::write_csv(std::ostream& os) const {
  std::ostringstream s;
  s << std::setprecision(17) << csv_header() << '\n';
  for (const auto& r : cauchy) s << r.n << ',' << r.delta_rho << ',' << r.delta_u << '\n';
  os << s.str();
}

PicardResult picard_run(const Problem& pb, const State& initial, const PicardConfig& cfg, const StepControl& control) {
  if (cfg.n_iters < 2) throw ConfigError("picard needs at least 2 iterations");
  check_state(pb.grid, initial);
  const double rho_min = *std::min_element(initial.rho.begin(), initial.rho.end());
  if (!(rho_min > 0.0)) throw ConfigError("picard iteration needs a strictly positive initial density");
  State init = initial;
  init.time = 0.0;
  enforce_dirichlet(init.u);

  PicardResult res;
  res.t_horizon = cfg.t_horizon > 0.0 ? cfg.t_horizon : default_picard_horizon(pb.grid, init, pb.laws);
  const double dt0 = cfg.dt > 0.0 ? cfg.dt : cfl_dt(pb.grid, init, pb.laws, control);

  for (int attempt = 0;; ++attempt) {
    const int K = std::max(1, static_cast<int>(std::ceil(res.t_horizon / dt0 - 1e-9)));
    res.steps = K;
    res.dt = res.t_horizon / K;
    try {
      Level prev;
      prev.rho.assign(static_cast<std::size_t>(K + 1), init.rho);
      prev.u.assign(static_cast<std::size_t>(K + 1), init.u);
      res.iterates.clear();
      res.cauchy.clear();
      Level cur = advance_level(pb, prev, init, res.dt, K, 0.5 * rho_min);
      for (int n = 1; n <= cfg.n_iters; ++n) {
        State s;
        s.rho = cur.rho.back();
        s.u = cur.u.back();
        s.time = res.t_horizon;
        res.iterates.push_back(std::move(s));
        if (n == cfg.n_iters) break;
        Level next = advance_level(pb, cur, init, res.dt, K, 0.5 * rho_min);
        CauchyRow row;
        row.n = n;
        for (int k = 0; k <= K; ++k) {
          const auto kk = static_cast<std::size_t>(k);
          row.delta_rho = std::max(row.delta_rho, l2_norm_diff(pb.grid, next.rho[kk], cur.rho[kk]));
          row.delta_u = std::max(row.delta_u, l2_norm_diff(pb.grid, next.u[kk], cur.u[kk]));
        }
        res.cauchy.push_back(row);
        cur = std::move(next);
      }
      break;
    } catch (const DensityLoss& loss) {
      if (attempt >= cfg.max_restarts) {
        std::ostringstream m;
        m << "picard: density fell to " << loss.value << " below half the initial minimum at t = " << loss.time
          << " after " << attempt << " restarts";
        throw NumericalAbort(m.str());
      }
      res.t_horizon *= 0.5;
      ++res.restarts;
    }
  }
  const std::size_t L = res.cauchy.size();
  const std::size_t start = L - L / 3;
  for (std::size_t k = start; k + 1 < L; ++k)
    res.tail_nonincreasing = res.tail_nonincreasing && res.cauchy[k + 1].delta() <= res.cauchy[k].delta();
  return res;
}

}  // namespace swarmflow
