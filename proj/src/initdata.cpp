#include "swarmflow/initdata.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "swarmflow/solver.hpp"

namespace swarmflow {

namespace {

using Gauss = boost::math::quadrature::gauss<double, 32>;

double bump_raw(double z) { return std::abs(z) < 1.0 ? std::exp(-1.0 / (1.0 - z * z)) : 0.0; }

double bump_norm() {
  static const double c = Gauss::integrate(bump_raw, -1.0, 1.0);
  return c;
}

double gauss_pdf(double x, double s) { return std::exp(-0.5 * x * x / (s * s)) / (s * std::sqrt(2.0 * std::numbers::pi)); }

}  // namespace

DensityProfile DensityProfile::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian sigma must be positive");
  DensityProfile d;
  d.sigma = sigma;
  return d;
}

DensityProfile DensityProfile::compact_bump(double half_width) {
  if (!(half_width > 0.0)) throw ConfigError("bump half width must be positive");
  DensityProfile d;
  d.kind = DensityKind::compact_bump;
  d.half_width = half_width;
  return d;
}

DensityProfile DensityProfile::double_bump(double separation, double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("double bump sigma must be positive");
  DensityProfile d;
  d.kind = DensityKind::double_bump;
  d.separation = separation;
  d.sigma = sigma;
  return d;
}

DensityProfile DensityProfile::tabulated(std::vector<double> xs, std::vector<double> values) {
  if (xs.size() < 2 || xs.size() != values.size()) throw ConfigError("tabulated density needs matching arrays");
  if (!std::is_sorted(xs.begin(), xs.end())) throw ConfigError("tabulated density abscissae must increase");
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (values[i] < 0.0) throw ConfigError("tabulated density must be nonnegative");
    mass += 0.5 * (values[i] + values[i + 1]) * (xs[i + 1] - xs[i]);
  }
  if (!(mass > 0.0)) throw ConfigError("tabulated density has no mass");
  for (auto& v : values) v /= mass;
  DensityProfile d;
  d.kind = DensityKind::tabulated;
  d.xs = std::move(xs);
  d.values = std::move(values);
  return d;
}

double DensityProfile::operator()(double x) const {
  switch (kind) {
    case DensityKind::gaussian: return gauss_pdf(x, sigma);
    case DensityKind::compact_bump: {
      const double t = 1.0 - (x * x) / (half_width * half_width);
      return t > 0.0 ? 15.0 / (16.0 * half_width) * t * t : 0.0;
    }
    case DensityKind::double_bump: return 0.5 * (gauss_pdf(x - separation, sigma) + gauss_pdf(x + separation, sigma));
    case DensityKind::tabulated: {
      if (x <= xs.front() || x >= xs.back()) return 0.0;
      auto it = std::upper_bound(xs.begin(), xs.end(), x);
      const auto k = static_cast<std::size_t>(it - xs.begin());
      const double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
      return values[k - 1] + t * (values[k] - values[k - 1]);
    }
  }
  return 0.0;
}

std::string DensityProfile::name() const {
  switch (kind) {
    case DensityKind::gaussian: return "gaussian";
    case DensityKind::compact_bump: return "compact_bump";
    case DensityKind::double_bump: return "double_bump";
    case DensityKind::tabulated: return "tabulated";
  }
  return "?";
}

VelocityProfile VelocityProfile::zero() { return {}; }

VelocityProfile VelocityProfile::tanh_bump(double amplitude, double scale, double width) {
  if (!(scale > 0.0 && width > 0.0)) throw ConfigError("tanh bump lengths must be positive");
  return {VelocityKind::tanh_bump, amplitude, scale, width};
}

double VelocityProfile::operator()(double x) const {
  if (kind == VelocityKind::zero) return 0.0;
  return amplitude * std::tanh(x / scale) * std::exp(-0.5 * x * x / (width * width));
}

InitialDataSpec InitialDataSpec::benchmark() { return {}; }

double mollifier(double z) { return bump_raw(z) / bump_norm(); }

double mollify_at(const std::function<double(double)>& f, double x, double delta) {
  return Gauss::integrate([&](double z) { return mollifier(z) * f(x - delta * z); }, -1.0, 1.0);
}

double plateau_cutoff(double x, double R) {
  // indicator of |x| <= 3R/8 smoothed at width R/8
  const double h = R / 8.0;
  const double a = std::max(-1.0, (x - 3.0 * h) / h);
  const double b = std::min(1.0, (x + 3.0 * h) / h);
  if (b <= a) return 0.0;
  if (a <= -1.0 && b >= 1.0) return 1.0;
  return std::clamp(Gauss::integrate(mollifier, a, b), 0.0, 1.0);
}

MollifiedDensity mollify_density(const InitialDataSpec& spec, const ModelParams& p, const Grid& g) {
  const double q = p.gamma - 0.5;
  const double delta = std::pow(p.epsilon, q);
  const auto& rho0 = spec.rho0;
  auto power = [&](double y) { return std::pow(rho0(y), q); };
  MollifiedDensity out;
  out.rho.resize(g.cell_centers.size());
  for (std::size_t i = 0; i < out.rho.size(); ++i) {
    const double x = g.cell_centers[i];
    out.rho[i] = std::pow(mollify_at(power, x, delta) + p.epsilon * std::exp(-x * x), 1.0 / q);
  }
  out.Z = grid_mass(g, out.rho);
  for (auto& r : out.rho) r /= out.Z;
  return out;
}

std::vector<double> build_velocity(const InitialDataSpec& spec, std::span<const double> rho0_eps, const ModelParams& p,
                                   const Grid& g) {
  const auto n = g.cell_centers.size();
  if (rho0_eps.size() != n) throw ConfigError("density does not match the grid");
  for (double r : rho0_eps)
    if (!(r > 0.0)) throw ConfigError("vacuum cell in the mollified density; velocity construction needs rho > 0");
  std::vector<double> u(n, 0.0);
  if (spec.u0.kind == VelocityKind::zero) return u;
  const double e = 1.0 / (2.0 + spec.kappa);
  auto w0 = [&](double y) { return std::pow(spec.rho0(y), e) * spec.u0(y); };
  const double R = g.half_width;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g.cell_centers[i];
    const double xi = plateau_cutoff(x, R);
    if (xi == 0.0) continue;
    const double w_eps = mollify_at(w0, x, p.epsilon) * xi;
    u[i] = w_eps * xi / std::pow(rho0_eps[i], e);
  }
  enforce_dirichlet(u);
  return u;
}

State initial_state(const InitialDataSpec& spec, const ModelParams& p, const Grid& g) {
  auto m = mollify_density(spec, p, g);
  auto u = build_velocity(spec, m.rho, p, g);
  return make_state(g, std::move(m.rho), std::move(u));
}

const char* StudyResult::csv_header() { return "eps,Z,L1_err,Lgamma_err,moment_err,kinetic_err,E_kappa_eps,J_eps"; }

void StudyResult::write_csv(std::ostream& os) const {
  std::ostringstream s;
  s << std::setprecision(17) << csv_header() << '\n';
  for (const auto& r : rows)
    s << r.eps << ',' << r.Z << ',' << r.L1_err << ',' << r.Lgamma_err << ',' << r.moment_err << ',' << r.kinetic_err
      << ',' << r.E_kappa_eps << ',' << r.J_eps << '\n';
  os << s.str();
}

StudyResult convergence_study(const InitialDataSpec& spec, const ModelParams& p, const std::vector<double>& eps_ladder,
                              int n_cells, const InteractionPotential& W, const CommunicationWeight& phi) {
  if (eps_ladder.size() < 4) throw ConfigError("ladder too short: need at least 4 epsilon values");
  for (std::size_t k = 0; k + 1 < eps_ladder.size(); ++k)
    if (!(eps_ladder[k + 1] < eps_ladder[k])) throw ConfigError("epsilon ladder must be strictly decreasing");

  StudyResult res;
  const double kap = spec.kappa;
  const double gam = p.gamma;

  // reference grid
  ModelParams pmin = p;
  pmin.epsilon = eps_ladder.back();
  const Grid gmin = build_grid(pmin, n_cells);
  const Grid gref = Grid::uniform(8 * n_cells, 2.0 * gmin.half_width);
  Problem ref = Problem::on_grid(gref, pmin, W, phi);
  ref.regularized = false;
  State sref;
  sref.rho.resize(gref.cell_centers.size());
  sref.u.resize(gref.cell_centers.size());
  for (std::size_t i = 0; i < sref.rho.size(); ++i) {
    const double x = gref.cell_centers[i];
    sref.rho[i] = spec.rho0(x);
    sref.u[i] = spec.u0(x);
  }
  const auto cref = ref.constants_for(sref);
  res.lambda = cref.lambda;
  const auto rep_ref = energy_report(ref.energy_context(), sref, cref);
  res.target_J = rep_ref.J;
  double ek = 0.0, kin = 0.0, mom = 0.0;
  for (std::size_t i = 0; i < sref.rho.size(); ++i) {
    const double x = gref.cell_centers[i];
    ek += sref.rho[i] * std::pow(std::abs(sref.u[i]), 2.0 + kap);
    kin += sref.rho[i] * sref.u[i] * sref.u[i];
    mom += std::pow(std::abs(x), 2.0 + kap) * sref.rho[i];
  }
  res.target_E_kappa = gref.dx * ek / (2.0 + kap);
  res.target_kinetic = gref.dx * kin;
  const double target_moment = gref.dx * mom;
  auto tail = [&](double R, double pw) {
    double s = 0.0;
    for (std::size_t i = 0; i < sref.rho.size(); ++i)
      if (std::abs(gref.cell_centers[i]) > R) s += std::pow(sref.rho[i], pw);
    return gref.dx * s;
  };

  res.rows.resize(eps_ladder.size());
  const int m = static_cast<int>(eps_ladder.size());
  std::vector<std::string> errors(eps_ladder.size());
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < m; ++k) {
    try {
      ModelParams pe = p;
      pe.epsilon = eps_ladder[static_cast<std::size_t>(k)];
      pe.lambda = cref.lambda;
      Problem pb = Problem::make(pe, n_cells, W, phi);
      const Grid& g = pb.grid;
      const auto md = mollify_density(spec, pe, g);
      State s = make_state(g, md.rho, build_velocity(spec, md.rho, pe, g));
      StudyRow row;
      row.eps = pe.epsilon;
      row.Z = md.Z;
      row.R_eps = g.half_width;
      row.n_cells = g.n_cells;
      row.min_rho = *std::min_element(s.rho.begin(), s.rho.end());
      double l1 = 0, lg = 0, mo = 0, ki = 0, ekk = 0;
      for (std::size_t i = 0; i < s.rho.size(); ++i) {
        const double x = g.cell_centers[i];
        const double r0 = spec.rho0(x);
        l1 += std::abs(s.rho[i] - r0);
        lg += std::pow(std::abs(s.rho[i] - r0), gam);
        mo += std::pow(std::abs(x), 2.0 + kap) * s.rho[i];
        ki += s.rho[i] * s.u[i] * s.u[i];
        ekk += s.rho[i] * std::pow(std::abs(s.u[i]), 2.0 + kap);
      }
      row.L1_err = g.dx * l1 + tail(g.half_width, 1.0);
      row.Lgamma_err = std::pow(g.dx * lg + tail(g.half_width, gam), 1.0 / gam);
      row.moment_err = std::abs(g.dx * mo - target_moment);
      row.kinetic_err = std::abs(g.dx * ki - res.target_kinetic);
      row.E_kappa_eps = g.dx * ekk / (2.0 + kap);
      const auto c = pb.constants_for(s);
      row.J_eps = energy_report(pb.energy_context(), s, c).J;
      res.rows[static_cast<std::size_t>(k)] = row;
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(k)] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw NumericalAbort("convergence study entry failed: " + e);

  const auto& R = res.rows;
  const std::size_t L = R.size();
  auto last3_nonincreasing = [&](auto get) {
    return get(R[L - 2]) <= get(R[L - 3]) && get(R[L - 1]) <= get(R[L - 2]);
  };
  res.checks.emplace_back("Z approaches 1", last3_nonincreasing([](const StudyRow& r) { return std::abs(r.Z - 1.0); }));
  res.checks.emplace_back("L1 error nonincreasing", last3_nonincreasing([](const StudyRow& r) { return r.L1_err; }));
  res.checks.emplace_back("Lgamma error nonincreasing",
                          last3_nonincreasing([](const StudyRow& r) { return r.Lgamma_err; }));
  res.checks.emplace_back("moment error nonincreasing",
                          last3_nonincreasing([](const StudyRow& r) { return r.moment_err; }));
  res.checks.emplace_back("kinetic error nonincreasing",
                          last3_nonincreasing([](const StudyRow& r) { return r.kinetic_err; }));
  res.checks.emplace_back("E_kappa within 5% of target",
                          R.back().E_kappa_eps <= 1.05 * res.target_E_kappa + 1e-300);
  res.checks.emplace_back("J within 5% of target",
                          std::abs(R.back().J_eps - res.target_J) <= 0.05 * std::abs(res.target_J));
  for (const auto& c : res.checks) res.ok = res.ok && c.second;
  return res;
}

}  // namespace swarmflow
