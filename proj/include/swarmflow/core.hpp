#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarmflow {

// Cells with density below this are treated as vacuum.
inline constexpr double kVacuumFloor = 1e-14;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Grid {
  int n_cells = 0;
  double half_width = 0.0;
  double dx = 0.0;
  std::vector<double> cell_centers;

  // dx is rounded to a multiple of 2^-40 so that n*dx and the centers are exact.
  static Grid uniform(int n_cells, double half_width);

  double left() const { return -half_width; }
  double right() const { return half_width; }
  double x(int i) const { return cell_centers[static_cast<std::size_t>(i)]; }
};

struct ModelParams {
  double gamma = 2.0;
  double tau = 0.1;
  double kappa = 1.0;
  double alpha = 0.25;
  double epsilon = 0.01;
  double theta = 0.1;
  std::optional<double> lambda;  // empty means "auto"
};

struct Violation {
  std::string field;
  std::string message;
  std::string constraint;
};

std::vector<Violation> validate_params(const ModelParams& p);
std::string format_violations(const std::vector<Violation>& v);

double kappa_tilde(const ModelParams& p);
double theta_bound(const ModelParams& p);

struct DerivedConstants {
  double beta = 0.0;
  double a = 0.0;
  double R_eps = 0.0;
  double eps_beta = 0.0;
  double ell = 0.0;
  double c_lambda = 0.0;
};

// ell and c_lambda are left at zero; energetics::choose_constants fills them.
DerivedConstants derive_constants(const ModelParams& p);

double regularization_exponent(double gamma, double alpha);
double domain_half_width(const ModelParams& p);

Grid build_grid(const ModelParams& p, int n_cells);

struct State {
  std::vector<double> rho;
  std::vector<double> u;
  double time = 0.0;

  std::size_t size() const { return rho.size(); }
};

State make_state(const Grid& g, std::vector<double> rho, std::vector<double> u = {});
void check_state(const Grid& g, const State& s);
void enforce_dirichlet(std::span<double> u);
State reflect(const State& s);

double grid_mass(const Grid& g, std::span<const double> rho);
double grid_integral(const Grid& g, std::span<const double> f);

}  // namespace swarmflow
