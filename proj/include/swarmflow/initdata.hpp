#pragma once

#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "swarmflow/core.hpp"
#include "swarmflow/kernels.hpp"

namespace swarmflow {

enum class DensityKind { gaussian, compact_bump, double_bump, tabulated };

// Unit-mass density on the real line.
struct DensityProfile {
  DensityKind kind = DensityKind::gaussian;
  double sigma = 0.2;       // gaussian and double bump width
  double half_width = 0.5;  // compact bump support
  double separation = 0.25; // double bump centers at +-separation
  std::vector<double> xs, values;  // tabulated, normalized on construction

  static DensityProfile gaussian(double sigma);
  static DensityProfile compact_bump(double half_width);
  static DensityProfile double_bump(double separation, double sigma);
  static DensityProfile tabulated(std::vector<double> xs, std::vector<double> values);

  double operator()(double x) const;
  std::string name() const;
};

enum class VelocityKind { zero, tanh_bump };

struct VelocityProfile {
  VelocityKind kind = VelocityKind::zero;
  double amplitude = 0.5;
  double scale = 0.2;   // tanh steepness length
  double width = 0.25;  // gaussian envelope width

  static VelocityProfile zero();
  static VelocityProfile tanh_bump(double amplitude, double scale = 0.2, double width = 0.25);

  double operator()(double x) const;
};

struct InitialDataSpec {
  DensityProfile rho0 = DensityProfile::gaussian(0.2);
  VelocityProfile u0 = VelocityProfile::tanh_bump(0.5);
  double kappa = 1.0;

  static InitialDataSpec benchmark();
};

// Even bump c exp(-1/(1-z^2)) on (-1,1) with unit integral.
double mollifier(double z);
// Convolution of f with the mollifier scaled to width delta, by Gauss-Legendre quadrature.
double mollify_at(const std::function<double(double)>& f, double x, double delta);
// Smooth plateau: 1 on |x| <= R/4, 0 on |x| >= R/2.
double plateau_cutoff(double x, double R);

struct MollifiedDensity {
  std::vector<double> rho;
  double Z = 1.0;
};

MollifiedDensity mollify_density(const InitialDataSpec& spec, const ModelParams& p, const Grid& g);
std::vector<double> build_velocity(const InitialDataSpec& spec, std::span<const double> rho0_eps,
                                   const ModelParams& p, const Grid& g);
State initial_state(const InitialDataSpec& spec, const ModelParams& p, const Grid& g);

struct StudyRow {
  double eps = 0.0;
  double Z = 0.0;
  double L1_err = 0.0;
  double Lgamma_err = 0.0;
  double moment_err = 0.0;
  double kinetic_err = 0.0;
  double E_kappa_eps = 0.0;
  double J_eps = 0.0;
  double R_eps = 0.0;
  int n_cells = 0;
  double min_rho = 0.0;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  double target_E_kappa = 0.0;
  double target_J = 0.0;
  double target_kinetic = 0.0;
  double lambda = 0.0;
  std::vector<std::pair<std::string, bool>> checks;
  bool ok = true;

  static const char* csv_header();
  void write_csv(std::ostream& os) const;
};

// Fixed n_cells per epsilon; targets on a reference grid of twice the smallest domain at dx/4.
StudyResult convergence_study(const InitialDataSpec& spec, const ModelParams& p, const std::vector<double>& eps_ladder,
                              int n_cells, const InteractionPotential& W, const CommunicationWeight& phi);

}  // namespace swarmflow
