#pragma once

#include <ostream>
#include <vector>

#include "swarmflow/solver.hpp"

namespace swarmflow {

struct PicardConfig {
  int n_iters = 10;
  double t_horizon = 0.0;  // 0 selects the default short time
  double dt = 0.0;         // 0 selects the CFL step of the initial data
  int max_restarts = 5;
};

struct CauchyRow {
  int n = 0;
  double delta_rho = 0.0;  // sup_t ||rho_{n+1} - rho_n||_2
  double delta_u = 0.0;
  double delta() const { return delta_rho + delta_u; }
};

struct PicardResult {
  std::vector<State> iterates;  // level n at t_horizon, n = 1..n_iters
  std::vector<CauchyRow> cauchy;
  double t_horizon = 0.0;
  double dt = 0.0;
  int steps = 0;
  int restarts = 0;
  bool tail_nonincreasing = true;  // last third of the table

  static const char* csv_header();
  void write_csv(std::ostream& os) const;
};

double default_picard_horizon(const Grid& g, const State& s, const ConstitutiveLaws& laws);

PicardResult picard_run(const Problem& pb, const State& initial, const PicardConfig& cfg,
                        const StepControl& control = {});

double l2_norm_diff(const Grid& g, std::span<const double> a, std::span<const double> b);

}  // namespace swarmflow
