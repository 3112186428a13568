#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "swarmflow/initdata.hpp"
#include "swarmflow/picard.hpp"
#include "swarmflow/solver.hpp"
#include "swarmflow/steady.hpp"

namespace swarmflow {

enum class Mode { simulate, steady, initdata_study, picard, sweep };

std::string to_string(Mode m);

struct OutputConfig {
  std::string dir = "out";
  int snapshot_every = 0;  // in reports, 0 disables snapshots
  bool binary_snapshots = false;
};

struct StudyConfig {
  std::vector<double> eps_ladder;
  int n_cells = 0;  // 0 uses grid.n_cells
};

struct SteadyConfig {
  SteadyTolerances tolerances;
  double el_tol = 0.0;  // 0 selects 10 dx
  double support_rel = 1e-10;
  long max_sweeps = 100000;
  bool require_steady = true;
};

struct PicardModeConfig {
  PicardConfig picard;
  bool compare_solver = true;
  double compare_C = 1.0;
};

struct SweepConfig {
  std::string parameter;
  std::vector<double> values;
};

struct RunConfig {
  Mode mode = Mode::simulate;
  ModelParams model;
  InteractionPotential potential = InteractionPotential::remark_a();
  CommunicationWeight comm_weight = CommunicationWeight::constant(1.0);
  int n_cells = 512;
  ConvMethod convolution = ConvMethod::fft;
  InitialDataSpec initial = InitialDataSpec::benchmark();
  StepControl control;
  double energy_tol = 0.0;  // allowed increase of E between reports
  OutputConfig output;
  StudyConfig study;
  SteadyConfig steady;
  PicardModeConfig picard;
  SweepConfig sweep;
};

// Sectioned key = value text. Unknown sections or keys are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Apply a sweepable parameter by name (model or control fields).
void set_parameter(RunConfig& cfg, const std::string& name, double value);

struct ExecOptions {
  std::filesystem::path out_dir;  // empty uses cfg.output.dir
  int threads = 1;
  unsigned long seed = 0;
};

struct ExecResult {
  int exit_code = 0;
  std::string message;
  std::vector<std::string> failed_assertions;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitAssertion = 4;

ExecResult execute(const RunConfig& cfg, const ExecOptions& opt = {});

std::size_t edit_distance(const std::string& a, const std::string& b);

}  // namespace swarmflow
