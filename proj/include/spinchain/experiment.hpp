#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinchain/csvio.hpp"
#include "spinchain/effective.hpp"
#include "spinchain/propagate.hpp"

// Experiment configs bind the physics modules into reproducible runs: a chain
// + control-field setup, a noise ensemble, a set of observables, and a list
// of curves (exact / effective / free-fermion) to evaluate on a common time
// grid. Presets are shipped JSON files; a user config may name one and
// override fields.

namespace spinchain {

// CLI exit codes: 1 config, 2 constraint, 3 numerical.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConstraintError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CouplingConfig {
  std::string type = "uniform";  // uniform | transfer_ising | transfer_xx | bonds
  std::array<double, 3> lambda{1.0, 0.0, 0.0};
  double scale = 1.0;
  std::vector<std::array<double, 3>> bonds;

  CouplingSet build(int n_sites) const;
};

struct ControlConfig {
  std::string variant = "standard";  // none | standard | rotated | gate
  double n_x = 1.0, n_y = 2.0;
  double n_x1 = 0.0, n_y1 = 0.0;  // gate variant, site 1
  int n_z = 0;
  double t_c = 0.01;

  ControlFieldSpec build() const;
};

struct NoiseConfig {
  bool enabled = true;
  double mu = 0.0, sigma = 2.0, tau = 0.5;
  int realizations = 20;
  std::uint64_t seed = 20250809;
  std::string bath_sites = "all";  // all | first_n_minus_1
  bool start_at_mean = false;
};

struct DriveConfig {
  bool enabled = false;
  std::array<double, 3> b{0.0, 0.0, 0.0};  // same amplitudes on every site
};

struct GateConfig {
  double t_g = 0.0;  // > 0 enables the rotating pi-pulse on spin 1
};

struct ObservableConfig {
  std::string type;  // concurrence | rescaled_concurrence | purity | fidelity | site_fidelity
  std::array<int, 2> pair{1, 2};  // concurrence / purity
  std::string target;             // fidelity: full bitstring; site_fidelity: "0" or "1"
  int site = 1;                   // site_fidelity
};

struct CurveConfig {
  std::string label;
  std::string kind = "exact";  // exact | effective | jw
  bool noise = true;           // exact: attach the bath ensemble
  std::string control = "on";  // exact: on | off | plain_pulse
  std::string variant;         // effective/jw: hbar1 | hbar2 | rotated_ising
  std::optional<CouplingConfig> couplings;  // per-curve coupling override
  std::optional<double> n_y;                // per-curve control overrides
  std::optional<double> t_c;
};

struct TimeGridConfig {
  double t_max = 6.0;
  double dt = 0.02;
};

struct ExperimentConfig {
  std::string name = "run";
  int n_sites = 4;
  CouplingConfig couplings;
  ControlConfig control;
  NoiseConfig noise;
  DriveConfig drive;
  GateConfig gate;
  std::string initial_state = "0000";
  std::vector<ObservableConfig> observables;
  TimeGridConfig time;
  std::vector<CurveConfig> curves;
  std::string concurrence_mode = "ensemble_then_concurrence";  // | average_of_concurrence
  int max_dense_sites = kDefaultMaxDenseSites;
  int jw_dense_check_max_sites = 10;  // JW curves cross-checked against the dense path up to here
  double step = 0.0;                  // integrator step override (0 = automatic)
  std::string output_dir = "results";

  Eigen::VectorXd time_grid() const;
};

// Parsing resolves an optional "preset" reference against the embedded preset
// table and deep-merges the user's overrides on top.
ExperimentConfig parse_config_text(const std::string& json_text);
ExperimentConfig parse_config_file(const std::string& path);
std::string config_to_json_text(const ExperimentConfig& cfg);
void validate_config(const ExperimentConfig& cfg);

struct RunResult {
  std::vector<Table> tables;  // one per observable, one column per curve
  std::string metadata_json;  // seeds, drift, timings, warnings, build id
};

RunResult run_experiment(const ExperimentConfig& cfg, int jobs = 1);

// Writes <dir>/<name>_<observable>.csv (+ .svg) and <dir>/<name>_meta.json.
std::vector<std::string> write_outputs(const RunResult& result, const std::string& dir,
                                       const std::string& name, bool svg);

// Embedded preset table (shipped JSON files compiled into the binary).
const std::map<std::string, std::string>& embedded_presets();
std::vector<std::string> preset_names();

std::string build_identifier();

}  // namespace spinchain
