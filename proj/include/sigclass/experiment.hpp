#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sigclass/model.hpp"
#include "sigclass/synth.hpp"

namespace sigclass {

// Experiment description, normally parsed from a key=value config file.
// mode "synthetic" draws fresh data per replicate from the scenario
// generator; mode "load" reads one dataset from CSV and re-splits it per
// replicate. Negative lambda / c_pen / p_max mean "auto".
struct ExperimentConfig {
  std::string mode;
  ScenarioConfig scenario;
  std::string functional_csv;
  std::string scalar_csv;
  double test_fraction = 0.2;
  int replicates = 1;
  std::uint64_t seed = 0;
  ModelConfig model;
};

// Parses config text: one key=value per line, '#' comments, optional
// [section] headers (organizational only — keys are global and must be
// unique). Unknown or duplicate keys are errors; `origin` names the source
// in error messages. The SIGCLASS_SEED environment variable, when set,
// overrides the seed for configs loaded through load_config.
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);
ExperimentConfig load_config(const std::string& path);

struct ExperimentResult {
  std::string report_json;  // the full report, exactly as written to disk
  std::vector<std::string> files_written;
  double mean_accuracy = 0.0;
  double mean_f1 = 0.0;
  double lambda = 0.0;
  double c_pen = 0.0;
  int p_hat = -1;
};

// Runs the replicates (seeds derived per replicate index, so a parallel
// schedule would agree with the serial one), fits on training data only,
// and writes report.json, trace.csv, cpen_trace.csv (when the slope
// heuristic ran), coefficients.csv, and metrics.csv into output_dir.
// Scalars in the report echo replicate 0; metrics cover all replicates.
ExperimentResult run_experiment(const ExperimentConfig& config, const std::string& output_dir);

}  // namespace sigclass
