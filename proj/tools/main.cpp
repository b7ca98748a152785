#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sigclass/experiment.hpp"
#include "sigclass/features.hpp"
#include "sigclass/io.hpp"
#include "sigclass/model.hpp"
#include "sigclass/selection.hpp"
#include "sigclass/signature.hpp"
#include "sigclass/synth.hpp"

namespace {

using namespace sigclass;

struct DatasetArgs {
  std::string functional;
  std::string scalars;
};

void add_dataset_options(CLI::App* cmd, DatasetArgs& args) {
  cmd->add_option("--functional", args.functional,
                  "long-format functional CSV (sample_id,channel,time,value)")
      ->required();
  cmd->add_option("--scalars", args.scalars,
                  "wide-format scalar CSV (sample_id,z_1,...,z_q,label)")
      ->required();
}

std::string signature_coord_name(int alphabet, int level, std::size_t offset) {
  const auto letters = word_at(alphabet, level, offset);
  std::string name = "S(";
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i > 0) name += ",";
    name += std::to_string(letters[i]);
  }
  return name + ")";
}

void emit_text(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    write_file_atomic(path, content);
}

std::string order_trace_csv(const OrderSelectionTrace& trace) {
  std::string csv = "p,risk,penalty,criterion\n";
  for (const OrderRecord& r : trace.records)
    csv += std::to_string(r.p) + "," + format_double(r.risk) + "," + format_double(r.penalty) +
           "," + format_double(r.criterion) + "\n";
  return csv;
}

// Whitespace-delimited sensor recording: column 0 is time, the remaining
// columns are channels. '#' lines and blank lines are skipped. Times are
// rescaled to [0, 1] per file so recordings of different lengths are
// comparable.
Sample read_recording(const std::string& path, int& columns_seen) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> times;
  std::vector<std::vector<double>> columns;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream row(line);
    std::vector<double> fields;
    double v = 0.0;
    while (row >> v) fields.push_back(v);
    if (!row.eof())
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": non-numeric field");
    if (fields.size() < 2)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": need a time column and at least one channel");
    if (columns.empty()) columns.resize(fields.size() - 1);
    if (fields.size() != columns.size() + 1)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(columns.size() + 1) + " columns, got " +
                               std::to_string(fields.size()));
    if (!times.empty() && fields[0] <= times.back())
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": times must be strictly increasing");
    times.push_back(fields[0]);
    for (std::size_t c = 0; c < columns.size(); ++c) columns[c].push_back(fields[c + 1]);
  }
  if (times.size() < 2) throw std::runtime_error(path + ": need at least 2 data rows");
  columns_seen = static_cast<int>(columns.size());

  const double t0 = times.front(), t1 = times.back();
  for (double& t : times) t = (t - t0) / (t1 - t0);
  times.front() = 0.0;
  times.back() = 1.0;

  Sample s;
  s.scalars = Eigen::VectorXd(0);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    ChannelSeries series;
    series.channel_index = static_cast<int>(c);
    series.times = times;
    series.values = std::move(columns[c]);
    s.channels.push_back(std::move(series));
  }
  return s;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"signature-based classification of functional data"};
  app.require_subcommand(1);

  // -- simulate ------------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic dataset as a CSV pair");
  ScenarioConfig scenario;
  std::string sim_functional, sim_scalars;
  simulate->add_option("--channels,--d", scenario.num_channels, "functional channels (1..8)");
  simulate->add_option("--q", scenario.q, "scalar covariates (0..8)");
  simulate->add_option("--n", scenario.n, "sample count");
  simulate->add_option("--grid-size", scenario.grid_size, "observation times per channel");
  simulate->add_option("--noise-scale", scenario.noise_scale, "GP noise standard deviation");
  simulate->add_option("--gp-length-scale", scenario.gp_length_scale, "GP correlation length");
  simulate->add_option("--missing-prob", scenario.missing_prob, "per-observation drop probability");
  simulate->add_option("--sigma-t", scenario.sigma_t, "grid perturbation scale");
  simulate->add_option("--seed", scenario.seed, "dataset seed");
  simulate->add_option("--output-functional", sim_functional, "functional CSV to write")->required();
  simulate->add_option("--output-scalars", sim_scalars, "scalar CSV to write")->required();
  simulate->callback([&] {
    Dataset ds = generate_dataset(scenario);
    save_dataset(ds, sim_functional, sim_scalars);
    const auto [zeros, ones] = ds.class_counts();
    std::cout << "wrote " << ds.size() << " samples (" << zeros << " label 0, " << ones
              << " label 1) to " << sim_functional << " and " << sim_scalars << "\n";
  });

  // -- features ------------------------------------------------------------
  auto* features = app.add_subcommand("features", "signature feature matrix for a dataset");
  DatasetArgs feat_data;
  int feat_order = 0;
  bool feat_no_scalars = false;
  std::string feat_output;
  add_dataset_options(features, feat_data);
  features->add_option("--order", feat_order, "truncation order")->required();
  features->add_flag("--no-scalars", feat_no_scalars, "leave scalar covariates out");
  features->add_option("--output", feat_output, "output CSV (stdout when omitted)");
  features->callback([&] {
    Dataset ds = load_dataset(feat_data.functional, feat_data.scalars);
    Eigen::MatrixXd X = signature_features(ds, feat_order, !feat_no_scalars);
    const int alphabet = alphabet_size(ds);
    std::string csv;
    for (int level = 0, col = 0; level <= feat_order; ++level) {
      std::size_t level_size = 1;
      for (int k = 0; k < level; ++k) level_size *= static_cast<std::size_t>(alphabet);
      for (std::size_t off = 0; off < level_size; ++off, ++col) {
        if (col > 0) csv += ",";
        csv += signature_coord_name(alphabet, level, off);
      }
    }
    const Eigen::Index width = static_cast<Eigen::Index>(signature_width(ds, feat_order));
    for (Eigen::Index j = width; j < X.cols(); ++j)
      csv += ",z_" + std::to_string(j - width + 1);
    csv += "\n";
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      for (Eigen::Index j = 0; j < X.cols(); ++j) {
        if (j > 0) csv += ",";
        csv += format_double(X(i, j));
      }
      csv += "\n";
    }
    emit_text(feat_output, csv);
  });

  // -- tune-lambda ----------------------------------------------------------
  auto* tune = app.add_subcommand("tune-lambda", "cross-validate the lasso penalty at order 1");
  DatasetArgs tune_data;
  int tune_folds = 5;
  std::uint64_t tune_seed = 0;
  std::vector<double> tune_grid;
  add_dataset_options(tune, tune_data);
  tune->add_option("--folds", tune_folds, "cross-validation folds");
  tune->add_option("--seed", tune_seed, "fold assignment seed");
  tune->add_option("--grid", tune_grid, "comma-separated lambda grid")->delimiter(',');
  tune->callback([&] {
    Dataset ds = load_dataset(tune_data.functional, tune_data.scalars);
    const double lambda = tune_lambda(ds, tune_folds,
                                      tune_grid.empty() ? default_lambda_grid() : tune_grid,
                                      tune_seed);
    std::cout << "lambda = " << format_double(lambda) << "\n";
  });

  // -- calibrate-cpen -------------------------------------------------------
  auto* calibrate = app.add_subcommand("calibrate-cpen",
                                       "slope-heuristic calibration of the order penalty");
  DatasetArgs cal_data;
  double cal_lambda = 0.0, cal_rho = 0.4;
  int cal_p_max = -1;
  std::vector<double> cal_grid;
  std::string cal_output;
  add_dataset_options(calibrate, cal_data);
  calibrate->add_option("--lambda", cal_lambda, "lasso penalty")->required();
  calibrate->add_option("--rho", cal_rho, "penalty sample-size exponent");
  calibrate->add_option("--p-max", cal_p_max, "largest candidate order (-1: grow)");
  calibrate->add_option("--grid", cal_grid, "comma-separated c_pen grid")->delimiter(',');
  calibrate->add_option("--output", cal_output, "write the c_pen,p_hat sweep as CSV");
  calibrate->callback([&] {
    Dataset ds = load_dataset(cal_data.functional, cal_data.scalars);
    SelectOptions options;
    options.p_max = cal_p_max;
    SlopeTrace trace = slope_heuristic(ds, cal_lambda,
                                       cal_grid.empty() ? default_cpen_grid() : cal_grid,
                                       cal_rho, options);
    if (!cal_output.empty()) {
      std::string csv = "c_pen,p_hat\n";
      for (std::size_t i = 0; i < trace.c_grid.size(); ++i)
        csv += format_double(trace.c_grid[i]) + "," + std::to_string(trace.p_hats[i]) + "\n";
      write_file_atomic(cal_output, csv);
    }
    std::cout << "drop_at = " << format_double(trace.drop_at) << "\n"
              << "c_pen = " << format_double(trace.c_pen) << "\n";
  });

  // -- select-order ----------------------------------------------------------
  auto* select = app.add_subcommand("select-order", "penalized truncation-order selection");
  DatasetArgs sel_data;
  double sel_lambda = 0.0, sel_cpen = 0.0, sel_rho = 0.4;
  int sel_p_max = -1;
  std::string sel_output;
  add_dataset_options(select, sel_data);
  select->add_option("--lambda", sel_lambda, "lasso penalty")->required();
  select->add_option("--c-pen", sel_cpen, "order penalty constant")->required();
  select->add_option("--rho", sel_rho, "penalty sample-size exponent");
  select->add_option("--p-max", sel_p_max, "largest candidate order (-1: grow)");
  select->add_option("--output", sel_output, "write the selection trace as CSV");
  select->callback([&] {
    Dataset ds = load_dataset(sel_data.functional, sel_data.scalars);
    PenaltySpec spec;
    spec.c_pen = sel_cpen;
    spec.rho = sel_rho;
    SelectOptions options;
    options.p_max = sel_p_max;
    OrderSelectionTrace trace = select_order(ds, sel_lambda, spec, options);
    if (!sel_output.empty()) write_file_atomic(sel_output, order_trace_csv(trace));
    std::cout << order_trace_csv(trace) << "p_hat = " << trace.selected_p << "\n";
  });

  // -- fit --------------------------------------------------------------------
  auto* fit = app.add_subcommand("fit", "fit a model variant and save it as JSON");
  DatasetArgs fit_data;
  ModelConfig fit_config;
  std::string fit_variant = "pslr";
  std::uint64_t fit_seed = 0;
  std::string fit_output;
  add_dataset_options(fit, fit_data);
  fit->add_option("--variant", fit_variant,
                  "pslr | signature | scalar | bspline | fourier | fpca");
  fit->add_option("--lambda", fit_config.lambda, "lasso penalty (-1: cross-validate)");
  fit->add_option("--c-pen", fit_config.c_pen, "order penalty constant (-1: calibrate)");
  fit->add_option("--rho", fit_config.rho, "penalty sample-size exponent");
  fit->add_option("--p-max", fit_config.p_max, "largest candidate order (-1: grow)");
  fit->add_option("--folds", fit_config.folds, "cross-validation folds");
  fit->add_option("--lambda-grid", fit_config.lambda_grid, "comma-separated lambda grid")
      ->delimiter(',');
  fit->add_option("--cpen-grid", fit_config.cpen_grid, "comma-separated c_pen grid")
      ->delimiter(',');
  fit->add_option("--k-grid", fit_config.k_grid, "comma-separated basis sizes")->delimiter(',');
  fit->add_option("--seed", fit_seed, "seed for tuning and calibration");
  fit->add_option("--output", fit_output, "model JSON to write")->required();
  fit->callback([&] {
    Dataset ds = load_dataset(fit_data.functional, fit_data.scalars);
    fit_config.variant = variant_from_string(fit_variant);
    FittedModel model = fit_model(ds, fit_config, fit_seed);
    save_model(model, ds.meta.num_channels, ds.meta.q, fit_output);
    std::cout << "variant = " << to_string(model.variant) << "\n"
              << "lambda = " << format_double(model.lambda) << "\n";
    if (model.p_hat >= 0) {
      std::cout << "c_pen = " << format_double(model.c_pen) << "\n"
                << "p_hat = " << model.p_hat << "\n";
    } else {
      std::cout << "k = " << model.baseline.k << "\n";
    }
    std::cout << "wrote " << fit_output << "\n";
  });

  // -- evaluate -----------------------------------------------------------------
  auto* evaluate = app.add_subcommand("evaluate", "accuracy and F1 of a saved model");
  DatasetArgs eval_data;
  std::string eval_model, eval_predictions;
  add_dataset_options(evaluate, eval_data);
  evaluate->add_option("--model", eval_model, "model JSON")->required();
  evaluate->add_option("--predictions", eval_predictions, "write per-sample predictions as CSV");
  evaluate->callback([&] {
    ModelFile file = load_model(eval_model);
    Dataset ds = load_dataset(eval_data.functional, eval_data.scalars);
    if (ds.meta.num_channels != file.num_channels || ds.meta.q != file.q)
      throw std::runtime_error("dataset shape (" + std::to_string(ds.meta.num_channels) + " channels, q = " +
                               std::to_string(ds.meta.q) + ") does not match the model (" +
                               std::to_string(file.num_channels) + " channels, q = " +
                               std::to_string(file.q) + ")");
    if (!eval_predictions.empty()) {
      const std::vector<int> predicted = predict_model(file.model, ds);
      std::string csv = "sample_id,label,predicted\n";
      for (std::size_t i = 0; i < predicted.size(); ++i)
        csv += std::to_string(i) + "," + std::to_string(ds.samples[i].label) + "," +
               std::to_string(predicted[i]) + "\n";
      write_file_atomic(eval_predictions, csv);
    }
    Metrics metrics = evaluate_model(file.model, ds);
    std::cout << "accuracy = " << format_double(metrics.accuracy) << "\n"
              << "f1 = " << format_double(metrics.f1) << "\n";
  });

  // -- experiment -----------------------------------------------------------------
  auto* experiment = app.add_subcommand("experiment", "replicated end-to-end run from a config file");
  std::string exp_config, exp_output_dir = ".";
  experiment->add_option("--config", exp_config, "key=value config file")->required();
  experiment->add_option("--output-dir", exp_output_dir, "directory for report.json and CSVs");
  experiment->callback([&] {
    ExperimentConfig config = load_config(exp_config);
    ExperimentResult result = run_experiment(config, exp_output_dir);
    std::cout << "lambda = " << format_double(result.lambda) << "\n";
    if (result.p_hat >= 0) {
      std::cout << "c_pen = " << format_double(result.c_pen) << "\n"
                << "p_hat = " << result.p_hat << "\n";
    }
    std::cout << "mean_accuracy = " << format_double(result.mean_accuracy) << "\n"
              << "mean_f1 = " << format_double(result.mean_f1) << "\n";
    for (const std::string& path : result.files_written) std::cout << "wrote " << path << "\n";
  });

  // -- convert-gait -----------------------------------------------------------------
  auto* convert = app.add_subcommand(
      "convert-gait", "convert whitespace-delimited gait recordings to the dataset CSV pair");
  std::vector<std::string> gait_label0, gait_label1;
  int gait_channels = -1;
  std::string gait_functional, gait_scalars;
  convert->add_option("--label0", gait_label0, "recordings for class 0")
      ->required()
      ->expected(-1);
  convert->add_option("--label1", gait_label1, "recordings for class 1")
      ->required()
      ->expected(-1);
  convert->add_option("--channels", gait_channels, "keep only the first N force columns");
  convert->add_option("--output-functional", gait_functional, "functional CSV to write")->required();
  convert->add_option("--output-scalars", gait_scalars, "scalar CSV to write")->required();
  convert->callback([&] {
    Dataset ds;
    ds.meta.provenance = "gait";
    int columns = -1;
    auto ingest = [&](const std::vector<std::string>& paths, int label) {
      for (const std::string& path : paths) {
        int seen = 0;
        Sample s = read_recording(path, seen);
        if (columns < 0) columns = seen;
        if (seen != columns)
          throw std::runtime_error(path + ": has " + std::to_string(seen) +
                                   " channels, earlier recordings have " + std::to_string(columns));
        const int keep = gait_channels > 0 ? std::min(gait_channels, seen) : seen;
        if (keep > 8)
          throw std::runtime_error(path + ": " + std::to_string(keep) +
                                   " channels exceed the supported 8; pass --channels");
        s.channels.resize(static_cast<std::size_t>(keep));
        s.label = label;
        ds.samples.push_back(std::move(s));
      }
    };
    ingest(gait_label0, 0);
    ingest(gait_label1, 1);
    ds.meta.num_channels = static_cast<int>(ds.samples.front().channels.size());
    ds.meta.q = 0;
    ds.validate();
    save_dataset(ds, gait_functional, gait_scalars);
    std::cout << "wrote " << ds.size() << " samples (" << gait_label0.size() << " label 0, "
              << gait_label1.size() << " label 1), " << ds.meta.num_channels << " channels\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
