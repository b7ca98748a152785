#include "sigclass/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sigclass/io.hpp"
#include "sigclass/rng.hpp"

namespace sigclass {
namespace {

using nlohmann::ordered_json;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_fail(const std::string& origin, int line, const std::string& what) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + what);
}

struct RawConfig {
  std::string origin;
  std::map<std::string, std::pair<std::string, int>> entries;  // key -> (value, line)

  std::optional<std::string> take(const std::string& key) {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    std::string value = it->second.first;
    entries.erase(it);
    return value;
  }

  int line_of(const std::string& key) const {
    auto it = entries.find(key);
    return it == entries.end() ? 0 : it->second.second;
  }
};

RawConfig scan_config(const std::string& text, const std::string& origin) {
  RawConfig raw;
  raw.origin = origin;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        config_fail(origin, number, "malformed section header '" + line + "'");
      continue;  // sections are organizational only; keys stay global
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      config_fail(origin, number, "expected key=value, got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) config_fail(origin, number, "empty key");
    if (value.empty()) config_fail(origin, number, "empty value for key '" + key + "'");
    if (!raw.entries.emplace(key, std::make_pair(value, number)).second)
      config_fail(origin, number, "duplicate key '" + key + "'");
  }
  return raw;
}

double to_double(RawConfig& raw, const std::string& key, const std::string& value, int line) {
  double out = 0.0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last || !std::isfinite(out))
    config_fail(raw.origin, line, "key '" + key + "': expected a finite number, got '" + value + "'");
  return out;
}

long to_long(RawConfig& raw, const std::string& key, const std::string& value, int line) {
  long out = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last)
    config_fail(raw.origin, line, "key '" + key + "': expected an integer, got '" + value + "'");
  return out;
}

// Applies `set` to the parsed value when the key is present. "auto" keys
// pass through a negative sentinel instead of a number.
template <class Set>
void take_double(RawConfig& raw, const std::string& key, bool allow_auto, Set set) {
  int line = raw.line_of(key);
  auto value = raw.take(key);
  if (!value) return;
  if (allow_auto && *value == "auto") {
    set(-1.0);
    return;
  }
  set(to_double(raw, key, *value, line));
}

template <class Set>
void take_int(RawConfig& raw, const std::string& key, bool allow_auto, Set set) {
  int line = raw.line_of(key);
  auto value = raw.take(key);
  if (!value) return;
  if (allow_auto && *value == "auto") {
    set(-1);
    return;
  }
  long parsed = to_long(raw, key, *value, line);
  set(static_cast<int>(parsed));
}

bool is_basis(ModelVariant v) {
  return v == ModelVariant::Bspline || v == ModelVariant::Fourier || v == ModelVariant::Fpca;
}

ordered_json config_json(const ExperimentConfig& config) {
  ordered_json j;
  j["mode"] = config.mode;
  j["variant"] = to_string(config.model.variant);
  j["seed"] = config.seed;
  if (config.mode == "synthetic") {
    j["d"] = config.scenario.num_channels;
    j["q"] = config.scenario.q;
    j["n"] = config.scenario.n;
    j["grid_size"] = config.scenario.grid_size;
    j["noise_scale"] = config.scenario.noise_scale;
    j["gp_length_scale"] = config.scenario.gp_length_scale;
    j["missing_prob"] = config.scenario.missing_prob;
    j["sigma_t"] = config.scenario.sigma_t;
  } else {
    j["functional_csv"] = config.functional_csv;
    j["scalar_csv"] = config.scalar_csv;
  }
  j["test_fraction"] = config.test_fraction;
  j["replicates"] = config.replicates;
  if (config.model.lambda < 0)
    j["lambda"] = "auto";
  else
    j["lambda"] = config.model.lambda;
  if (config.model.c_pen < 0)
    j["c_pen"] = "auto";
  else
    j["c_pen"] = config.model.c_pen;
  j["rho"] = config.model.rho;
  if (config.model.p_max < 0)
    j["p_max"] = "auto";
  else
    j["p_max"] = config.model.p_max;
  j["folds"] = config.model.folds;
  if (is_basis(config.model.variant)) j["baseline_grid_size"] = config.model.baseline_grid_size;
  return j;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  RawConfig raw = scan_config(text, origin);
  ExperimentConfig config;

  {
    int line = raw.line_of("mode");
    auto mode = raw.take("mode");
    if (!mode) throw std::runtime_error(origin + ": missing required key 'mode'");
    if (*mode != "synthetic" && *mode != "load")
      config_fail(origin, line, "mode must be 'synthetic' or 'load', got '" + *mode + "'");
    config.mode = *mode;
  }
  {
    int line = raw.line_of("seed");
    auto seed = raw.take("seed");
    if (!seed) throw std::runtime_error(origin + ": missing required key 'seed'");
    std::uint64_t out = 0;
    const char* first = seed->data();
    const char* last = seed->data() + seed->size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
      config_fail(origin, line, "key 'seed': expected a non-negative integer, got '" + *seed + "'");
    config.seed = out;
  }
  if (auto variant = raw.take("variant")) {
    config.model.variant = variant_from_string(*variant);
  }

  const bool synthetic = config.mode == "synthetic";
  const char* scenario_keys[] = {"d",          "q",       "n",           "grid_size",
                                 "noise_scale", "sigma_t", "missing_prob", "gp_length_scale"};
  if (!synthetic) {
    for (const char* key : scenario_keys)
      if (raw.entries.count(key))
        config_fail(origin, raw.line_of(key),
                    std::string("key '") + key + "' only applies to synthetic mode");
  }
  for (const char* key : {"functional_csv", "scalar_csv"}) {
    if (synthetic && raw.entries.count(key))
      config_fail(origin, raw.line_of(key), std::string("key '") + key + "' only applies to load mode");
  }

  if (synthetic) {
    take_int(raw, "d", false, [&](int v) { config.scenario.num_channels = v; });
    take_int(raw, "q", false, [&](int v) { config.scenario.q = v; });
    take_int(raw, "n", false, [&](int v) { config.scenario.n = v; });
    take_int(raw, "grid_size", false, [&](int v) { config.scenario.grid_size = v; });
    take_double(raw, "noise_scale", false, [&](double v) { config.scenario.noise_scale = v; });
    take_double(raw, "gp_length_scale", false, [&](double v) { config.scenario.gp_length_scale = v; });
    take_double(raw, "missing_prob", false, [&](double v) { config.scenario.missing_prob = v; });
    take_double(raw, "sigma_t", false, [&](double v) { config.scenario.sigma_t = v; });
  } else {
    auto functional = raw.take("functional_csv");
    auto scalar = raw.take("scalar_csv");
    if (!functional || !scalar)
      throw std::runtime_error(origin + ": load mode requires 'functional_csv' and 'scalar_csv'");
    config.functional_csv = *functional;
    config.scalar_csv = *scalar;
  }

  take_double(raw, "test_fraction", false, [&](double v) { config.test_fraction = v; });
  take_int(raw, "replicates", false, [&](int v) { config.replicates = v; });
  take_double(raw, "lambda", true, [&](double v) { config.model.lambda = v; });
  take_double(raw, "c_pen", true, [&](double v) { config.model.c_pen = v; });
  take_double(raw, "rho", false, [&](double v) { config.model.rho = v; });
  take_int(raw, "p_max", true, [&](int v) { config.model.p_max = v; });
  take_int(raw, "folds", false, [&](int v) { config.model.folds = v; });
  take_int(raw, "baseline_grid_size", false, [&](int v) { config.model.baseline_grid_size = v; });

  if (!raw.entries.empty()) {
    const auto& [key, where] = *raw.entries.begin();
    config_fail(origin, where.second, "unknown key '" + key + "'");
  }
  if (config.replicates < 1)
    throw std::runtime_error(origin + ": replicates must be at least 1");
  if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0))
    throw std::runtime_error(origin + ": test_fraction must lie strictly inside (0, 1)");
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  ExperimentConfig config = parse_config_text(buffer.str(), path);
  if (const char* env = std::getenv("SIGCLASS_SEED")) {
    std::string value(env);
    std::uint64_t out = 0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
      throw std::runtime_error("SIGCLASS_SEED must be a non-negative integer, got '" + value + "'");
    config.seed = out;
  }
  return config;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const std::string& output_dir) {
  if (config.mode != "synthetic" && config.mode != "load")
    throw std::invalid_argument("run_experiment: mode must be 'synthetic' or 'load'");
  if (config.replicates < 1)
    throw std::invalid_argument("run_experiment: replicates must be at least 1");

  Dataset loaded;
  if (config.mode == "load") loaded = load_dataset(config.functional_csv, config.scalar_csv);

  using clock = std::chrono::steady_clock;
  auto seconds_since = [](clock::time_point start) {
    return std::chrono::duration<double>(clock::now() - start).count();
  };
  auto run_started = clock::now();

  FittedModel first;
  int data_channels = 0;
  std::vector<Metrics> metrics;
  std::vector<double> replicate_seconds;
  for (int r = 0; r < config.replicates; ++r) {
    auto replicate_started = clock::now();
    std::uint64_t base = derive_seed(config.seed, static_cast<std::uint64_t>(r));
    try {
      Dataset ds;
      if (config.mode == "synthetic") {
        ScenarioConfig scenario = config.scenario;
        scenario.seed = derive_seed(base, 0);
        ds = generate_dataset(scenario);
      } else {
        ds = loaded;
      }
      auto [train, test] = stratified_split(ds, config.test_fraction, derive_seed(base, 1));
      FittedModel model = fit_model(train, config.model, derive_seed(base, 2));
      metrics.push_back(evaluate_model(model, test));
      if (r == 0) {
        first = std::move(model);
        data_channels = ds.meta.num_channels;
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("replicate " + std::to_string(r) + ": " + e.what());
    }
    replicate_seconds.push_back(seconds_since(replicate_started));
  }

  ordered_json report;
  report["config"] = config_json(config);
  report["lambda"] = first.lambda;
  if (is_basis(first.variant))
    report["c_pen"] = nullptr;
  else
    report["c_pen"] = first.c_pen;
  if (first.p_hat >= 0)
    report["p_hat"] = first.p_hat;
  else
    report["p_hat"] = nullptr;

  ordered_json trace = ordered_json::array();
  for (const OrderRecord& record : first.trace.records) {
    ordered_json row;
    row["p"] = record.p;
    row["risk"] = record.risk;
    row["penalty"] = record.penalty;
    row["criterion"] = record.criterion;
    trace.push_back(std::move(row));
  }
  report["trace"] = std::move(trace);

  std::vector<LabeledCoefficient> labeled = label_coefficients(first, data_channels);
  ordered_json coefficients = ordered_json::array();
  for (const LabeledCoefficient& c : labeled) {
    ordered_json row;
    row["index"] = c.index;
    if (c.kind == "signature")
      row["level_or_scalar"] = c.level;
    else
      row["level_or_scalar"] = c.kind;
    row["name"] = c.name;
    row["value"] = c.value;
    coefficients.push_back(std::move(row));
  }
  report["coefficients"] = std::move(coefficients);

  ordered_json metric_rows = ordered_json::array();
  for (std::size_t r = 0; r < metrics.size(); ++r) {
    ordered_json row;
    row["replicate"] = static_cast<int>(r);
    row["accuracy"] = metrics[r].accuracy;
    row["f1"] = metrics[r].f1;
    metric_rows.push_back(std::move(row));
  }
  report["metrics"] = std::move(metric_rows);

  ordered_json timings;
  timings["per_replicate_seconds"] = replicate_seconds;
  timings["total_seconds"] = seconds_since(run_started);
  report["timings"] = std::move(timings);

  namespace fs = std::filesystem;
  fs::path dir = output_dir.empty() ? fs::path(".") : fs::path(output_dir);
  fs::create_directories(dir);

  ExperimentResult result;
  auto emit = [&](const std::string& name, const std::string& content) {
    std::string path = (dir / name).string();
    write_file_atomic(path, content);
    result.files_written.push_back(path);
  };

  result.report_json = report.dump(2) + "\n";
  emit("report.json", result.report_json);

  {
    std::string csv = "p,risk,penalty,criterion\n";
    for (const OrderRecord& record : first.trace.records)
      csv += std::to_string(record.p) + "," + format_double(record.risk) + "," +
             format_double(record.penalty) + "," + format_double(record.criterion) + "\n";
    emit("trace.csv", csv);
  }
  if (first.calibrated) {
    std::string csv = "c_pen,p_hat\n";
    for (std::size_t i = 0; i < first.slope.c_grid.size(); ++i)
      csv += format_double(first.slope.c_grid[i]) + "," + std::to_string(first.slope.p_hats[i]) +
             "\n";
    emit("cpen_trace.csv", csv);
  }
  {
    std::string csv = "index,level_or_scalar,name,value\n";
    for (const LabeledCoefficient& c : labeled) {
      csv += std::to_string(c.index) + ",";
      csv += c.kind == "signature" ? std::to_string(c.level) : c.kind;
      csv += "," + c.name + "," + format_double(c.value) + "\n";
    }
    emit("coefficients.csv", csv);
  }
  {
    std::string csv = "replicate,accuracy,f1\n";
    for (std::size_t r = 0; r < metrics.size(); ++r)
      csv += std::to_string(r) + "," + format_double(metrics[r].accuracy) + "," +
             format_double(metrics[r].f1) + "\n";
    emit("metrics.csv", csv);
  }

  double acc = 0.0, f1 = 0.0;
  for (const Metrics& m : metrics) {
    acc += m.accuracy;
    f1 += m.f1;
  }
  result.mean_accuracy = acc / static_cast<double>(metrics.size());
  result.mean_f1 = f1 / static_cast<double>(metrics.size());
  result.lambda = first.lambda;
  result.c_pen = first.c_pen;
  result.p_hat = first.p_hat;
  return result;
}

}  // namespace sigclass
