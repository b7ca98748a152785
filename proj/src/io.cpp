#include "sigclass/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <vector>

#include "json.hpp"

namespace sigclass {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

namespace {

[[noreturn]] void fail_at(const std::string& path, std::size_t line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

// Lines with trailing CR stripped; returns false at EOF.
bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s, const std::string& path, std::size_t line,
                    const std::string& what) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end)
    fail_at(path, line, "cannot parse " + what + " from '" + s + "'");
  if (!std::isfinite(v)) fail_at(path, line, what + " must be finite, got '" + s + "'");
  return v;
}

long parse_long(const std::string& s, const std::string& path, std::size_t line,
                const std::string& what) {
  long v = 0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end)
    fail_at(path, line, "cannot parse " + what + " from '" + s + "'");
  return v;
}

}  // namespace

void save_dataset(const Dataset& ds, const std::string& functional_path,
                  const std::string& scalar_path) {
  ds.validate();

  std::string functional = "sample_id,channel,time,value\n";
  for (std::size_t i = 0; i < ds.samples.size(); ++i)
    for (const auto& ch : ds.samples[i].channels)
      for (std::size_t k = 0; k < ch.times.size(); ++k)
        functional += std::to_string(i) + "," + std::to_string(ch.channel_index) + "," +
                      format_double(ch.times[k]) + "," + format_double(ch.values[k]) + "\n";

  std::string scalars = "sample_id";
  for (int j = 1; j <= ds.meta.q; ++j) scalars += ",z_" + std::to_string(j);
  scalars += ",label\n";
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    scalars += std::to_string(i);
    for (int j = 0; j < ds.meta.q; ++j) scalars += "," + format_double(ds.samples[i].scalars[j]);
    scalars += "," + std::to_string(ds.samples[i].label) + "\n";
  }

  write_file_atomic(functional_path, functional);
  write_file_atomic(scalar_path, scalars);
}

Dataset load_dataset(const std::string& functional_path, const std::string& scalar_path) {
  // Scalar file first: it defines the sample order and the labels.
  std::ifstream sin(scalar_path);
  if (!sin) throw std::runtime_error("cannot open " + scalar_path);
  std::string line;
  std::size_t line_no = 1;
  if (!next_line(sin, line)) fail_at(scalar_path, 1, "missing header");
  const auto sheader = split_csv(line);
  if (sheader.size() < 2 || sheader.front() != "sample_id" || sheader.back() != "label")
    fail_at(scalar_path, 1, "header must be sample_id,z_1,...,z_q,label");
  const int q = static_cast<int>(sheader.size()) - 2;
  for (int j = 1; j <= q; ++j)
    if (sheader[static_cast<std::size_t>(j)] != "z_" + std::to_string(j))
      fail_at(scalar_path, 1, "scalar column " + std::to_string(j) + " must be named z_" +
                                  std::to_string(j));

  Dataset ds;
  ds.meta.q = q;
  ds.meta.provenance = "loaded";
  std::map<std::string, std::size_t> index_of;
  while (next_line(sin, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != sheader.size())
      fail_at(scalar_path, line_no, "expected " + std::to_string(sheader.size()) +
                                        " fields, got " + std::to_string(fields.size()));
    if (index_of.count(fields[0]))
      fail_at(scalar_path, line_no, "duplicate sample_id '" + fields[0] + "'");
    Sample s;
    s.scalars.resize(q);
    for (int j = 0; j < q; ++j)
      s.scalars[j] = parse_double(fields[static_cast<std::size_t>(j + 1)], scalar_path, line_no,
                                  "z_" + std::to_string(j + 1));
    const std::string& label = fields.back();
    if (label != "0" && label != "1")
      fail_at(scalar_path, line_no, "label must be 0 or 1, got '" + label + "'");
    s.label = label == "1" ? 1 : 0;
    index_of.emplace(fields[0], ds.samples.size());
    ds.samples.push_back(std::move(s));
  }
  if (ds.samples.empty()) fail_at(scalar_path, line_no, "no samples");

  // Functional long file, grouped by (sample, channel) in row order.
  std::ifstream fin(functional_path);
  if (!fin) throw std::runtime_error("cannot open " + functional_path);
  line_no = 1;
  if (!next_line(fin, line)) fail_at(functional_path, 1, "missing header");
  if (split_csv(line) != std::vector<std::string>{"sample_id", "channel", "time", "value"})
    fail_at(functional_path, 1, "header must be sample_id,channel,time,value");

  int max_channel = -1;
  std::vector<std::map<int, ChannelSeries>> channels_of(ds.samples.size());
  std::vector<bool> seen(ds.samples.size(), false);
  while (next_line(fin, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 4)
      fail_at(functional_path, line_no, "expected 4 fields, got " + std::to_string(fields.size()));
    const auto it = index_of.find(fields[0]);
    if (it == index_of.end())
      fail_at(functional_path, line_no,
              "sample_id '" + fields[0] + "' has no row in " + scalar_path);
    const long channel = parse_long(fields[1], functional_path, line_no, "channel");
    if (channel < 0 || channel > 7)
      fail_at(functional_path, line_no, "channel must be in 0..7, got " + fields[1]);
    const double t = parse_double(fields[2], functional_path, line_no, "time");
    const double v = parse_double(fields[3], functional_path, line_no, "value");

    auto& series = channels_of[it->second][static_cast<int>(channel)];
    series.channel_index = static_cast<int>(channel);
    if (!series.times.empty()) {
      if (t == series.times.back())
        fail_at(functional_path, line_no, "duplicate (sample, channel, time) observation");
      if (t < series.times.back())
        fail_at(functional_path, line_no, "times must be strictly increasing within a series");
    }
    series.times.push_back(t);
    series.values.push_back(v);
    seen[it->second] = true;
    max_channel = std::max(max_channel, static_cast<int>(channel));
  }

  ds.meta.num_channels = max_channel + 1;
  if (max_channel >= 0) {
    for (const auto& [id, idx] : index_of)
      if (!seen[idx])
        throw std::runtime_error(functional_path + ": sample_id '" + id +
                                 "' from " + scalar_path + " has no functional rows");
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
      for (int c = 0; c <= max_channel; ++c) {
        const auto it = channels_of[i].find(c);
        if (it == channels_of[i].end())
          throw std::runtime_error(functional_path + ": sample index " + std::to_string(i) +
                                   " is missing channel " + std::to_string(c));
        ds.samples[i].channels.push_back(std::move(it->second));
      }
    }
  }

  ds.validate();
  return ds;
}

namespace {

ordered_json to_json(const Eigen::VectorXd& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from(const ordered_json& arr) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  return v;
}

ordered_json to_json(const StandardizationStats& stats) {
  ordered_json j;
  j["mean"] = to_json(stats.mean);
  j["scale"] = to_json(stats.scale);
  ordered_json mask = ordered_json::array();
  for (bool b : stats.constant_mask) mask.push_back(b ? 1 : 0);
  j["constant"] = mask;
  return j;
}

StandardizationStats stats_from(const ordered_json& j) {
  StandardizationStats stats;
  stats.mean = vector_from(j.at("mean"));
  stats.scale = vector_from(j.at("scale"));
  for (const auto& b : j.at("constant")) stats.constant_mask.push_back(b.get<int>() != 0);
  return stats;
}

}  // namespace

void save_model(const FittedModel& model, int num_channels, int q, const std::string& path) {
  ordered_json j;
  j["format"] = "sigclass-model-v1";
  j["variant"] = to_string(model.variant);
  j["num_channels"] = num_channels;
  j["q"] = q;
  j["lambda"] = model.lambda;
  j["c_pen"] = model.c_pen;
  j["calibrated"] = model.calibrated;
  j["p_hat"] = model.p_hat;
  j["include_scalars"] = model.include_scalars;

  const bool basis = model.variant == ModelVariant::Bspline ||
                     model.variant == ModelVariant::Fourier || model.variant == ModelVariant::Fpca;
  if (basis) {
    const auto& b = model.baseline;
    ordered_json bj;
    bj["kind"] = to_string(b.kind);
    bj["k"] = b.k;
    bj["lambda"] = b.lambda;
    bj["grid"] = b.grid;
    bj["stats"] = to_json(b.stats);
    bj["theta"] = to_json(b.theta);
    if (b.kind == BaselineKind::Fpca) {
      ordered_json channels = ordered_json::array();
      for (const auto& ch : b.fpca.channels) {
        ordered_json cj;
        cj["mean"] = to_json(ch.mean);
        ordered_json rows = ordered_json::array();
        for (Eigen::Index r = 0; r < ch.components.rows(); ++r) {
          ordered_json row = ordered_json::array();
          for (Eigen::Index c = 0; c < ch.components.cols(); ++c) row.push_back(ch.components(r, c));
          rows.push_back(std::move(row));
        }
        cj["components"] = std::move(rows);
        cj["eigenvalues"] = to_json(ch.eigenvalues);
        channels.push_back(std::move(cj));
      }
      bj["fpca"] = std::move(channels);
    }
    j["baseline"] = std::move(bj);
  } else {
    j["stats"] = to_json(model.stats);
    j["theta"] = to_json(model.theta);
    ordered_json trace = ordered_json::array();
    for (const auto& rec : model.trace.records) {
      ordered_json r;
      r["p"] = rec.p;
      r["risk"] = rec.risk;
      r["penalty"] = rec.penalty;
      r["criterion"] = rec.criterion;
      trace.push_back(std::move(r));
    }
    j["trace"] = std::move(trace);
    if (model.calibrated) {
      ordered_json s;
      s["c_grid"] = model.slope.c_grid;
      s["p_hats"] = model.slope.p_hats;
      s["drop_at"] = model.slope.drop_at;
      s["c_pen"] = model.slope.c_pen;
      j["slope"] = std::move(s);
    }
  }

  write_file_atomic(path, j.dump(2) + "\n");
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": invalid JSON: " + e.what());
  }
  if (j.value("format", "") != "sigclass-model-v1")
    throw std::runtime_error(path + ": not a sigclass model file");

  ModelFile file;
  file.num_channels = j.at("num_channels").get<int>();
  file.q = j.at("q").get<int>();
  FittedModel& m = file.model;
  m.variant = variant_from_string(j.at("variant").get<std::string>());
  m.lambda = j.at("lambda").get<double>();
  m.c_pen = j.at("c_pen").get<double>();
  m.calibrated = j.at("calibrated").get<bool>();
  m.p_hat = j.at("p_hat").get<int>();
  m.include_scalars = j.at("include_scalars").get<bool>();

  if (j.contains("baseline")) {
    const auto& bj = j.at("baseline");
    BaselineModel& b = m.baseline;
    b.kind = baseline_kind_from_string(bj.at("kind").get<std::string>());
    b.k = bj.at("k").get<int>();
    b.lambda = bj.at("lambda").get<double>();
    b.grid = bj.at("grid").get<std::vector<double>>();
    b.stats = stats_from(bj.at("stats"));
    b.theta = vector_from(bj.at("theta"));
    if (b.kind == BaselineKind::Fpca) {
      for (const auto& cj : bj.at("fpca")) {
        FpcaChannel ch;
        ch.mean = vector_from(cj.at("mean"));
        const auto& rows = cj.at("components");
        const auto R = static_cast<Eigen::Index>(rows.size());
        const auto C = R > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
        ch.components.resize(R, C);
        for (Eigen::Index r = 0; r < R; ++r)
          for (Eigen::Index c = 0; c < C; ++c)
            ch.components(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]
                                      .get<double>();
        ch.eigenvalues = vector_from(cj.at("eigenvalues"));
        b.fpca.channels.push_back(std::move(ch));
      }
      b.fpca.k = b.k;
    }
  } else {
    m.stats = stats_from(j.at("stats"));
    m.theta = vector_from(j.at("theta"));
    for (const auto& r : j.at("trace")) {
      OrderRecord rec;
      rec.p = r.at("p").get<int>();
      rec.risk = r.at("risk").get<double>();
      rec.penalty = r.at("penalty").get<double>();
      rec.criterion = r.at("criterion").get<double>();
      m.trace.records.push_back(std::move(rec));
    }
    m.trace.selected_p = m.p_hat;
    if (j.contains("slope")) {
      const auto& s = j.at("slope");
      m.slope.c_grid = s.at("c_grid").get<std::vector<double>>();
      m.slope.p_hats = s.at("p_hats").get<std::vector<int>>();
      m.slope.drop_at = s.at("drop_at").get<double>();
      m.slope.c_pen = s.at("c_pen").get<double>();
    }
  }
  return file;
}

}  // namespace sigclass
