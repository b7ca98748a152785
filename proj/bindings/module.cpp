// Python bindings for the signature-classification core: signature
// computation, synthetic data generation, CSV IO, model fitting and
// evaluation. Kept deliberately thin — every entry point forwards to the
// same C++ functions the CLI uses.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sigclass/dataset.hpp"
#include "sigclass/features.hpp"
#include "sigclass/io.hpp"
#include "sigclass/model.hpp"
#include "sigclass/path.hpp"
#include "sigclass/signature.hpp"
#include "sigclass/synth.hpp"

namespace py = pybind11;
using namespace sigclass;

namespace {

// Flattened truncated signature of a piecewise-linear path given as an
// (m, d) vertex matrix. Times default to a uniform grid on [0, 1]; pass
// time_augment=true to append the time coordinate as an extra channel.
Eigen::VectorXd signature_of_points(const Eigen::MatrixXd& points, int order,
                                    const std::vector<double>& times, bool time_augment) {
  const auto m = points.rows();
  const auto d = points.cols();
  if (m < 2) throw std::invalid_argument("signature: need at least 2 path vertices");
  if (d < 1) throw std::invalid_argument("signature: need at least 1 coordinate");
  std::vector<double> ts = times;
  if (ts.empty()) {
    ts.resize(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i)
      ts[static_cast<std::size_t>(i)] = static_cast<double>(i) / static_cast<double>(m - 1);
  }
  if (ts.size() != static_cast<std::size_t>(m))
    throw std::invalid_argument("signature: times length must match the vertex count");

  const int dim = static_cast<int>(d) + (time_augment ? 1 : 0);
  std::vector<double> coords(static_cast<std::size_t>(m) * static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index c = 0; c < d; ++c)
      coords[static_cast<std::size_t>(i) * dim + static_cast<std::size_t>(c)] = points(i, c);
    if (time_augment)
      coords[static_cast<std::size_t>(i) * dim + static_cast<std::size_t>(d)] =
          ts[static_cast<std::size_t>(i)];
  }
  const PiecewiseLinearPath path(std::move(ts), std::move(coords), dim);
  const std::vector<double> flat = path_signature(path, order).flatten();
  return Eigen::Map<const Eigen::VectorXd>(flat.data(), static_cast<Eigen::Index>(flat.size()));
}

Dataset generate(int num_channels, int q, int n, int grid_size, double noise_scale,
                 double gp_length_scale, double missing_prob, double sigma_t,
                 std::uint64_t seed) {
  ScenarioConfig config;
  config.num_channels = num_channels;
  config.q = q;
  config.n = n;
  config.grid_size = grid_size;
  config.noise_scale = noise_scale;
  config.gp_length_scale = gp_length_scale;
  config.missing_prob = missing_prob;
  config.sigma_t = sigma_t;
  config.seed = seed;
  return generate_dataset(config);
}

FittedModel fit(const Dataset& train, const std::string& variant, double lambda, double c_pen,
                int p_max, double rho, int folds, std::uint64_t seed) {
  ModelConfig config;
  config.variant = variant_from_string(variant);
  config.lambda = lambda;
  config.c_pen = c_pen;
  config.p_max = p_max;
  config.rho = rho;
  config.folds = folds;
  return fit_model(train, config, seed);
}

py::dict metrics_dict(const Metrics& m) {
  py::dict out;
  out["accuracy"] = m.accuracy;
  out["f1"] = m.f1;
  return out;
}

}  // namespace

PYBIND11_MODULE(_sigclass, m) {
  m.doc() = "Signature-based classification of functional data with scalar covariates";

  m.def("sig_dim", [](int d, int p) { return sig_dim(d, p); }, py::arg("d"), py::arg("p"),
        "Number of signature coefficients: sum of d^k for k = 0..p.");

  m.def("signature", &signature_of_points, py::arg("points"), py::arg("order"),
        py::arg("times") = std::vector<double>(), py::arg("time_augment") = false,
        "Flattened truncated signature of the piecewise-linear path through the\n"
        "(m, d) vertex rows, level by level (level 0 first).");

  py::class_<Dataset>(m, "Dataset")
      .def_property_readonly("num_channels",
                             [](const Dataset& ds) { return ds.meta.num_channels; })
      .def_property_readonly("q", [](const Dataset& ds) { return ds.meta.q; })
      .def_property_readonly("labels", [](const Dataset& ds) { return labels_of(ds); })
      .def("__len__", [](const Dataset& ds) { return ds.size(); })
      .def("__repr__", [](const Dataset& ds) {
        return "<Dataset n=" + std::to_string(ds.size()) +
               " channels=" + std::to_string(ds.meta.num_channels) +
               " q=" + std::to_string(ds.meta.q) + ">";
      });

  m.def("generate_dataset", &generate, py::arg("num_channels"), py::arg("q"), py::arg("n"),
        py::arg("grid_size") = 100, py::arg("noise_scale") = 0.1,
        py::arg("gp_length_scale") = 1.0, py::arg("missing_prob") = 0.0,
        py::arg("sigma_t") = 0.0, py::arg("seed") = 0,
        "Synthetic two-class dataset: class-dependent base curves plus Gaussian\n"
        "process noise, with class-dependent scalar covariates.");

  m.def("load_dataset", &load_dataset, py::arg("functional_csv"), py::arg("scalar_csv"),
        "Load a dataset from the long-format functional CSV and wide scalar CSV.");
  m.def(
      "save_dataset",
      [](const Dataset& ds, const std::string& functional_csv, const std::string& scalar_csv) {
        save_dataset(ds, functional_csv, scalar_csv);
      },
      py::arg("dataset"), py::arg("functional_csv"), py::arg("scalar_csv"));

  m.def(
      "stratified_split",
      [](const Dataset& ds, double test_fraction, std::uint64_t seed) {
        return stratified_split(ds, test_fraction, seed);
      },
      py::arg("dataset"), py::arg("test_fraction"), py::arg("seed"),
      "Seeded per-class split; returns (train, test).");

  m.def(
      "signature_features",
      [](const Dataset& ds, int order, bool include_scalars) {
        return signature_features(ds, order, include_scalars);
      },
      py::arg("dataset"), py::arg("order"), py::arg("include_scalars") = true,
      "Feature matrix: time-augmented signatures at the given order, then scalars.");

  py::class_<FittedModel>(m, "Model")
      .def_property_readonly("variant",
                             [](const FittedModel& f) { return to_string(f.variant); })
      .def_property_readonly("lambda_", [](const FittedModel& f) { return f.lambda; })
      .def_property_readonly("c_pen", [](const FittedModel& f) { return f.c_pen; })
      .def_property_readonly("p_hat", [](const FittedModel& f) { return f.p_hat; })
      .def("predict", &predict_model, py::arg("dataset"),
           "Predicted labels (0/1) for every sample.")
      .def("evaluate",
           [](const FittedModel& f, const Dataset& test) {
             return metrics_dict(evaluate_model(f, test));
           },
           py::arg("dataset"), "Accuracy and F1 on a labeled dataset.")
      .def("coefficients",
           [](const FittedModel& f, int num_channels) {
             py::list out;
             for (const auto& c : label_coefficients(f, num_channels)) {
               py::dict row;
               row["index"] = c.index;
               row["level"] = c.level;
               row["kind"] = c.kind;
               row["name"] = c.name;
               row["value"] = c.value;
               out.append(row);
             }
             return out;
           },
           py::arg("num_channels"),
           "Labeled coefficient rows on the standardized feature scale.")
      .def("__repr__", [](const FittedModel& f) {
        return "<Model " + to_string(f.variant) + " p_hat=" + std::to_string(f.p_hat) + ">";
      });

  m.def("fit", &fit, py::arg("train"), py::arg("variant") = "pslr", py::arg("lambda_") = -1.0,
        py::arg("c_pen") = -1.0, py::arg("p_max") = -1, py::arg("rho") = 0.4,
        py::arg("folds") = 5, py::arg("seed") = 0,
        "Fit a variant on training data. Negative lambda tunes by cross-validation;\n"
        "negative c_pen calibrates by the slope heuristic; negative p_max grows the\n"
        "truncation order automatically.");

  m.def(
      "save_model",
      [](const FittedModel& f, int num_channels, int q, const std::string& path) {
        save_model(f, num_channels, q, path);
      },
      py::arg("model"), py::arg("num_channels"), py::arg("q"), py::arg("path"));
  m.def(
      "load_model",
      [](const std::string& path) {
        ModelFile file = load_model(path);
        return py::make_tuple(std::move(file.model), file.num_channels, file.q);
      },
      py::arg("path"), "Returns (model, num_channels, q).");
}
