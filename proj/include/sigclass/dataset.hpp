#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sigclass/path.hpp"

namespace sigclass {

// One labeled observation: functional channels on their own grids plus a
// vector of scalar covariates.
struct Sample {
  std::vector<ChannelSeries> channels;
  Eigen::VectorXd scalars;
  int label = 0;
};

struct DatasetMeta {
  int num_channels = 0;  // functional channels; the signature alphabet adds time
  int q = 0;
  std::string provenance;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> notes;
};

struct Dataset {
  std::vector<Sample> samples;
  DatasetMeta meta;

  std::size_t size() const { return samples.size(); }

  // Enforces consistent channel count and scalar length across samples,
  // valid per-channel series, and labels in {0, 1}.
  void validate() const;

  std::pair<std::size_t, std::size_t> class_counts() const;  // (#label 0, #label 1)
};

std::vector<int> labels_of(const Dataset& ds);

// Alphabet size of the time-augmented signature: channels + 1.
inline int alphabet_size(const Dataset& ds) { return ds.meta.num_channels + 1; }

// Seeded stratified split. Within each class, indices are shuffled and
// round(count * test_fraction) of them go to the test side; original sample
// order is preserved inside each side. Both classes need >= 2 samples.
std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed);

// Seeded stratified fold assignment for cross-validation: per class, a
// shuffled deal into `folds` groups. Every class must have >= folds samples
// so that no fold (and no training complement) is single-class.
std::vector<int> stratified_folds(const std::vector<int>& labels, int folds, std::uint64_t seed);

// Copy with the scalar covariates removed (q = 0); the signature-only model
// variant runs the shared pipeline on this view.
Dataset drop_scalars(const Dataset& ds);

// Copy with the functional channels removed (num_channels = 0); the
// scalar-only model variant runs the shared pipeline on this view, where
// order 0 leaves a plain logistic regression on the scalars.
Dataset drop_channels(const Dataset& ds);

struct Metrics {
  double accuracy = 0.0;
  double f1 = 0.0;
};

// Accuracy and F1 with label 1 as the positive class; F1 is 0 when the
// denominator 2TP + FP + FN vanishes.
Metrics binary_metrics(const std::vector<int>& truth, const std::vector<int>& predicted);

}  // namespace sigclass
