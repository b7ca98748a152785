#include "sigclass/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sigclass/rng.hpp"

namespace sigclass {

void Dataset::validate() const {
  if (samples.empty()) throw std::invalid_argument("Dataset: no samples");
  if (meta.num_channels < 0 || meta.q < 0) throw std::invalid_argument("Dataset: negative dimensions");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = samples[i];
    if (s.label != 0 && s.label != 1)
      throw std::invalid_argument("Dataset: sample " + std::to_string(i) + " has label " +
                                  std::to_string(s.label));
    if (s.scalars.size() != meta.q)
      throw std::invalid_argument("Dataset: sample " + std::to_string(i) + " has " +
                                  std::to_string(s.scalars.size()) + " scalars, expected " +
                                  std::to_string(meta.q));
    if (!s.scalars.allFinite())
      throw std::invalid_argument("Dataset: sample " + std::to_string(i) + " has non-finite scalars");
    if (s.channels.size() != static_cast<std::size_t>(meta.num_channels))
      throw std::invalid_argument("Dataset: sample " + std::to_string(i) + " has " +
                                  std::to_string(s.channels.size()) + " channels, expected " +
                                  std::to_string(meta.num_channels));
    std::vector<bool> seen(static_cast<std::size_t>(meta.num_channels), false);
    for (const auto& ch : s.channels) {
      ch.validate();
      if (ch.channel_index < 0 || ch.channel_index >= meta.num_channels)
        throw std::invalid_argument("Dataset: sample " + std::to_string(i) +
                                    " has out-of-range channel index");
      if (seen[static_cast<std::size_t>(ch.channel_index)])
        throw std::invalid_argument("Dataset: sample " + std::to_string(i) +
                                    " repeats channel index " + std::to_string(ch.channel_index));
      seen[static_cast<std::size_t>(ch.channel_index)] = true;
    }
  }
}

std::pair<std::size_t, std::size_t> Dataset::class_counts() const {
  std::size_t zeros = 0, ones = 0;
  for (const auto& s : samples) (s.label == 0 ? zeros : ones)++;
  return {zeros, ones};
}

std::vector<int> labels_of(const Dataset& ds) {
  std::vector<int> y;
  y.reserve(ds.samples.size());
  for (const auto& s : ds.samples) y.push_back(s.label);
  return y;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed) {
  if (!(test_fraction > 0.0) || !(test_fraction < 1.0))
    throw std::invalid_argument("stratified_split: test_fraction must lie in (0, 1)");
  const auto [zeros, ones] = ds.class_counts();
  if (zeros < 2 || ones < 2)
    throw std::invalid_argument("stratified_split: each class needs at least 2 samples, got " +
                                std::to_string(zeros) + "/" + std::to_string(ones));

  std::vector<bool> to_test(ds.samples.size(), false);
  Rng rng(seed);
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ds.samples.size(); ++i)
      if (ds.samples[i].label == cls) idx.push_back(i);
    rng.shuffle(idx);
    auto take = static_cast<std::size_t>(std::llround(static_cast<double>(idx.size()) * test_fraction));
    take = std::min(std::max<std::size_t>(take, 1), idx.size() - 1);
    for (std::size_t k = 0; k < take; ++k) to_test[idx[k]] = true;
  }

  Dataset train, test;
  train.meta = ds.meta;
  test.meta = ds.meta;
  for (std::size_t i = 0; i < ds.samples.size(); ++i)
    (to_test[i] ? test : train).samples.push_back(ds.samples[i]);
  return {std::move(train), std::move(test)};
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int folds, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("stratified_folds: need at least 2 folds");
  std::size_t zeros = 0, ones = 0;
  for (int v : labels) {
    if (v != 0 && v != 1) throw std::invalid_argument("stratified_folds: labels must be 0 or 1");
    (v == 0 ? zeros : ones)++;
  }
  if (zeros < static_cast<std::size_t>(folds) || ones < static_cast<std::size_t>(folds))
    throw std::invalid_argument("stratified_folds: a class has fewer samples than folds; "
                                "every fold would not see both classes");

  std::vector<int> assignment(labels.size(), -1);
  Rng rng(seed);
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) idx.push_back(i);
    rng.shuffle(idx);
    for (std::size_t k = 0; k < idx.size(); ++k)
      assignment[idx[k]] = static_cast<int>(k % static_cast<std::size_t>(folds));
  }
  return assignment;
}

Dataset drop_scalars(const Dataset& ds) {
  Dataset out = ds;
  out.meta.q = 0;
  for (auto& s : out.samples) s.scalars.resize(0);
  return out;
}

Dataset drop_channels(const Dataset& ds) {
  Dataset out = ds;
  out.meta.num_channels = 0;
  for (auto& s : out.samples) s.channels.clear();
  return out;
}

Metrics binary_metrics(const std::vector<int>& truth, const std::vector<int>& predicted) {
  if (truth.size() != predicted.size() || truth.empty())
    throw std::invalid_argument("binary_metrics: label vectors must be non-empty and equal length");
  double tp = 0, fp = 0, fn = 0, correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == predicted[i]) correct += 1;
    if (predicted[i] == 1 && truth[i] == 1) tp += 1;
    if (predicted[i] == 1 && truth[i] == 0) fp += 1;
    if (predicted[i] == 0 && truth[i] == 1) fn += 1;
  }
  Metrics m;
  m.accuracy = correct / static_cast<double>(truth.size());
  const double denom = 2.0 * tp + fp + fn;
  m.f1 = denom > 0.0 ? 2.0 * tp / denom : 0.0;
  return m;
}

}  // namespace sigclass
