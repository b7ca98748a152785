#pragma once

#include <string>

#include "sigclass/dataset.hpp"
#include "sigclass/model.hpp"

namespace sigclass {

// Shortest decimal form of a double that parses back to the same bits.
std::string format_double(double v);

// Writes content through a temp file in the same directory plus a rename,
// so readers never observe a partially written file.
void write_file_atomic(const std::string& path, const std::string& content);

// Dataset CSV pair: functional observations in long format with header
// sample_id,channel,time,value (channel 0-based, rows sorted by time within
// a series), and scalar covariates in wide format with header
// sample_id,z_1,...,z_q,label. Sample order follows the scalar file; ids
// must match across the two files. A functional file with no data rows
// yields a dataset without channels (scalar covariates and labels only).
void save_dataset(const Dataset& ds, const std::string& functional_path,
                  const std::string& scalar_path);
Dataset load_dataset(const std::string& functional_path, const std::string& scalar_path);

// Fitted model as JSON, with the dataset shape recorded alongside so
// evaluation is self-contained.
struct ModelFile {
  FittedModel model;
  int num_channels = 0;
  int q = 0;
};

void save_model(const FittedModel& model, int num_channels, int q, const std::string& path);
ModelFile load_model(const std::string& path);

}  // namespace sigclass
