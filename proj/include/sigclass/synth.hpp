#pragma once

#include <cstdint>
#include <vector>

#include "sigclass/dataset.hpp"
#include "sigclass/rng.hpp"

namespace sigclass {

// Synthetic two-class generator. Functional channels follow one of eight
// class-dependent base curves plus a zero-mean Gaussian process with
// exponential covariance; scalar covariates follow eight class-dependent
// distribution pairs. Everything is driven by per-sample seeds derived from
// the dataset seed, so sample i is reproducible in isolation and a parallel
// generation schedule would produce the same data as the serial one.
//
// Per-sample draw order: uneven grid increments (only when sigma_t > 0),
// then the noise vector of channel 0, channel 1, ..., then scalars z_1..z_q.

struct ScenarioConfig {
  int num_channels = 2;     // 1..8, selects base curves f_1..f_num_channels
  int q = 1;                // 0..8, selects scalar pairs D_1..D_q
  int n = 1000;
  int grid_size = 100;      // observation times per channel
  double noise_scale = 0.1; // GP standard deviation at lag 0
  double gp_length_scale = 1.0;
  double missing_prob = 0.0;  // applied after generation when > 0
  double sigma_t = 0.0;       // > 0 draws a perturbed per-sample grid
  std::uint64_t seed = 0;
};

// Piecewise-linear ramp: 0 until the knot a, then rising to 1 at t = 1.
double ramp(double t, double a);

// Class-conditional base curve j in 1..8 evaluated at t in [0, 1].
double base_function(int j, int label, double t);

// One draw of the Gaussian process on the given grid: covariance
// noise_scale^2 * exp(-|s-t| / length_scale), sampled through a Cholesky
// factor of the kernel matrix plus a tiny diagonal jitter.
std::vector<double> gp_noise(const std::vector<double>& grid, double length_scale,
                             double noise_scale, Rng& rng);

// Class-conditional scalar draw for covariate j in 1..8.
double sample_scalar(int j, int label, Rng& rng);

// Uniformly spaced points 0 = t_1 < ... < t_T = 1.
std::vector<double> uniform_grid(int size);

// Perturbed grid with increments 0.01 + |N(0.99, sigma_t^2)|, normalized to
// span [0, 1]. sigma_t = 0 returns the uniform grid exactly.
std::vector<double> uneven_grid(int size, double sigma_t, std::uint64_t seed);

Dataset generate_dataset(const ScenarioConfig& config);

// Independently drops each functional observation with probability prob,
// per channel and per time point; a channel's mask is redrawn until at
// least 2 observations survive. Scalars and labels are untouched. Sample i
// uses the seed derived from (seed, i), so missingness patterns at
// different prob levels are comparable replicate by replicate.
Dataset apply_missing(const Dataset& ds, double prob, std::uint64_t seed);

}  // namespace sigclass
