#include "sigclass/synth.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sigclass {

namespace {

constexpr double kPi = std::numbers::pi;

double normal_density(double t, double mean, double variance) {
  const double d = t - mean;
  return std::exp(-0.5 * d * d / variance) / std::sqrt(2.0 * kPi * variance);
}

double beta_density(double t, double a, double b) {
  if (t <= 0.0 || t >= 1.0) {
    // a, b > 1 everywhere below, so the density vanishes at the endpoints.
    return 0.0;
  }
  return std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0) / std::beta(a, b);
}

double logistic(double s) { return 1.0 / (1.0 + std::exp(-s)); }

}  // namespace

double ramp(double t, double a) { return t <= a ? 0.0 : (t - a) / (1.0 - a); }

double base_function(int j, int label, double t) {
  if (label != 0 && label != 1) throw std::invalid_argument("base_function: label must be 0 or 1");
  const bool y0 = label == 0;
  switch (j) {
    case 1:
      return y0 ? std::exp(std::cos(2.0 * kPi * t)) / 3.0
                : std::exp(std::cos(2.0 * kPi * std::pow(t, 1.05))) / 3.0;
    case 2:
      return y0 ? 1.6 * std::cbrt(t) : std::sqrt(3.0) * std::sqrt(t);
    case 3:
      return y0 ? std::log(0.5 + std::cos(kPi * std::pow(t, 4.0) / 2.0))
                : 0.9 * std::log(0.5 + std::cos(kPi * std::pow(t, 3.0) / 2.0));
    case 4:
      return y0 ? std::exp(std::sin(2.0 * kPi * t)) / 3.0
                : std::exp(std::sin(2.0 * kPi * std::pow(t, 1.05))) / 3.0;
    case 5:
      // The second normal component uses variance 0.5; see dataset notes.
      return y0 ? 0.6 * normal_density(t, 0.0, 1.0) + 0.4 * beta_density(t, 2.0, 3.0)
                : 0.3 * normal_density(t, 0.5, 0.5) + 0.3 * beta_density(t, 3.0, 4.0);
    case 6:
      return y0 ? std::pow(t, 4.0) - ramp(t, 0.55) : std::pow(t, 5.0) - ramp(t, 0.45);
    case 7:
      return y0 ? 0.2 * t - 0.2 * t * t + 0.98 : -0.2 * t + 0.2 * t * t + 1.02;
    case 8:
      return y0 ? logistic(20.0 * t - 10.0) / 3.0 + 1.5 : std::tanh(12.0 * t - 6.3) / 3.0 + 1.5;
    default:
      throw std::invalid_argument("base_function: index must be in 1..8, got " + std::to_string(j));
  }
}

std::vector<double> gp_noise(const std::vector<double>& grid, double length_scale,
                             double noise_scale, Rng& rng) {
  const auto G = static_cast<Eigen::Index>(grid.size());
  if (G < 1) throw std::invalid_argument("gp_noise: empty grid");
  if (length_scale <= 0.0) throw std::invalid_argument("gp_noise: length_scale must be positive");
  if (noise_scale < 0.0) throw std::invalid_argument("gp_noise: noise_scale must be >= 0");
  if (noise_scale == 0.0) return std::vector<double>(grid.size(), 0.0);

  Eigen::MatrixXd K(G, G);
  for (Eigen::Index i = 0; i < G; ++i)
    for (Eigen::Index j = 0; j < G; ++j)
      K(i, j) = noise_scale * noise_scale *
                std::exp(-std::abs(grid[static_cast<std::size_t>(i)] - grid[static_cast<std::size_t>(j)]) /
                         length_scale);

  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 1e-10;
  for (;;) {
    Eigen::MatrixXd Kj = K;
    Kj.diagonal().array() += jitter;
    llt.compute(Kj);
    if (llt.info() == Eigen::Success) break;
    jitter *= 10.0;
    if (jitter > 1e-6) throw std::runtime_error("gp_noise: kernel matrix is not positive definite");
  }

  Eigen::VectorXd z(G);
  for (Eigen::Index i = 0; i < G; ++i) z[i] = rng.normal();
  const Eigen::VectorXd draw = llt.matrixL() * z;
  return {draw.data(), draw.data() + G};
}

double sample_scalar(int j, int label, Rng& rng) {
  if (label != 0 && label != 1) throw std::invalid_argument("sample_scalar: label must be 0 or 1");
  const bool y0 = label == 0;
  switch (j) {
    case 1:
      return y0 ? rng.uniform(1.0, 2.0) : rng.uniform(0.75, 1.75);
    case 2:
      return y0 ? rng.normal(0.0, 1.0) : rng.normal(0.5, 1.0);
    case 3:
      return y0 ? rng.exponential(0.5) : rng.exponential(1.0);
    case 4:
      return y0 ? rng.chi_square(0.1) : rng.chi_square(0.2);
    case 5:
      return y0 ? rng.lognormal(0.0, 1.0) : rng.lognormal(0.25, 1.0);
    case 6:
      return y0 ? rng.gamma(2.0, 2.0) : rng.gamma(3.0, 2.0);
    case 7:
      return y0 ? rng.beta(2.0, 3.0) : rng.beta(3.0, 2.0);
    case 8:
      return y0 ? static_cast<double>(rng.bernoulli(0.55)) : static_cast<double>(rng.bernoulli(0.45));
    default:
      throw std::invalid_argument("sample_scalar: index must be in 1..8, got " + std::to_string(j));
  }
}

std::vector<double> uniform_grid(int size) {
  if (size < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i)
    grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / static_cast<double>(size - 1);
  return grid;
}

namespace {

std::vector<double> uneven_grid_draw(int size, double sigma_t, Rng& rng) {
  std::vector<double> inc(static_cast<std::size_t>(size), 0.0);
  for (int k = 1; k < size; ++k) inc[static_cast<std::size_t>(k)] = 0.01 + std::abs(rng.normal(0.99, sigma_t));
  double total = 0.0;
  for (double v : inc) total += v;
  std::vector<double> grid(static_cast<std::size_t>(size));
  double cum = 0.0;
  for (int k = 0; k < size; ++k) {
    cum += inc[static_cast<std::size_t>(k)];
    grid[static_cast<std::size_t>(k)] = cum / total;
  }
  grid.front() = 0.0;
  grid.back() = 1.0;
  return grid;
}

}  // namespace

std::vector<double> uneven_grid(int size, double sigma_t, std::uint64_t seed) {
  if (size < 2) throw std::invalid_argument("uneven_grid: need at least 2 points");
  if (sigma_t < 0.0) throw std::invalid_argument("uneven_grid: sigma_t must be >= 0");
  if (sigma_t == 0.0) return uniform_grid(size);
  Rng rng(seed);
  return uneven_grid_draw(size, sigma_t, rng);
}

Dataset generate_dataset(const ScenarioConfig& config) {
  if (config.num_channels < 1 || config.num_channels > 8)
    throw std::invalid_argument("generate_dataset: num_channels must be in 1..8");
  if (config.q < 0 || config.q > 8)
    throw std::invalid_argument("generate_dataset: q must be in 0..8");
  if (config.n < 2) throw std::invalid_argument("generate_dataset: need n >= 2");
  if (config.grid_size < 2) throw std::invalid_argument("generate_dataset: grid_size must be >= 2");
  if (config.noise_scale < 0.0) throw std::invalid_argument("generate_dataset: noise_scale must be >= 0");
  if (config.sigma_t < 0.0) throw std::invalid_argument("generate_dataset: sigma_t must be >= 0");

  const std::vector<double> shared_grid = uniform_grid(config.grid_size);

  // For the shared grid the Cholesky factor is the same for every sample;
  // factor it once by running a draw-free probe through gp_noise's kernel.
  Eigen::MatrixXd shared_L;
  if (config.noise_scale > 0.0 && config.sigma_t == 0.0) {
    const auto G = static_cast<Eigen::Index>(shared_grid.size());
    Eigen::MatrixXd K(G, G);
    for (Eigen::Index i = 0; i < G; ++i)
      for (Eigen::Index j = 0; j < G; ++j)
        K(i, j) = config.noise_scale * config.noise_scale *
                  std::exp(-std::abs(shared_grid[static_cast<std::size_t>(i)] -
                                     shared_grid[static_cast<std::size_t>(j)]) /
                           config.gp_length_scale);
    K.diagonal().array() += 1e-10;
    Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() != Eigen::Success) throw std::runtime_error("generate_dataset: kernel factorization failed");
    shared_L = llt.matrixL();
  }

  Dataset ds;
  ds.meta.num_channels = config.num_channels;
  ds.meta.q = config.q;
  ds.meta.seed = config.seed;
  ds.meta.provenance = "synthetic";
  ds.meta.notes["f5_label1_normal_variance"] = "0.5";

  const int n_zero = (config.n + 1) / 2;
  ds.samples.reserve(static_cast<std::size_t>(config.n));
  for (int i = 0; i < config.n; ++i) {
    const int label = i < n_zero ? 0 : 1;
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(i)));

    std::vector<double> grid = shared_grid;
    if (config.sigma_t > 0.0) grid = uneven_grid_draw(config.grid_size, config.sigma_t, rng);

    Sample s;
    s.label = label;
    s.channels.reserve(static_cast<std::size_t>(config.num_channels));
    for (int c = 0; c < config.num_channels; ++c) {
      std::vector<double> noise;
      if (config.noise_scale == 0.0) {
        noise.assign(grid.size(), 0.0);
      } else if (config.sigma_t == 0.0) {
        Eigen::VectorXd z(static_cast<Eigen::Index>(grid.size()));
        for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = rng.normal();
        const Eigen::VectorXd draw = shared_L * z;
        noise.assign(draw.data(), draw.data() + draw.size());
      } else {
        noise = gp_noise(grid, config.gp_length_scale, config.noise_scale, rng);
      }
      ChannelSeries ch;
      ch.channel_index = c;
      ch.times = grid;
      ch.values.resize(grid.size());
      for (std::size_t k = 0; k < grid.size(); ++k)
        ch.values[k] = base_function(c + 1, label, grid[k]) + noise[k];
      s.channels.push_back(std::move(ch));
    }

    s.scalars.resize(config.q);
    for (int j = 0; j < config.q; ++j) s.scalars[j] = sample_scalar(j + 1, label, rng);
    ds.samples.push_back(std::move(s));
  }

  if (config.missing_prob > 0.0)
    return apply_missing(ds, config.missing_prob, derive_seed(config.seed, 0x6D697373ULL));
  return ds;
}

Dataset apply_missing(const Dataset& ds, double prob, std::uint64_t seed) {
  if (prob < 0.0 || prob >= 1.0)
    throw std::invalid_argument("apply_missing: prob must lie in [0, 1)");
  if (prob == 0.0) return ds;

  Dataset out;
  out.meta = ds.meta;
  out.samples.reserve(ds.samples.size());
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    Rng rng(derive_seed(seed, i));
    Sample s;
    s.label = ds.samples[i].label;
    s.scalars = ds.samples[i].scalars;
    s.channels.reserve(ds.samples[i].channels.size());
    for (const auto& ch : ds.samples[i].channels) {
      std::vector<bool> keep(ch.times.size());
      std::size_t survivors = 0;
      do {
        survivors = 0;
        for (std::size_t k = 0; k < keep.size(); ++k) {
          keep[k] = rng.uniform() >= prob;
          if (keep[k]) ++survivors;
        }
      } while (survivors < 2);
      ChannelSeries kept;
      kept.channel_index = ch.channel_index;
      kept.times.reserve(survivors);
      kept.values.reserve(survivors);
      for (std::size_t k = 0; k < keep.size(); ++k) {
        if (keep[k]) {
          kept.times.push_back(ch.times[k]);
          kept.values.push_back(ch.values[k]);
        }
      }
      s.channels.push_back(std::move(kept));
    }
    out.samples.push_back(std::move(s));
  }
  return out;
}

}  // namespace sigclass
