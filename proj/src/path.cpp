#include "sigclass/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sigclass {

void ChannelSeries::validate() const {
  if (times.size() != values.size())
    throw std::invalid_argument("ChannelSeries: times and values differ in length");
  if (times.size() < 2)
    throw std::invalid_argument("ChannelSeries: need at least 2 observations, got " +
                                std::to_string(times.size()));
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i]))
      throw std::invalid_argument("ChannelSeries: non-finite observation at position " +
                                  std::to_string(i));
    if (i > 0 && !(times[i] > times[i - 1]))
      throw std::invalid_argument("ChannelSeries: times not strictly increasing at position " +
                                  std::to_string(i));
  }
}

PiecewiseLinearPath::PiecewiseLinearPath(std::vector<double> times, std::vector<double> coords, int dim)
    : dim_(dim), times_(std::move(times)), coords_(std::move(coords)) {
  if (dim_ < 1) throw std::invalid_argument("PiecewiseLinearPath: dim must be >= 1");
  if (times_.size() < 2) throw std::invalid_argument("PiecewiseLinearPath: need at least 2 vertices");
  if (coords_.size() != times_.size() * static_cast<std::size_t>(dim_))
    throw std::invalid_argument("PiecewiseLinearPath: coords size does not match vertices * dim");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]))
      throw std::invalid_argument("PiecewiseLinearPath: non-finite time");
    if (i > 0 && !(times_[i] > times_[i - 1]))
      throw std::invalid_argument("PiecewiseLinearPath: times not strictly increasing");
  }
  for (double v : coords_)
    if (!std::isfinite(v)) throw std::invalid_argument("PiecewiseLinearPath: non-finite coordinate");
}

double PiecewiseLinearPath::value_at(double t, int c) const {
  if (t <= times_.front()) return coord(0, c);
  if (t >= times_.back()) return coord(num_vertices() - 1, c);
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  return coord(lo, c) + w * (coord(hi, c) - coord(lo, c));
}

std::vector<double> PiecewiseLinearPath::displacement(std::size_t i) const {
  std::vector<double> d(static_cast<std::size_t>(dim_));
  for (int c = 0; c < dim_; ++c) d[static_cast<std::size_t>(c)] = coord(i + 1, c) - coord(i, c);
  return d;
}

PiecewiseLinearPath interpolate_path(const std::vector<ChannelSeries>& channels, int num_channels) {
  if (num_channels < 1) throw std::invalid_argument("interpolate_path: num_channels must be >= 1");
  if (channels.size() != static_cast<std::size_t>(num_channels))
    throw std::invalid_argument("interpolate_path: expected " + std::to_string(num_channels) +
                                " channels, got " + std::to_string(channels.size()));

  std::vector<const ChannelSeries*> by_index(static_cast<std::size_t>(num_channels), nullptr);
  for (const auto& ch : channels) {
    ch.validate();
    if (ch.channel_index < 0 || ch.channel_index >= num_channels)
      throw std::invalid_argument("interpolate_path: channel_index " +
                                  std::to_string(ch.channel_index) + " out of range");
    if (by_index[static_cast<std::size_t>(ch.channel_index)] != nullptr)
      throw std::invalid_argument("interpolate_path: duplicate channel_index " +
                                  std::to_string(ch.channel_index));
    by_index[static_cast<std::size_t>(ch.channel_index)] = &ch;
  }

  std::vector<double> grid;
  for (const auto* ch : by_index) grid.insert(grid.end(), ch->times.begin(), ch->times.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const std::size_t m = grid.size();
  std::vector<double> coords(m * static_cast<std::size_t>(num_channels));
  for (int c = 0; c < num_channels; ++c) {
    const ChannelSeries& ch = *by_index[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < m; ++i) {
      const double t = grid[i];
      double v = 0.0;
      if (t <= ch.times.front()) {
        v = ch.values.front();
      } else if (t >= ch.times.back()) {
        v = ch.values.back();
      } else {
        const auto it = std::upper_bound(ch.times.begin(), ch.times.end(), t);
        const std::size_t hi = static_cast<std::size_t>(it - ch.times.begin());
        const std::size_t lo = hi - 1;
        const double w = (t - ch.times[lo]) / (ch.times[hi] - ch.times[lo]);
        v = ch.values[lo] + w * (ch.values[hi] - ch.values[lo]);
      }
      coords[i * static_cast<std::size_t>(num_channels) + static_cast<std::size_t>(c)] = v;
    }
  }
  return PiecewiseLinearPath(std::move(grid), std::move(coords), num_channels);
}

AugmentedPath::AugmentedPath(PiecewiseLinearPath path) : path_(std::move(path)) {
  const int last = path_.dim() - 1;
  if (path_.dim() < 2)
    throw std::invalid_argument("AugmentedPath: need base coordinates plus the time coordinate");
  for (std::size_t i = 0; i < path_.num_vertices(); ++i)
    if (path_.coord(i, last) != path_.time(i))
      throw std::invalid_argument("AugmentedPath: last coordinate must equal the time stamps");
}

AugmentedPath time_augment(const PiecewiseLinearPath& path) {
  const int d = path.dim() + 1;
  const std::size_t m = path.num_vertices();
  std::vector<double> coords(m * static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < m; ++i) {
    for (int c = 0; c < path.dim(); ++c)
      coords[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)] = path.coord(i, c);
    coords[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(d - 1)] = path.time(i);
  }
  return AugmentedPath(PiecewiseLinearPath(path.times(), std::move(coords), d));
}

double total_variation(const PiecewiseLinearPath& path) {
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < path.num_vertices(); ++i) {
    double s2 = 0.0;
    for (int c = 0; c < path.dim(); ++c) {
      const double d = path.coord(i + 1, c) - path.coord(i, c);
      s2 += d * d;
    }
    tv += std::sqrt(s2);
  }
  return tv;
}

}  // namespace sigclass
