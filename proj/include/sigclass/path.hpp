#pragma once

#include <cstddef>
#include <vector>

namespace sigclass {

// One observed coordinate of a functional sample: (time, value) pairs on the
// channel's own grid. Grids may differ between channels and between samples.
struct ChannelSeries {
  int channel_index = 0;
  std::vector<double> times;
  std::vector<double> values;

  // Throws std::invalid_argument unless there are >= 2 observations, times
  // are finite and strictly increasing, and values are finite.
  void validate() const;
};

// Piecewise-linear interpolant through m vertices in dim coordinates.
// Vertex coordinates are stored row-major: coords[i*dim + c].
class PiecewiseLinearPath {
 public:
  PiecewiseLinearPath(std::vector<double> times, std::vector<double> coords, int dim);

  int dim() const { return dim_; }
  std::size_t num_vertices() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& coords() const { return coords_; }

  double time(std::size_t i) const { return times_[i]; }
  double coord(std::size_t i, int c) const { return coords_[i * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(c)]; }

  // Linear interpolation inside the domain, constant extrapolation outside.
  double value_at(double t, int c) const;

  // Displacement of segment i: vertex i+1 minus vertex i.
  std::vector<double> displacement(std::size_t i) const;

  double domain_start() const { return times_.front(); }
  double domain_end() const { return times_.back(); }

 private:
  int dim_;
  std::vector<double> times_;
  std::vector<double> coords_;
};

// Joins per-channel series onto the sorted union of their observation times.
// Each channel is linearly interpolated inside its own observed range and
// extended constantly outside it, so the result never contains NaN even when
// channels were observed on disjoint grids. Requires exactly one series per
// channel index 0..num_channels-1.
PiecewiseLinearPath interpolate_path(const std::vector<ChannelSeries>& channels, int num_channels);

// Path whose last coordinate is the time stamp itself. The added coordinate
// is strictly monotone, which is what makes truncated signatures injective
// up to translation for these paths.
class AugmentedPath {
 public:
  explicit AugmentedPath(PiecewiseLinearPath path);

  const PiecewiseLinearPath& path() const { return path_; }
  int dim() const { return path_.dim(); }

 private:
  PiecewiseLinearPath path_;
};

AugmentedPath time_augment(const PiecewiseLinearPath& path);

// Sum of Euclidean lengths of the segments.
double total_variation(const PiecewiseLinearPath& path);

}  // namespace sigclass
