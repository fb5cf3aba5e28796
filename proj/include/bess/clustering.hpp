#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "bess/market_data.hpp"

namespace bess {

enum class Metric { Dtw, Euclidean };

/// "dtw" or "euclidean"; throws InvalidArgument otherwise.
Metric parse_metric(std::string_view name);
std::string_view to_string(Metric metric);

/// Dynamic time warping distance between two multichannel sequences stored
/// time-major (`channels` values per step). Squared Euclidean point cost;
/// returns the square root of the accumulated cost. Throws EmptyInput.
double dtw_distance(std::span<const double> a, std::span<const double> b,
                    std::size_t channels = 1);

/// Number of channels per hour in a day's feature sequence: energy,
/// regulation (capacity + performance) and reserve.
inline constexpr std::size_t kFeatureChannels = 3;

/// Z-normalized feature sequences, 24 steps x 3 channels, time-major. Each
/// price family is normalized with the mean and standard deviation taken
/// over all days and hours.
std::vector<std::vector<double>> featurize(std::span<const MarketDay> days);

struct ClusterModel {
  int k = 0;
  Metric metric = Metric::Dtw;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> centroids;  // feature space
  std::vector<MarketDay> representatives;      // member mean of raw prices
  std::vector<Date> dates;
  std::vector<int> assignments;                // parallel to dates
  std::map<int, std::vector<int>> day_counts;  // year -> members per cluster
  double inertia = 0.0;
  int iterations = 0;

  /// Members per cluster over all years.
  std::vector<int> sizes() const;
};

/// k-means with k-means++ seeding. DTW centroids are refined by barycenter
/// averaging; Euclidean centroids are plain means. Throws EmptyInput or
/// KTooLarge (k greater than the number of distinct days).
ClusterModel cluster_days(std::span<const MarketDay> days, int k, Metric metric,
                          std::uint64_t seed);

/// Lowest-inertia model over the given seeds.
ClusterModel cluster_days_best(std::span<const MarketDay> days, int k, Metric metric,
                               std::span<const std::uint64_t> seeds);

/// Distance between two feature sequences under `metric`.
double feature_distance(std::span<const double> a, std::span<const double> b, Metric metric);

}  // namespace bess
