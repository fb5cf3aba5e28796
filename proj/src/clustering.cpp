#include "bess/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

#include "bess/error.hpp"

namespace bess {

namespace {

constexpr int kMaxIterations = 50;
constexpr int kBarycenterIterations = 10;

double point_cost(const double* a, const double* b, std::size_t channels) {
  double s = 0.0;
  for (std::size_t c = 0; c < channels; ++c) {
    const double d = a[c] - b[c];
    s += d * d;
  }
  return s;
}

// Accumulated-cost matrix, (n+1) x (m+1) with an infinite border.
std::vector<double> dtw_table(std::span<const double> a, std::span<const double> b,
                              std::size_t channels) {
  const std::size_t n = a.size() / channels, m = b.size() / channels;
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> D((n + 1) * (m + 1), inf);
  D[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const double best =
          std::min({D[(i - 1) * (m + 1) + j], D[i * (m + 1) + j - 1], D[(i - 1) * (m + 1) + j - 1]});
      D[i * (m + 1) + j] = best + point_cost(&a[(i - 1) * channels], &b[(j - 1) * channels], channels);
    }
  }
  return D;
}

// Optimal warping path as (i, j) index pairs.
std::vector<std::pair<std::size_t, std::size_t>> dtw_path(std::span<const double> a,
                                                          std::span<const double> b,
                                                          std::size_t channels) {
  const std::size_t n = a.size() / channels, m = b.size() / channels;
  const auto D = dtw_table(a, b, channels);
  std::vector<std::pair<std::size_t, std::size_t>> path;
  std::size_t i = n, j = m;
  while (i > 0 && j > 0) {
    path.emplace_back(i - 1, j - 1);
    const double diag = D[(i - 1) * (m + 1) + j - 1];
    const double up = D[(i - 1) * (m + 1) + j];
    const double left = D[i * (m + 1) + j - 1];
    if (diag <= up && diag <= left) {
      --i;
      --j;
    } else if (up <= left) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(path.begin(), path.end());
  return path;
}

void check_sequence(std::span<const double> s, std::size_t channels) {
  if (channels == 0) throw Error(ErrorCode::InvalidArgument, "channels must be positive");
  if (s.empty()) throw Error(ErrorCode::EmptyInput, "empty sequence");
  if (s.size() % channels != 0) {
    throw Error(ErrorCode::InvalidArgument, "sequence length is not a multiple of channels");
  }
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(n)));
}

std::vector<double> barycenter(const std::vector<double>& start,
                               const std::vector<const std::vector<double>*>& members,
                               std::size_t channels) {
  std::vector<double> c = start;
  const std::size_t steps = c.size() / channels;
  for (int it = 0; it < kBarycenterIterations; ++it) {
    std::vector<double> sum(c.size(), 0.0);
    std::vector<int> count(steps, 0);
    for (const auto* x : members) {
      for (auto [i, j] : dtw_path(c, *x, channels)) {
        for (std::size_t ch = 0; ch < channels; ++ch) sum[i * channels + ch] += (*x)[j * channels + ch];
        ++count[i];
      }
    }
    std::vector<double> next(c.size());
    for (std::size_t i = 0; i < steps; ++i) {
      for (std::size_t ch = 0; ch < channels; ++ch) {
        next[i * channels + ch] = sum[i * channels + ch] / count[i];
      }
    }
    if (next == c) break;
    c = std::move(next);
  }
  return c;
}

std::vector<double> mean_of(const std::vector<const std::vector<double>*>& members) {
  std::vector<double> c(members.front()->size(), 0.0);
  for (const auto* x : members) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += (*x)[i];
  }
  for (double& v : c) v /= static_cast<double>(members.size());
  return c;
}

}  // namespace

Metric parse_metric(std::string_view name) {
  if (name == "dtw") return Metric::Dtw;
  if (name == "euclidean") return Metric::Euclidean;
  throw Error(ErrorCode::InvalidArgument,
              "unknown metric '" + std::string(name) + "' (expected dtw or euclidean)");
}

std::string_view to_string(Metric metric) {
  return metric == Metric::Dtw ? "dtw" : "euclidean";
}

double dtw_distance(std::span<const double> a, std::span<const double> b, std::size_t channels) {
  check_sequence(a, channels);
  check_sequence(b, channels);
  const auto D = dtw_table(a, b, channels);
  return std::sqrt(D.back());
}

double feature_distance(std::span<const double> a, std::span<const double> b, Metric metric) {
  if (metric == Metric::Dtw) return dtw_distance(a, b, kFeatureChannels);
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "feature length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::vector<std::vector<double>> featurize(std::span<const MarketDay> days) {
  if (days.empty()) throw Error(ErrorCode::EmptyInput, "no days to featurize");
  auto channel = [](const MarketDay& d, std::size_t c, std::size_t h) {
    switch (c) {
      case 0: return d.price_energy[h];
      case 1: return d.price_reg_cap[h] + d.price_reg_perf[h];
      default: return d.price_res[h];
    }
  };
  std::array<double, kFeatureChannels> mean{}, sd{};
  const double n = static_cast<double>(days.size() * kHoursPerDay);
  for (std::size_t c = 0; c < kFeatureChannels; ++c) {
    double s = 0.0;
    for (const auto& d : days)
      for (std::size_t h = 0; h < kHoursPerDay; ++h) s += channel(d, c, h);
    mean[c] = s / n;
    double v = 0.0;
    for (const auto& d : days)
      for (std::size_t h = 0; h < kHoursPerDay; ++h) v += std::pow(channel(d, c, h) - mean[c], 2);
    sd[c] = std::sqrt(v / n);
  }
  std::vector<std::vector<double>> out;
  out.reserve(days.size());
  for (const auto& d : days) {
    std::vector<double> f(kHoursPerDay * kFeatureChannels);
    for (std::size_t h = 0; h < kHoursPerDay; ++h) {
      for (std::size_t c = 0; c < kFeatureChannels; ++c) {
        f[h * kFeatureChannels + c] = sd[c] > 0.0 ? (channel(d, c, h) - mean[c]) / sd[c] : 0.0;
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<int> ClusterModel::sizes() const {
  std::vector<int> s(static_cast<std::size_t>(k), 0);
  for (int a : assignments) ++s[static_cast<std::size_t>(a)];
  return s;
}

ClusterModel cluster_days(std::span<const MarketDay> days, int k, Metric metric,
                          std::uint64_t seed) {
  if (days.empty()) throw Error(ErrorCode::EmptyInput, "no days to cluster");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  for (const auto& d : days) validate(d);
  const auto X = featurize(days);
  const std::size_t n = X.size();
  {
    std::set<std::vector<double>> distinct(X.begin(), X.end());
    if (static_cast<std::size_t>(k) > distinct.size()) {
      throw Error(ErrorCode::KTooLarge, "k = " + std::to_string(k) + " exceeds the " +
                                            std::to_string(distinct.size()) + " distinct days");
    }
  }
  const std::size_t K = static_cast<std::size_t>(k);
  auto dist = [&](const std::vector<double>& a, const std::vector<double>& b) {
    return feature_distance(a, b, metric);
  };

  // k-means++ seeding.
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> centroids;
  centroids.push_back(X[uniform_index(rng, n)]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = std::pow(dist(X[i], centroids[0]), 2);
  while (centroids.size() < K) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick = 0;
    const double target = unit_uniform(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (d2[i] <= 0.0) continue;
      pick = i;
      acc += d2[i];
      if (acc > target) break;
    }
    centroids.push_back(X[pick]);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], std::pow(dist(X[i], X[pick]), 2));
  }

  std::vector<int> assign(n, -1);
  std::vector<double> best_d(n, 0.0);
  auto assign_all = [&]() {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int arg = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < K; ++c) {
        const double d = dist(X[i], centroids[c]);
        if (d < best) {
          best = d;
          arg = static_cast<int>(c);
        }
      }
      best_d[i] = best;
      if (assign[i] != arg) changed = true;
      assign[i] = arg;
    }
    return changed;
  };

  int iterations = 0;
  bool converged = false;
  while (iterations < kMaxIterations) {
    const bool changed = assign_all();
    if (!changed) {
      converged = true;
      break;
    }
    ++iterations;
    std::vector<std::vector<const std::vector<double>*>> members(K);
    for (std::size_t i = 0; i < n; ++i) members[static_cast<std::size_t>(assign[i])].push_back(&X[i]);
    std::vector<bool> taken(n, false);
    for (std::size_t c = 0; c < K; ++c) {
      if (members[c].empty()) {
        // Reseed an empty cluster with the point farthest from its centroid.
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (!taken[i] && best_d[i] > far_d) {
            far_d = best_d[i];
            far = i;
          }
        }
        taken[far] = true;
        centroids[c] = X[far];
        continue;
      }
      centroids[c] = metric == Metric::Dtw ? barycenter(centroids[c], members[c], kFeatureChannels)
                                           : mean_of(members[c]);
    }
  }
  if (!converged) assign_all();

  ClusterModel m;
  m.k = k;
  m.metric = metric;
  m.seed = seed;
  m.centroids = std::move(centroids);
  m.assignments = std::move(assign);
  m.iterations = iterations;
  for (std::size_t i = 0; i < n; ++i) {
    m.inertia += best_d[i] * best_d[i];
    m.dates.push_back(days[i].date);
    auto& counts = m.day_counts[static_cast<int>(days[i].date.year())];
    counts.resize(K, 0);
    ++counts[static_cast<std::size_t>(m.assignments[i])];
  }

  m.representatives.resize(K);
  const auto sizes = m.sizes();
  for (std::size_t c = 0; c < K; ++c) {
    MarketDay& r = m.representatives[c];
    bool first = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (static_cast<std::size_t>(m.assignments[i]) != c) continue;
      if (first) r.date = days[i].date;
      first = false;
      const double w = 1.0 / sizes[c];
      for (std::size_t h = 0; h < kHoursPerDay; ++h) {
        r.price_energy[h] += w * days[i].price_energy[h];
        r.price_reg_cap[h] += w * days[i].price_reg_cap[h];
        r.price_reg_perf[h] += w * days[i].price_reg_perf[h];
        r.price_res[h] += w * days[i].price_res[h];
      }
    }
  }
  return m;
}

ClusterModel cluster_days_best(std::span<const MarketDay> days, int k, Metric metric,
                               std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "no seeds given");
  ClusterModel best = cluster_days(days, k, metric, seeds[0]);
  for (std::size_t s = 1; s < seeds.size(); ++s) {
    auto m = cluster_days(days, k, metric, seeds[s]);
    if (m.inertia < best.inertia) best = std::move(m);
  }
  return best;
}

}  // namespace bess
