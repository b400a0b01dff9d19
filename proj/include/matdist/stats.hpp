#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "matdist/rng.hpp"

namespace matdist::stats {

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean of empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

// Sample standard deviation (n-1 denominator).
inline double stddev(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("stddev needs >= 2 values");
  double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Kolmogorov-Smirnov statistic of a sample against Uniform[0,1).
inline double ks_uniform_statistic(std::vector<double> values) {
  if (values.empty())
    throw std::invalid_argument("ks_uniform_statistic: empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double lo = values[i] - static_cast<double>(i) / n;
    double hi = static_cast<double>(i + 1) / n - values[i];
    d = std::max({d, lo, hi});
  }
  return d;
}

// Complement of the Kolmogorov distribution CDF,
// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
inline double kolmogorov_q(double lambda) {
  if (lambda < 0.18) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// Asymptotic p-value for a one-sample KS test against Uniform[0,1), with
// Stephens' small-sample correction. Vacuous (p = 1) for samples of size 1.
inline double ks_uniform_pvalue(const std::vector<double>& values) {
  if (values.size() < 2) return 1.0;
  double d = ks_uniform_statistic(values);
  double sn = std::sqrt(static_cast<double>(values.size()));
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

struct EnergyTestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

namespace detail {

inline double euclidean(const std::vector<double>& a,
                        const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// Energy statistic from a pooled pairwise-distance matrix and a group-A
// index set. Uses the V-statistic convention (diagonal included), so two
// identical clouds give exactly zero.
inline double energy_from_distances(const std::vector<double>& dist,
                                    std::size_t pooled,
                                    const std::vector<std::size_t>& group_a,
                                    const std::vector<bool>& in_a,
                                    double total_sum, std::size_t n_a,
                                    std::size_t n_b) {
  double s_aa = 0.0;
  for (std::size_t u = 0; u < group_a.size(); ++u) {
    const double* row = dist.data() + group_a[u] * pooled;
    for (std::size_t v = u + 1; v < group_a.size(); ++v)
      s_aa += row[group_a[v]];
  }
  double s_bb = 0.0;
  {
    std::vector<std::size_t> group_b;
    group_b.reserve(n_b);
    for (std::size_t i = 0; i < pooled; ++i)
      if (!in_a[i]) group_b.push_back(i);
    for (std::size_t u = 0; u < group_b.size(); ++u) {
      const double* row = dist.data() + group_b[u] * pooled;
      for (std::size_t v = u + 1; v < group_b.size(); ++v)
        s_bb += row[group_b[v]];
    }
  }
  double s_ab = total_sum - s_aa - s_bb;
  double na = static_cast<double>(n_a), nb = static_cast<double>(n_b);
  return 2.0 * s_ab / (na * nb) - 2.0 * s_aa / (na * na) -
         2.0 * s_bb / (nb * nb);
}

}  // namespace detail

// Two-sample energy test with a replica-label permutation p-value.
// If the two clouds are equal as multisets the statistic is exactly zero
// and the test accepts without permuting.
inline EnergyTestResult two_sample_energy_test(
    const std::vector<std::vector<double>>& cloud_a,
    const std::vector<std::vector<double>>& cloud_b, std::size_t permutations,
    std::uint64_t seed) {
  if (cloud_a.empty() || cloud_b.empty())
    throw std::invalid_argument("energy test: empty sample cloud");
  if (permutations < 99)
    throw std::invalid_argument("energy test: >= 99 permutations required");
  if (cloud_a[0].size() != cloud_b[0].size())
    throw std::invalid_argument("energy test: feature dimension mismatch");

  {
    auto sa = cloud_a, sb = cloud_b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa == sb) return {0.0, 1.0};
  }

  const std::size_t n_a = cloud_a.size(), n_b = cloud_b.size();
  const std::size_t pooled = n_a + n_b;
  std::vector<const std::vector<double>*> pts;
  pts.reserve(pooled);
  for (const auto& f : cloud_a) pts.push_back(&f);
  for (const auto& f : cloud_b) pts.push_back(&f);

  std::vector<double> dist(pooled * pooled, 0.0);
  double total_sum = 0.0;
  for (std::size_t i = 0; i < pooled; ++i) {
    for (std::size_t j = i + 1; j < pooled; ++j) {
      double d = detail::euclidean(*pts[i], *pts[j]);
      dist[i * pooled + j] = d;
      dist[j * pooled + i] = d;
      total_sum += d;
    }
  }

  std::vector<std::size_t> group_a(n_a);
  std::iota(group_a.begin(), group_a.end(), 0);
  std::vector<bool> in_a(pooled, false);
  for (std::size_t i = 0; i < n_a; ++i) in_a[i] = true;
  double observed = detail::energy_from_distances(dist, pooled, group_a, in_a,
                                                  total_sum, n_a, n_b);

  rng::Stream perm_stream(seed, "energy.perm");
  std::size_t at_least = 0;
  for (std::size_t b = 0; b < permutations; ++b) {
    auto p = perm_stream.permutation(pooled, b * pooled);
    std::vector<std::size_t> ga(p.begin(), p.begin() + n_a);
    std::vector<bool> ia(pooled, false);
    for (std::size_t i : ga) ia[i] = true;
    double s = detail::energy_from_distances(dist, pooled, ga, ia, total_sum,
                                             n_a, n_b);
    if (s >= observed) ++at_least;
  }
  double p_value = static_cast<double>(1 + at_least) /
                   static_cast<double>(permutations + 1);
  return {observed, p_value};
}

}  // namespace matdist::stats
