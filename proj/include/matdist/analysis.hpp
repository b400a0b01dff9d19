#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "matdist/distribution.hpp"
#include "matdist/parallel.hpp"
#include "matdist/rng.hpp"
#include "matdist/sample_matrix.hpp"
#include "matdist/stats.hpp"

namespace matdist {

// Epsilon-entropy of a finite metric-measure space given by a square
// distance matrix with mass 1/n on each index: the number of closed
// epsilon-balls a greedy cover needs before the covered mass exceeds
// 1 - epsilon. Greedy picks the ball covering the most uncovered points,
// lowest center index on ties.
inline std::size_t mm_entropy(const SampleMatrix& m, double epsilon) {
  if (m.rows != m.cols)
    throw std::invalid_argument("mm_entropy: matrix must be square");
  if (!m.is_symmetric_payload())
    throw std::invalid_argument("mm_entropy: matrix entries are not symmetric");
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("mm_entropy: epsilon must lie in (0, 1)");
  const std::size_t n = m.rows;
  const double target = (1.0 - epsilon) * static_cast<double>(n);
  std::vector<char> covered(n, 0);
  std::size_t covered_count = 0;
  std::size_t balls = 0;
  while (static_cast<double>(covered_count) <= target) {
    std::size_t best = n;
    std::size_t best_gain = 0;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t gain = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (!covered[j] && m.at(c, j) <= epsilon) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    if (best == n) break;  // unreachable while anything is uncovered
    for (std::size_t j = 0; j < n; ++j)
      if (!covered[j] && m.at(best, j) <= epsilon) {
        covered[j] = 1;
        ++covered_count;
      }
    ++balls;
  }
  return balls;
}

struct EntropyProfile {
  std::vector<double> epsilons;
  std::vector<std::size_t> sizes;
  // counts[e][s] is the entropy at epsilons[e] for a matrix of order sizes[s].
  std::vector<std::vector<std::size_t>> counts;
  bool diverging = false;
};

using EntropyMatrixSource =
    std::function<SampleMatrix(std::size_t order, std::uint64_t seed)>;

// Entropy as a function of sample size, one matrix per size. `diverging`
// reports whether the count at the smallest epsilon more than doubles from
// the smallest to the largest size; bounded spaces plateau, genuinely
// infinite-dimensional ones keep growing.
inline EntropyProfile entropy_profile(const EntropyMatrixSource& source,
                                      const std::vector<std::size_t>& sizes,
                                      const std::vector<double>& epsilons,
                                      std::uint64_t seed) {
  if (sizes.empty()) throw std::invalid_argument("entropy_profile: no sizes");
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1])
      throw std::invalid_argument(
          "entropy_profile: sizes must be strictly increasing");
  if (epsilons.empty())
    throw std::invalid_argument("entropy_profile: no epsilons");
  for (double eps : epsilons)
    if (!(eps > 0.0) || !(eps < 1.0))
      throw std::invalid_argument(
          "entropy_profile: epsilons must lie in (0, 1)");

  EntropyProfile profile;
  profile.epsilons = epsilons;
  profile.sizes = sizes;
  profile.counts.assign(epsilons.size(),
                        std::vector<std::size_t>(sizes.size(), 0));
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    SampleMatrix m = source(sizes[si], rng::derive_seed(seed, si));
    if (m.rows != sizes[si] || m.cols != sizes[si])
      throw std::invalid_argument(
          "entropy_profile: source produced a matrix of wrong order");
    for (std::size_t ei = 0; ei < epsilons.size(); ++ei)
      profile.counts[ei][si] = mm_entropy(m, epsilons[ei]);
  }
  std::size_t ei_min = static_cast<std::size_t>(
      std::min_element(epsilons.begin(), epsilons.end()) - epsilons.begin());
  profile.diverging =
      profile.counts[ei_min].back() > 2 * profile.counts[ei_min].front();
  return profile;
}

// Distance matrices of a metric kernel on symmetric grids of growing order.
inline EntropyMatrixSource kernel_entropy_source(KernelSpec kernel) {
  if (!kernel.is_metric)
    throw std::invalid_argument(
        "kernel_entropy_source: entropy needs a metric kernel");
  return [kernel = std::move(kernel)](std::size_t order, std::uint64_t seed) {
    return evaluate_matrix(kernel,
                           sample_symmetric_grid(kernel.space_x, order, seed));
  };
}

inline EntropyMatrixSource graph_entropy_source(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument(
        "graph_entropy_source: p must lie in (0, 1)");
  return [p](std::size_t order, std::uint64_t seed) {
    return random_graph_matrix(p, order, seed);
  };
}

enum class SpectrumNormalization { kNone, kByN, kBySqrtN };

inline std::string_view to_string(SpectrumNormalization n) {
  switch (n) {
    case SpectrumNormalization::kNone: return "none";
    case SpectrumNormalization::kByN: return "by-n";
    case SpectrumNormalization::kBySqrtN: return "by-sqrt-n";
  }
  throw std::invalid_argument("unknown normalization");
}

inline SpectrumNormalization normalization_from_string(std::string_view s) {
  if (s == "none") return SpectrumNormalization::kNone;
  if (s == "by-n") return SpectrumNormalization::kByN;
  if (s == "by-sqrt-n") return SpectrumNormalization::kBySqrtN;
  throw std::invalid_argument("unknown normalization: " + std::string(s));
}

struct SpectrumSummary {
  std::vector<double> eigenvalues;  // descending
  SpectrumNormalization normalization = SpectrumNormalization::kNone;
  std::size_t order = 0;
  std::uint64_t seed = 0;
};

inline SpectrumSummary spectrum(const SampleMatrix& m,
                                SpectrumNormalization normalization) {
  if (m.rows != m.cols)
    throw std::invalid_argument("spectrum: matrix must be square");
  if (!m.is_symmetric_payload())
    throw std::invalid_argument("spectrum: matrix entries are not symmetric");
  const std::size_t n = m.rows;
  Eigen::MatrixXd a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m.at(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("spectrum: eigensolver did not converge");
  double scale = 1.0;
  if (normalization == SpectrumNormalization::kByN)
    scale = 1.0 / static_cast<double>(n);
  else if (normalization == SpectrumNormalization::kBySqrtN)
    scale = 1.0 / std::sqrt(static_cast<double>(n));
  SpectrumSummary summary;
  summary.normalization = normalization;
  summary.order = n;
  summary.seed = m.seed;
  summary.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    summary.eigenvalues[i] =
        scale * solver.eigenvalues()(static_cast<Eigen::Index>(n - 1 - i));
  return summary;
}

// CDF of Wigner's semicircle law on [-2, 2].
inline double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + std::asin(0.5 * x) / std::numbers::pi +
         x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi);
}

inline double semicircle_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::invalid_argument("semicircle_quantile: p must lie in (0, 1)");
  double lo = -2.0, hi = 2.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (semicircle_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Wasserstein-1 distance between the standardized bulk spectrum and the
// semicircle law. The single largest eigenvalue is dropped first (kernel
// matrices with nonzero mean carry one rank-one outlier), the rest is
// centered and scaled to unit population variance, and W1 is evaluated by
// quantile matching at the midpoints (i + 1/2) / n.
inline double semicircle_distance(const std::vector<double>& eigenvalues) {
  if (eigenvalues.size() < 2)
    throw std::invalid_argument(
        "semicircle_distance: need at least two eigenvalues");
  std::vector<double> bulk(eigenvalues);
  std::sort(bulk.begin(), bulk.end());
  bulk.pop_back();
  const std::size_t n = bulk.size();
  double mu = stats::mean(bulk);
  double var = 0.0;
  for (double v : bulk) var += (v - mu) * (v - mu);
  var /= static_cast<double>(n);
  if (!(var > 0.0))
    throw std::invalid_argument("semicircle_distance: degenerate spectrum");
  const double sd = std::sqrt(var);
  double w1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    w1 += std::abs((bulk[i] - mu) / sd - semicircle_quantile(p));
  }
  return w1 / static_cast<double>(n);
}

inline double semicircle_distance(const SpectrumSummary& summary) {
  return semicircle_distance(summary.eigenvalues);
}

struct DispersionReport {
  std::vector<double> top_eigenvalues;  // one per replica
  double mean = 0.0;
  double stddev = 0.0;
  double cv = 0.0;
  SpectrumNormalization normalization = SpectrumNormalization::kNone;
};

// Coefficient of variation of the largest eigenvalue across replicas.
// Square-integrable kernels concentrate (cv -> 0); heavy-tailed ones keep a
// random limit spectrum and the cv stays bounded away from zero.
inline DispersionReport spectral_dispersion(
    const EmpiricalMatrixDistribution& emp, SpectrumNormalization normalization,
    std::size_t threads = 1) {
  if (emp.matrices.size() < 2)
    throw std::invalid_argument("spectral_dispersion: need >= 2 replicas");
  for (const SampleMatrix& m : emp.matrices) {
    if (m.rows != m.cols)
      throw std::invalid_argument("spectral_dispersion: matrices not square");
    if (!m.is_symmetric_payload())
      throw std::invalid_argument(
          "spectral_dispersion: matrix entries are not symmetric");
  }
  DispersionReport report;
  report.normalization = normalization;
  report.top_eigenvalues.resize(emp.matrices.size());
  parallel_for(emp.matrices.size(), threads, [&](std::size_t r) {
    report.top_eigenvalues[r] =
        spectrum(emp.matrices[r], normalization).eigenvalues.front();
  });
  report.mean = stats::mean(report.top_eigenvalues);
  report.stddev = stats::stddev(report.top_eigenvalues);
  report.cv =
      report.stddev == 0.0 ? 0.0 : report.stddev / std::abs(report.mean);
  return report;
}

// Dispersion of lambda_max / n across R independent symmetric grids.
inline DispersionReport spectral_dispersion(const KernelSpec& kernel,
                                            std::size_t order,
                                            std::size_t replicas,
                                            std::uint64_t seed,
                                            std::size_t threads = 1) {
  if (!kernel.is_metric)
    throw std::invalid_argument("spectral_dispersion: metric kernel required");
  EmpiricalMatrixDistribution emp = sample_matrix_distribution(
      kernel, GridRequest::symmetric(), order, replicas, seed, threads);
  return spectral_dispersion(emp, SpectrumNormalization::kByN, threads);
}

}  // namespace matdist
