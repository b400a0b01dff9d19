#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "matdist/parallel.hpp"
#include "matdist/sample_matrix.hpp"
#include "matdist/stats.hpp"

namespace matdist {

// A replica collection of k x k sample matrices standing in for the matrix
// distribution of a kernel.
struct EmpiricalMatrixDistribution {
  std::size_t order = 0;
  std::uint64_t base_seed = 0;
  std::string kernel_id;
  std::string grid_kind;
  std::vector<SampleMatrix> matrices;

  std::size_t replicas() const { return matrices.size(); }
};

// R independent replicas produced by source(replica_index, replica_seed).
template <typename SourceFn>
EmpiricalMatrixDistribution sample_distribution(std::size_t order,
                                                std::size_t replicas,
                                                std::uint64_t seed,
                                                SourceFn&& source,
                                                std::size_t threads = 1) {
  if (order < 1 || replicas < 1)
    throw std::invalid_argument("sample_distribution: k, R >= 1 required");
  EmpiricalMatrixDistribution emp;
  emp.order = order;
  emp.base_seed = seed;
  emp.matrices.resize(replicas);
  parallel_for(replicas, threads, [&](std::size_t r) {
    emp.matrices[r] = source(r, rng::derive_seed(seed, r));
  });
  for (const SampleMatrix& m : emp.matrices)
    if (m.rows != order || m.cols != order)
      throw std::invalid_argument(
          "sample_distribution: source produced a matrix of wrong order");
  if (!emp.matrices.empty()) {
    emp.kernel_id = emp.matrices.front().kernel_id;
    emp.grid_kind = emp.matrices.front().grid_kind;
  }
  return emp;
}

// R independent k x k grids of the requested kind, each evaluated through
// the kernel. Replica r draws from streams derived from (seed, r).
inline EmpiricalMatrixDistribution sample_matrix_distribution(
    const KernelSpec& kernel, const GridRequest& grid, std::size_t order,
    std::size_t replicas, std::uint64_t seed, std::size_t threads = 1) {
  return sample_distribution(
      order, replicas, seed,
      [&](std::size_t, std::uint64_t replica_seed) {
        GridSample g = sample_grid(kernel.space_x, kernel.space_y, order,
                                   order, grid, replica_seed);
        return evaluate_matrix(kernel, g);
      },
      threads);
}

// Permutation-invariant summary of the leading q x q minor of each replica:
// sorted entries concatenated with the sorted row-sum profile. Each row is
// sorted before accumulation so the sums are bitwise independent of column
// order; permuting a matrix then yields exactly equal features, not
// features equal up to rounding.
inline std::vector<std::vector<double>> minor_statistics(
    const EmpiricalMatrixDistribution& emp, std::size_t q) {
  if (q < 1 || q > emp.order)
    throw std::invalid_argument("minor_statistics: need 1 <= q <= order");
  std::vector<std::vector<double>> features;
  features.reserve(emp.replicas());
  std::vector<double> row(q);
  for (const SampleMatrix& m : emp.matrices) {
    std::vector<double> entries;
    entries.reserve(q * q + q);
    std::vector<double> row_sums(q, 0.0);
    for (std::size_t i = 0; i < q; ++i) {
      for (std::size_t j = 0; j < q; ++j) row[j] = m.at(i, j);
      entries.insert(entries.end(), row.begin(), row.end());
      std::sort(row.begin(), row.end());
      for (double v : row) row_sums[i] += v;
    }
    std::sort(entries.begin(), entries.end());
    std::sort(row_sums.begin(), row_sums.end());
    entries.insert(entries.end(), row_sums.begin(), row_sums.end());
    features.push_back(std::move(entries));
  }
  return features;
}

enum class TestDecision { kAccept, kReject };

inline std::string_view to_string(TestDecision d) {
  return d == TestDecision::kAccept ? "accept" : "reject";
}

struct ComparisonReport {
  double statistic = 0.0;
  double p_value = 1.0;
  TestDecision decision = TestDecision::kAccept;
  double alpha = 0.05;
  std::size_t permutations = 0;
  std::size_t q = 0;
};

// Two-sample equality test between the replica feature clouds of two
// empirical matrix distributions: energy distance with a replica-label
// permutation p-value.
inline ComparisonReport compare_distributions(
    const EmpiricalMatrixDistribution& a, const EmpiricalMatrixDistribution& b,
    std::size_t q, double alpha, std::size_t permutations,
    std::uint64_t seed) {
  if (q > a.order || q > b.order)
    throw std::invalid_argument("compare_distributions: q exceeds an order");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("compare_distributions: alpha in (0,1)");
  auto fa = minor_statistics(a, q);
  auto fb = minor_statistics(b, q);
  auto res = stats::two_sample_energy_test(fa, fb, permutations, seed);
  ComparisonReport report;
  report.statistic = res.statistic;
  report.p_value = res.p_value;
  report.alpha = alpha;
  report.permutations = permutations;
  report.q = q;
  report.decision =
      res.p_value <= alpha ? TestDecision::kReject : TestDecision::kAccept;
  return report;
}

enum class PermutationGroup { kFull, kDiag };

inline std::string_view to_string(PermutationGroup g) {
  return g == PermutationGroup::kFull ? "full" : "diag";
}

struct InvarianceReport {
  PermutationGroup group = PermutationGroup::kFull;
  double statistic = 0.0;
  double p_value = 1.0;
  TestDecision decision = TestDecision::kAccept;
  double alpha = 0.05;
  std::size_t permutations = 0;
  std::size_t q = 0;
};

namespace detail {

inline SampleMatrix permute_matrix(const SampleMatrix& m,
                                   const std::vector<std::size_t>& row_perm,
                                   const std::vector<std::size_t>& col_perm) {
  SampleMatrix out = m;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      out.at(i, j) = m.at(row_perm[i], col_perm[j]);
  return out;
}

}  // namespace detail

// Exchangeability check: applies an independent random permutation to every
// replica (independent row and column permutations for the full group, one
// shared permutation for diag) and tests the permuted collection against
// the original.
inline InvarianceReport invariance_check(const EmpiricalMatrixDistribution& emp,
                                         PermutationGroup group, std::size_t q,
                                         double alpha, std::size_t permutations,
                                         std::uint64_t seed) {
  if (group == PermutationGroup::kDiag) {
    for (const SampleMatrix& m : emp.matrices)
      if (!m.is_symmetric_payload())
        throw std::invalid_argument(
            "invariance_check: diag group requires symmetric matrices");
  }
  EmpiricalMatrixDistribution permuted = emp;
  rng::Stream perms(seed, "invariance.perm");
  const std::size_t k = emp.order;
  for (std::size_t r = 0; r < emp.replicas(); ++r) {
    auto rows = perms.permutation(k, (2 * r) * k);
    auto cols = group == PermutationGroup::kFull
                    ? perms.permutation(k, (2 * r + 1) * k)
                    : rows;
    permuted.matrices[r] = detail::permute_matrix(emp.matrices[r], rows, cols);
  }
  ComparisonReport cmp = compare_distributions(
      emp, permuted, q, alpha, permutations, rng::derive_seed(seed, 0x494e56));
  InvarianceReport report;
  report.group = group;
  report.statistic = cmp.statistic;
  report.p_value = cmp.p_value;
  report.decision = cmp.decision;
  report.alpha = alpha;
  report.permutations = permutations;
  report.q = q;
  return report;
}

// Builds one empirical distribution per grid kind and compares them. The
// two sides use distinct derived seeds so that identical kinds form a null
// comparison rather than a degenerate one.
inline ComparisonReport compare_grid_types(const KernelSpec& kernel,
                                           const GridRequest& kind_a,
                                           const GridRequest& kind_b,
                                           std::size_t order,
                                           std::size_t replicas, std::size_t q,
                                           double alpha,
                                           std::size_t permutations,
                                           std::uint64_t seed,
                                           std::size_t threads = 1) {
  auto emp_a = sample_matrix_distribution(kernel, kind_a, order, replicas,
                                          rng::derive_seed(seed, 0xa), threads);
  auto emp_b = sample_matrix_distribution(kernel, kind_b, order, replicas,
                                          rng::derive_seed(seed, 0xb), threads);
  return compare_distributions(emp_a, emp_b, q, alpha, permutations,
                               rng::derive_seed(seed, 0xc));
}

}  // namespace matdist
