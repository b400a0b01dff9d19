#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "matdist/grids.hpp"
#include "matdist/kernels.hpp"
#include "matdist/rng.hpp"

namespace matdist {

// A finite fragment ||f(x_n, y_m)|| with provenance.
struct SampleMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major
  std::string kernel_id;
  std::string grid_kind;
  std::uint64_t seed = 0;
  bool symmetric = false;

  static SampleMatrix zeros(std::size_t rows, std::size_t cols) {
    SampleMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.values.assign(rows * cols, 0.0);
    return m;
  }

  double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const {
    return values[i * cols + j];
  }

  bool is_symmetric_payload() const {
    if (rows != cols) return false;
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = i + 1; j < cols; ++j)
        if (at(i, j) != at(j, i)) return false;
    return true;
  }
};

// Evaluates the kernel on every grid node. Symmetric grid + symmetric
// kernel fills the upper triangle and mirrors, so the payload is exactly
// symmetric.
inline SampleMatrix evaluate_matrix(const KernelSpec& kernel,
                                    const GridSample& grid) {
  if (!(grid.space_x == kernel.space_x) || !(grid.space_y == kernel.space_y))
    throw std::domain_error(
        "evaluate_matrix: grid spaces do not match the kernel's declared "
        "spaces");
  SampleMatrix m = SampleMatrix::zeros(grid.n(), grid.m());
  m.kernel_id = kernel.name();
  m.grid_kind = std::string(to_string(grid.kind));
  m.seed = grid.seed;
  m.symmetric = grid.kind == GridKind::kSymmetric && kernel.symmetric;
  if (m.symmetric) {
    for (std::size_t i = 0; i < m.rows; ++i) {
      for (std::size_t j = i; j < m.cols; ++j) {
        double v = kernel_eval(kernel, grid.xs[i], grid.ys[j]);
        m.at(i, j) = v;
        m.at(j, i) = v;
      }
    }
  } else {
    for (std::size_t i = 0; i < m.rows; ++i)
      for (std::size_t j = 0; j < m.cols; ++j)
        m.at(i, j) = kernel_eval(kernel, grid.xs[i], grid.ys[j]);
  }
  return m;
}

using ThreeVariableKernel = std::function<double(double, double, double)>;

// Random array in the exchangeable normal form: entries f3(xi_i, eta_j,
// lambda_ij) with all coordinates i.i.d. uniform on [0,1]. In the symmetric
// case eta duplicates xi and lambda is drawn once per unordered pair.
inline SampleMatrix aldous_sample(const ThreeVariableKernel& f3, std::size_t n,
                                  std::size_t m, std::uint64_t seed,
                                  bool symmetric,
                                  const std::string& label = "aldous-custom") {
  if (n < 1 || m < 1)
    throw std::invalid_argument("aldous_sample: n, m >= 1 required");
  if (symmetric && n != m)
    throw std::invalid_argument("aldous_sample: symmetric case needs n == m");
  rng::Stream xi_s(seed, "aldous.xi");
  rng::Stream eta_s(seed, "aldous.eta");
  rng::Stream lam_s(seed, "aldous.lambda");

  std::vector<double> xi(n), eta(m);
  for (std::size_t i = 0; i < n; ++i) xi[i] = xi_s.uniform(i);
  if (symmetric)
    eta = xi;
  else
    for (std::size_t j = 0; j < m; ++j) eta[j] = eta_s.uniform(j);

  SampleMatrix out = SampleMatrix::zeros(n, m);
  out.kernel_id = label;
  out.grid_kind = symmetric ? "symmetric" : "bernoulli";
  out.seed = seed;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      std::uint64_t slot = symmetric
                               ? std::min(i, j) * m + std::max(i, j)
                               : i * m + j;
      out.at(i, j) = f3(xi[i], eta[j], lam_s.uniform(slot));
    }
  }
  out.symmetric = symmetric && out.is_symmetric_payload();
  return out;
}

// Named three-variable kernels for the CLI and tests.
inline ThreeVariableKernel aldous_catalog(std::string_view name) {
  if (name == "lambda")
    return [](double, double, double l) { return l; };
  if (name == "xi")
    return [](double x, double, double) { return x; };
  if (name == "xi-plus-eta-mod1")
    return [](double x, double e, double) {
      double s = x + e;
      return s >= 1.0 ? s - 1.0 : s;
    };
  throw std::invalid_argument("unknown aldous kernel: " + std::string(name));
}

// Symmetric {1,2}-valued matrix with zero diagonal: off-diagonal entries are
// 1 with probability p, else 2. The value range makes every triple satisfy
// the triangle inequality, so the sample is a distance matrix.
inline SampleMatrix random_graph_matrix(double p, std::size_t n,
                                        std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("random_graph_matrix: p must be in (0,1)");
  if (n < 1) throw std::invalid_argument("random_graph_matrix: n >= 1");
  rng::Stream edges(seed, "graph.edge");
  SampleMatrix m = SampleMatrix::zeros(n, n);
  m.kernel_id = "random-graph";
  m.grid_kind = "symmetric";
  m.seed = seed;
  m.symmetric = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = edges.uniform(i * n + j) < p ? 1.0 : 2.0;
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  }
  return m;
}

}  // namespace matdist
