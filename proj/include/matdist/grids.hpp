#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "matdist/rng.hpp"
#include "matdist/spaces.hpp"

namespace matdist {

enum class GridKind { kBernoulli, kSymmetric, kLocallyFinite, kStationary };

inline std::string_view to_string(GridKind k) {
  switch (k) {
    case GridKind::kBernoulli: return "bernoulli";
    case GridKind::kSymmetric: return "symmetric";
    case GridKind::kLocallyFinite: return "locally-finite";
    case GridKind::kStationary: return "stationary";
  }
  throw std::logic_error("unknown GridKind");
}

inline GridKind grid_kind_from_string(std::string_view s) {
  if (s == "bernoulli") return GridKind::kBernoulli;
  if (s == "symmetric") return GridKind::kSymmetric;
  if (s == "locally-finite") return GridKind::kLocallyFinite;
  if (s == "stationary") return GridKind::kStationary;
  throw std::invalid_argument("unknown grid kind: " + std::string(s));
}

// A realized grid {x_n} x {y_m} with provenance. For symmetric grids ys is
// an identical copy of xs.
struct GridSample {
  std::vector<Point> xs;
  std::vector<Point> ys;
  GridKind kind = GridKind::kBernoulli;
  std::uint64_t seed = 0;
  MeasureSpaceSpec space_x;
  MeasureSpaceSpec space_y;

  std::size_t n() const { return xs.size(); }
  std::size_t m() const { return ys.size(); }
};

// Two independent i.i.d. coordinate sequences, from streams keyed by
// (seed, "x") and (seed, "y").
inline GridSample sample_bernoulli_grid(const MeasureSpaceSpec& space_x,
                                        const MeasureSpaceSpec& space_y,
                                        std::size_t n, std::size_t m,
                                        std::uint64_t seed) {
  if (n < 1 || m < 1)
    throw std::invalid_argument("bernoulli grid: n, m >= 1 required");
  GridSample g;
  g.kind = GridKind::kBernoulli;
  g.seed = seed;
  g.space_x = space_x;
  g.space_y = space_y;
  rng::Stream sx(seed, "grid.x"), sy(seed, "grid.y");
  g.xs.reserve(n);
  g.ys.reserve(m);
  for (std::size_t i = 0; i < n; ++i) g.xs.push_back(space_x.sample(sx, i));
  for (std::size_t j = 0; j < m; ++j) g.ys.push_back(space_y.sample(sy, j));
  return g;
}

// One i.i.d. sequence; ys duplicates xs.
inline GridSample sample_symmetric_grid(const MeasureSpaceSpec& space,
                                        std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("symmetric grid: n >= 1 required");
  GridSample g;
  g.kind = GridKind::kSymmetric;
  g.seed = seed;
  g.space_x = g.space_y = space;
  rng::Stream sx(seed, "grid.x");
  g.xs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) g.xs.push_back(space.sample(sx, i));
  g.ys = g.xs;
  return g;
}

namespace detail {

inline std::vector<Point> stratified_points(const MeasureSpaceSpec& space,
                                            std::size_t n,
                                            const rng::Stream& stream,
                                            std::optional<double> fixed_jitter) {
  if (!space.has_quantile())
    throw std::invalid_argument(
        "locally finite grids are unsupported on " +
        std::string(to_string(space.id)) +
        " (no canonical one-dimensional stratification)");
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = fixed_jitter ? *fixed_jitter : stream.uniform(i);
    pts.push_back(space.quantile((static_cast<double>(i) + u) /
                                 static_cast<double>(n)));
  }
  return pts;
}

// Gaussian AR(1) sequence mapped through Phi and the space quantile. The
// marginal law is the space's measure; rho controls serial correlation.
inline std::vector<Point> stationary_points(const MeasureSpaceSpec& space,
                                            std::size_t n, double rho,
                                            const rng::Stream& stream) {
  if (!space.has_quantile())
    throw std::invalid_argument(
        "stationary grids are unsupported on " +
        std::string(to_string(space.id)) + " (no quantile map)");
  std::vector<Point> pts;
  pts.reserve(n);
  double z = stream.normal(0);
  double scale = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) z = rho * z + scale * stream.normal(i);
    double u = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    // Phi(z) can round to 1; quantile expects [0,1).
    u = std::min(u, 0x1.fffffffffffffp-1);
    pts.push_back(space.quantile(u));
  }
  return pts;
}

}  // namespace detail

// Stratified draws: x_i = quantile((i + u_i)/n), one point per equal-mass
// stratum. fixed_jitter pins every u_i for tests.
inline GridSample sample_locally_finite_grid(
    const MeasureSpaceSpec& space_x, const MeasureSpaceSpec& space_y,
    std::size_t n, std::size_t m, std::uint64_t seed,
    std::optional<double> fixed_jitter = std::nullopt) {
  if (n < 1 || m < 1)
    throw std::invalid_argument("locally finite grid: n, m >= 1 required");
  GridSample g;
  g.kind = GridKind::kLocallyFinite;
  g.seed = seed;
  g.space_x = space_x;
  g.space_y = space_y;
  rng::Stream sx(seed, "grid.x"), sy(seed, "grid.y");
  g.xs = detail::stratified_points(space_x, n, sx, fixed_jitter);
  g.ys = detail::stratified_points(space_y, m, sy, fixed_jitter);
  return g;
}

// Stationary ergodic coordinate sequences (AR(1) on the quantile scale)
// with correlation rho, independent between the two variables.
inline GridSample sample_stationary_grid(const MeasureSpaceSpec& space_x,
                                         const MeasureSpaceSpec& space_y,
                                         std::size_t n, std::size_t m,
                                         double rho, std::uint64_t seed) {
  if (n < 1 || m < 1)
    throw std::invalid_argument("stationary grid: n, m >= 1 required");
  if (!(rho > -1.0 && rho < 1.0))
    throw std::invalid_argument("stationary grid: rho must be in (-1, 1)");
  GridSample g;
  g.kind = GridKind::kStationary;
  g.seed = seed;
  g.space_x = space_x;
  g.space_y = space_y;
  rng::Stream sx(seed, "grid.x"), sy(seed, "grid.y");
  g.xs = detail::stationary_points(space_x, n, rho, sx);
  g.ys = detail::stationary_points(space_y, m, rho, sy);
  return g;
}

// Grid request used where the kind is data, e.g. CLI flags and replica
// sampling.
struct GridRequest {
  GridKind kind = GridKind::kBernoulli;
  double rho = 0.0;                          // stationary only
  std::optional<double> fixed_jitter;        // locally-finite test hook

  static GridRequest bernoulli() { return {GridKind::kBernoulli, 0.0, {}}; }
  static GridRequest symmetric() { return {GridKind::kSymmetric, 0.0, {}}; }
  static GridRequest locally_finite() {
    return {GridKind::kLocallyFinite, 0.0, {}};
  }
  static GridRequest stationary(double rho) {
    return {GridKind::kStationary, rho, {}};
  }
};

inline GridSample sample_grid(const MeasureSpaceSpec& space_x,
                              const MeasureSpaceSpec& space_y, std::size_t n,
                              std::size_t m, const GridRequest& request,
                              std::uint64_t seed) {
  switch (request.kind) {
    case GridKind::kBernoulli:
      return sample_bernoulli_grid(space_x, space_y, n, m, seed);
    case GridKind::kSymmetric:
      if (!(space_x == space_y))
        throw std::invalid_argument(
            "symmetric grid requires identical x and y spaces");
      if (n != m)
        throw std::invalid_argument("symmetric grid requires n == m");
      return sample_symmetric_grid(space_x, n, seed);
    case GridKind::kLocallyFinite:
      return sample_locally_finite_grid(space_x, space_y, n, m, seed,
                                        request.fixed_jitter);
    case GridKind::kStationary:
      return sample_stationary_grid(space_x, space_y, n, m, request.rho, seed);
  }
  throw std::logic_error("unknown GridKind");
}

}  // namespace matdist
