#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "matdist/spaces.hpp"

namespace matdist {

enum class KernelId {
  kAddMod1,
  kIntervalEuclid,
  kCircleMetric,
  kSphereGeodesic,
  kHalflineCauchyEuclid,
  kProjectX,
  kCustomTabulated,
};

enum class Integrability { kBounded, kL2, kL1Only };

inline std::string_view to_string(KernelId id) {
  switch (id) {
    case KernelId::kAddMod1: return "add-mod1";
    case KernelId::kIntervalEuclid: return "interval-euclid";
    case KernelId::kCircleMetric: return "circle-metric";
    case KernelId::kSphereGeodesic: return "sphere-geodesic";
    case KernelId::kHalflineCauchyEuclid: return "halfline-cauchy-euclid";
    case KernelId::kProjectX: return "project-x";
    case KernelId::kCustomTabulated: return "custom-tabulated";
  }
  throw std::logic_error("unknown KernelId");
}

inline std::string_view to_string(Integrability i) {
  switch (i) {
    case Integrability::kBounded: return "bounded";
    case Integrability::kL2: return "L2";
    case Integrability::kL1Only: return "L1-only";
  }
  throw std::logic_error("unknown Integrability");
}

// Values of a user-supplied kernel tabulated on a regular grid over
// [0,1]^2, evaluated by bilinear interpolation.
struct TabulatedKernel {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major

  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

  double interpolate(double x, double y) const {
    auto cell = [](double t, std::size_t n, std::size_t& lo, double& frac) {
      double s = t * static_cast<double>(n - 1);
      lo = std::min(static_cast<std::size_t>(s), n - 2);
      frac = s - static_cast<double>(lo);
    };
    std::size_t i, j;
    double fx, fy;
    cell(x, rows, i, fx);
    cell(y, cols, j, fy);
    double v00 = at(i, j), v01 = at(i, j + 1);
    double v10 = at(i + 1, j), v11 = at(i + 1, j + 1);
    return (1 - fx) * ((1 - fy) * v00 + fy * v01) +
           fx * ((1 - fy) * v10 + fy * v11);
  }
};

// A measurable function of two variables with symmetry/metric/integrability
// metadata and its declared domain spaces.
struct KernelSpec {
  KernelId id = KernelId::kIntervalEuclid;
  bool symmetric = true;
  bool is_metric = true;
  Integrability integrability = Integrability::kBounded;
  MeasureSpaceSpec space_x = MeasureSpaceSpec::unit_interval();
  MeasureSpaceSpec space_y = MeasureSpaceSpec::unit_interval();
  std::shared_ptr<const TabulatedKernel> table;

  static KernelSpec builtin(KernelId id, double circumference = 1.0) {
    KernelSpec k;
    k.id = id;
    switch (id) {
      case KernelId::kAddMod1:
        k.symmetric = true;
        k.is_metric = false;
        break;
      case KernelId::kIntervalEuclid:
        break;
      case KernelId::kCircleMetric:
        k.space_x = k.space_y = MeasureSpaceSpec::circle(circumference);
        break;
      case KernelId::kSphereGeodesic:
        k.space_x = k.space_y = MeasureSpaceSpec::sphere2();
        break;
      case KernelId::kHalflineCauchyEuclid:
        k.space_x = k.space_y = MeasureSpaceSpec::half_line_cauchy();
        k.integrability = Integrability::kL1Only;
        break;
      case KernelId::kProjectX:
        k.symmetric = false;
        k.is_metric = false;
        break;
      case KernelId::kCustomTabulated:
        throw std::invalid_argument(
            "custom-tabulated kernels require a table; use "
            "KernelSpec::tabulated");
    }
    return k;
  }

  static KernelSpec builtin(std::string_view name, double circumference = 1.0) {
    for (KernelId id :
         {KernelId::kAddMod1, KernelId::kIntervalEuclid, KernelId::kCircleMetric,
          KernelId::kSphereGeodesic, KernelId::kHalflineCauchyEuclid,
          KernelId::kProjectX}) {
      if (name == to_string(id)) return builtin(id, circumference);
    }
    throw std::invalid_argument("unknown kernel id: " + std::string(name));
  }

  static KernelSpec tabulated(std::shared_ptr<const TabulatedKernel> table,
                              bool symmetric, bool is_metric) {
    if (!table || table->rows < 2 || table->cols < 2)
      throw std::invalid_argument("tabulated kernel needs a grid of >= 2x2");
    if (is_metric && !symmetric)
      throw std::invalid_argument("a metric kernel must be symmetric");
    KernelSpec k;
    k.id = KernelId::kCustomTabulated;
    k.symmetric = symmetric;
    k.is_metric = is_metric;
    k.table = std::move(table);
    return k;
  }

  std::string name() const { return std::string(to_string(id)); }
};

// f(x,y) for the declared kernel. Throws std::domain_error if a point lies
// outside the kernel's declared spaces.
inline double kernel_eval(const KernelSpec& kernel, const Point& x,
                          const Point& y) {
  if (!kernel.space_x.contains(x))
    throw std::domain_error("kernel_eval: x outside the declared space");
  if (!kernel.space_y.contains(y))
    throw std::domain_error("kernel_eval: y outside the declared space");
  switch (kernel.id) {
    case KernelId::kAddMod1: {
      double s = x.x() + y.x();
      return s >= 1.0 ? s - 1.0 : s;
    }
    case KernelId::kIntervalEuclid:
    case KernelId::kHalflineCauchyEuclid:
      return std::abs(x.x() - y.x());
    case KernelId::kCircleMetric: {
      double d = std::abs(x.x() - y.x());
      return std::min(d, kernel.space_x.circumference - d);
    }
    case KernelId::kSphereGeodesic: {
      const auto& a = x.coords;
      const auto& b = y.coords;
      double cx = a[1] * b[2] - a[2] * b[1];
      double cy = a[2] * b[0] - a[0] * b[2];
      double cz = a[0] * b[1] - a[1] * b[0];
      double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
      double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
      return std::atan2(cross, dot);
    }
    case KernelId::kProjectX:
      return x.x();
    case KernelId::kCustomTabulated:
      return kernel.table->interpolate(x.x(), y.x());
  }
  throw std::logic_error("unknown KernelId");
}

enum class PurityVerdict { kPure, kNotPure, kInconclusive };

inline std::string_view to_string(PurityVerdict v) {
  switch (v) {
    case PurityVerdict::kPure: return "pure";
    case PurityVerdict::kNotPure: return "not-pure";
    case PurityVerdict::kInconclusive: return "inconclusive";
  }
  throw std::logic_error("unknown PurityVerdict");
}

struct PurityReport {
  double min_row_separation = 0.0;  // closest pair among x-restrictions
  double min_col_separation = 0.0;  // closest pair among y-restrictions
  std::size_t n_probe = 0;
  std::size_t m_probe = 0;
  PurityVerdict verdict = PurityVerdict::kInconclusive;
  double threshold = 0.0;
};

namespace detail {

// Probe values with guaranteed spacing: an equal-mass lattice with one
// shared random offset, mapped through the space quantile. Spaces without a
// quantile map fall back to i.i.d. draws.
inline std::vector<Point> purity_probes(const MeasureSpaceSpec& space,
                                        std::size_t n,
                                        const rng::Stream& stream) {
  std::vector<Point> pts;
  pts.reserve(n);
  if (space.has_quantile()) {
    double offset = stream.uniform(0);
    for (std::size_t i = 0; i < n; ++i)
      pts.push_back(space.quantile((static_cast<double>(i) + offset) /
                                   static_cast<double>(n)));
  } else {
    for (std::size_t i = 0; i < n; ++i) pts.push_back(space.sample(stream, i));
  }
  return pts;
}

// Smallest Monte Carlo L1 distance between restrictions over all probe
// pairs. evals[a][t] holds f at (probe a, evaluation point t).
inline double min_pairwise_l1(const std::vector<std::vector<double>>& evals) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = evals.size();
  const std::size_t m = evals.empty() ? 0 : evals[0].size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      double sum = 0.0;
      for (std::size_t t = 0; t < m; ++t)
        sum += std::abs(evals[a][t] - evals[b][t]);
      best = std::min(best, sum / static_cast<double>(m));
    }
  }
  return best;
}

}  // namespace detail

// Empirical purity test: estimates, for each pair of fixed values of one
// variable, the L1 distance between the induced restriction functions, and
// compares the smallest distance against the threshold. The verdict is
// not-pure below the threshold, pure at or above twice the threshold, and
// inconclusive in between.
inline PurityReport purity_check(const KernelSpec& kernel, std::size_t n_probe,
                                 std::size_t m_probe, double threshold,
                                 std::uint64_t seed) {
  if (n_probe < 2) throw std::invalid_argument("purity_check: n_probe >= 2");
  if (m_probe < 1) throw std::invalid_argument("purity_check: m_probe >= 1");
  if (!(threshold > 0.0))
    throw std::invalid_argument("purity_check: threshold must be positive");

  rng::Stream probe_x(seed, "purity.probe.x");
  rng::Stream probe_y(seed, "purity.probe.y");
  rng::Stream eval_x(seed, "purity.eval.x");
  rng::Stream eval_y(seed, "purity.eval.y");

  auto xs = detail::purity_probes(kernel.space_x, n_probe, probe_x);
  auto ys = detail::purity_probes(kernel.space_y, n_probe, probe_y);

  // Row restrictions: x fixed, evaluated at Monte Carlo points in y.
  std::vector<std::vector<double>> row_evals(n_probe,
                                             std::vector<double>(m_probe));
  for (std::size_t t = 0; t < m_probe; ++t) {
    Point y = kernel.space_y.sample(eval_y, t);
    for (std::size_t a = 0; a < n_probe; ++a)
      row_evals[a][t] = kernel_eval(kernel, xs[a], y);
  }
  // Column restrictions: y fixed, evaluated at Monte Carlo points in x.
  std::vector<std::vector<double>> col_evals(n_probe,
                                             std::vector<double>(m_probe));
  for (std::size_t t = 0; t < m_probe; ++t) {
    Point x = kernel.space_x.sample(eval_x, t);
    for (std::size_t b = 0; b < n_probe; ++b)
      col_evals[b][t] = kernel_eval(kernel, x, ys[b]);
  }

  PurityReport report;
  report.min_row_separation = detail::min_pairwise_l1(row_evals);
  report.min_col_separation = detail::min_pairwise_l1(col_evals);
  report.n_probe = n_probe;
  report.m_probe = m_probe;
  report.threshold = threshold;

  double sep = std::min(report.min_row_separation, report.min_col_separation);
  if (sep < threshold)
    report.verdict = PurityVerdict::kNotPure;
  else if (sep >= 2.0 * threshold)
    report.verdict = PurityVerdict::kPure;
  else
    report.verdict = PurityVerdict::kInconclusive;
  return report;
}

}  // namespace matdist
