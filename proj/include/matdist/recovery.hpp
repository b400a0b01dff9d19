#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "matdist/sample_matrix.hpp"
#include "matdist/stats.hpp"

namespace matdist {

inline double mod1(double v) {
  double r = std::fmod(v, 1.0);
  return r < 0.0 ? r + 1.0 : r;
}

// Distance on the unit circle R/Z.
inline double circle_distance_mod1(double a, double b) {
  double d = std::abs(mod1(a) - mod1(b));
  return std::min(d, 1.0 - d);
}

struct RecoveryResult {
  std::vector<double> x_hat;  // in [0,1), x_hat[0] == 0 by gauge convention
  std::vector<double> y_hat;  // in [0,1)
  double residual_max = 0.0;
  double gauge = 0.0;  // x_hat[0] before the gauge was fixed
};

// Exact algebraic inversion of an additive matrix M[i][j] = x_i + y_j
// (mod 1). The free rotation constant (x_i + c, y_j - c) is fixed by the
// convention x_hat[0] = 0; non-additive input shows up as a large residual,
// never as an error.
inline RecoveryResult recover_additive(const SampleMatrix& m) {
  if (m.rows < 1 || m.cols < 1)
    throw std::invalid_argument("recover_additive: empty matrix");
  RecoveryResult r;
  r.gauge = mod1(m.at(0, 0));
  r.x_hat.resize(m.rows);
  r.y_hat.resize(m.cols);
  r.x_hat[0] = 0.0;
  for (std::size_t i = 1; i < m.rows; ++i)
    r.x_hat[i] = mod1(m.at(i, 0) - m.at(0, 0));
  for (std::size_t j = 0; j < m.cols; ++j) r.y_hat[j] = mod1(m.at(0, j));
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      r.residual_max = std::max(
          r.residual_max,
          circle_distance_mod1(m.at(i, j), r.x_hat[i] + r.y_hat[j]));
  return r;
}

struct RecoveryValidation {
  double p_value_x = 1.0;
  double p_value_y = 1.0;
  double residual_max = 0.0;
  double alpha = 0.01;
  bool pass = false;
};

// Distributional check of a recovery: Kolmogorov-Smirnov uniformity of the
// recovered coordinates. The gauge rotation is immaterial because the
// uniform law on the circle is rotation invariant.
inline RecoveryValidation validate_recovery(const RecoveryResult& result,
                                            const MeasureSpaceSpec& expected,
                                            double alpha = 0.01) {
  if (expected.id != SpaceId::kUnitInterval)
    throw std::invalid_argument(
        "validate_recovery: only unit-interval-lebesgue is supported");
  RecoveryValidation v;
  v.alpha = alpha;
  v.residual_max = result.residual_max;
  v.p_value_x = stats::ks_uniform_pvalue(result.x_hat);
  v.p_value_y = stats::ks_uniform_pvalue(result.y_hat);
  v.pass = v.p_value_x >= alpha && v.p_value_y >= alpha;
  return v;
}

struct FolnerTrace {
  std::vector<std::size_t> window_sizes;
  std::vector<double> averages;
  std::string statistic_id;
};

// Ergodic averages of a bounded window statistic over the leading s x s
// blocks of a matrix, the finite stand-in for averages along a Folner
// sequence of index windows. Catalog:
//   entry-moment-<p>  mean of min(|t|, cap)^p over the block
//   entry-cos         mean of cos(2 pi t)
//   pattern-product   mean of h(M[i][j]) h(M[i+1][j]), h(t) = min(|t|, cap)
inline FolnerTrace folner_average(const SampleMatrix& m,
                                  std::string_view statistic_id,
                                  const std::vector<std::size_t>& window_sizes,
                                  double cap = 1.0) {
  if (window_sizes.empty())
    throw std::invalid_argument("folner_average: no window sizes");
  for (std::size_t i = 0; i < window_sizes.size(); ++i) {
    if (window_sizes[i] < 1 || window_sizes[i] > std::min(m.rows, m.cols))
      throw std::invalid_argument(
          "folner_average: window sizes must fit in the matrix");
    if (i > 0 && window_sizes[i] <= window_sizes[i - 1])
      throw std::invalid_argument(
          "folner_average: window sizes must be strictly increasing");
  }
  if (!(cap > 0.0))
    throw std::invalid_argument("folner_average: cap must be positive");

  double moment_p = 0.0;
  enum { kMoment, kCos, kPattern } which;
  constexpr std::string_view kMomentPrefix = "entry-moment-";
  if (statistic_id.substr(0, kMomentPrefix.size()) == kMomentPrefix) {
    which = kMoment;
    try {
      moment_p = std::stod(std::string(statistic_id.substr(kMomentPrefix.size())));
    } catch (const std::exception&) {
      throw std::invalid_argument("folner_average: bad moment order in " +
                                  std::string(statistic_id));
    }
    if (!(moment_p > 0.0))
      throw std::invalid_argument("folner_average: moment order must be > 0");
  } else if (statistic_id == "entry-cos") {
    which = kCos;
  } else if (statistic_id == "pattern-product") {
    which = kPattern;
  } else {
    throw std::invalid_argument("folner_average: unknown statistic: " +
                                std::string(statistic_id));
  }

  auto h = [cap](double t) { return std::min(std::abs(t), cap); };
  FolnerTrace trace;
  trace.statistic_id = statistic_id;
  for (std::size_t s : window_sizes) {
    double sum = 0.0;
    std::size_t count = 0;
    switch (which) {
      case kMoment:
        for (std::size_t i = 0; i < s; ++i)
          for (std::size_t j = 0; j < s; ++j)
            sum += std::pow(h(m.at(i, j)), moment_p);
        count = s * s;
        break;
      case kCos:
        for (std::size_t i = 0; i < s; ++i)
          for (std::size_t j = 0; j < s; ++j)
            sum += std::cos(2.0 * std::numbers::pi * m.at(i, j));
        count = s * s;
        break;
      case kPattern:
        if (s < 2)
          throw std::invalid_argument(
              "folner_average: pattern-product needs windows of size >= 2");
        for (std::size_t i = 0; i + 1 < s; ++i)
          for (std::size_t j = 0; j < s; ++j)
            sum += h(m.at(i, j)) * h(m.at(i + 1, j));
        count = (s - 1) * s;
        break;
    }
    trace.window_sizes.push_back(s);
    trace.averages.push_back(sum / static_cast<double>(count));
  }
  return trace;
}

}  // namespace matdist
