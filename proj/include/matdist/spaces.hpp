#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "matdist/rng.hpp"

namespace matdist {

// A sample point. One-dimensional spaces use coords[0]; the sphere uses all
// three components.
struct Point {
  std::array<double, 3> coords{0.0, 0.0, 0.0};

  double x() const { return coords[0]; }

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point make_point(double x) { return Point{{x, 0.0, 0.0}}; }

enum class SpaceId {
  kUnitInterval,   // [0,1) with Lebesgue measure
  kCircleUniform,  // circle of given circumference, uniform
  kHalfLineCauchy, // [0,inf) with the half-Cauchy law |C|
  kSphere2Uniform, // unit 2-sphere, uniform area measure
};

inline std::string_view to_string(SpaceId id) {
  switch (id) {
    case SpaceId::kUnitInterval: return "unit-interval-lebesgue";
    case SpaceId::kCircleUniform: return "circle-uniform";
    case SpaceId::kHalfLineCauchy: return "half-line-cauchy";
    case SpaceId::kSphere2Uniform: return "sphere2-uniform";
  }
  throw std::logic_error("unknown SpaceId");
}

inline SpaceId space_id_from_string(std::string_view s) {
  if (s == "unit-interval-lebesgue") return SpaceId::kUnitInterval;
  if (s == "circle-uniform") return SpaceId::kCircleUniform;
  if (s == "half-line-cauchy") return SpaceId::kHalfLineCauchy;
  if (s == "sphere2-uniform") return SpaceId::kSphere2Uniform;
  throw std::invalid_argument("unknown space id: " + std::string(s));
}

// A standard probability space with a deterministic sampler.
struct MeasureSpaceSpec {
  SpaceId id = SpaceId::kUnitInterval;
  double circumference = 1.0;  // circle parameter, ignored elsewhere

  static MeasureSpaceSpec unit_interval() {
    return {SpaceId::kUnitInterval, 1.0};
  }
  static MeasureSpaceSpec circle(double circumference = 1.0) {
    if (!(circumference > 0.0))
      throw std::invalid_argument("circle circumference must be positive");
    return {SpaceId::kCircleUniform, circumference};
  }
  static MeasureSpaceSpec half_line_cauchy() {
    return {SpaceId::kHalfLineCauchy, 1.0};
  }
  static MeasureSpaceSpec sphere2() { return {SpaceId::kSphere2Uniform, 1.0}; }

  // Counter slots consumed per sampled point.
  std::size_t draws_per_point() const {
    return id == SpaceId::kSphere2Uniform ? 2 : 1;
  }

  bool has_quantile() const { return id != SpaceId::kSphere2Uniform; }

  // Inverse CDF for the one-dimensional spaces, p in [0,1).
  Point quantile(double p) const {
    switch (id) {
      case SpaceId::kUnitInterval:
        return make_point(p);
      case SpaceId::kCircleUniform:
        return make_point(p * circumference);
      case SpaceId::kHalfLineCauchy:
        // Half-Cauchy CDF is (2/pi) atan(x).
        return make_point(std::tan(std::numbers::pi * p / 2.0));
      case SpaceId::kSphere2Uniform:
        throw std::invalid_argument(
            "sphere2-uniform admits no one-dimensional quantile map");
    }
    throw std::logic_error("unknown SpaceId");
  }

  // Draw i of the stream; pure in (stream key, index).
  Point sample(const rng::Stream& stream, std::uint64_t index) const {
    switch (id) {
      case SpaceId::kUnitInterval:
      case SpaceId::kCircleUniform:
      case SpaceId::kHalfLineCauchy:
        return quantile(stream.uniform(index));
      case SpaceId::kSphere2Uniform: {
        double z = 2.0 * stream.uniform(2 * index) - 1.0;
        double phi = 2.0 * std::numbers::pi * stream.uniform(2 * index + 1);
        double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return Point{{s * std::cos(phi), s * std::sin(phi), z}};
      }
    }
    throw std::logic_error("unknown SpaceId");
  }

  bool contains(const Point& p) const {
    switch (id) {
      case SpaceId::kUnitInterval:
        return p.x() >= 0.0 && p.x() < 1.0;
      case SpaceId::kCircleUniform:
        return p.x() >= 0.0 && p.x() < circumference;
      case SpaceId::kHalfLineCauchy:
        return p.x() >= 0.0 && std::isfinite(p.x());
      case SpaceId::kSphere2Uniform: {
        double n2 = p.coords[0] * p.coords[0] + p.coords[1] * p.coords[1] +
                    p.coords[2] * p.coords[2];
        return std::abs(n2 - 1.0) <= 1e-9;
      }
    }
    return false;
  }

  friend bool operator==(const MeasureSpaceSpec&,
                         const MeasureSpaceSpec&) = default;
};

}  // namespace matdist
