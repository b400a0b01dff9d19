#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

namespace matdist::rng {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ull;

// SplitMix64 finalizer: a 64->64 avalanche mix.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t hash_label(std::string_view label) {
  // FNV-1a over the label bytes.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

// Derives an independent child seed, e.g. one per replica.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  return mix64(mix64(seed + kGoldenGamma) ^ mix64(salt * kGoldenGamma + 1));
}

// Counter-based random stream keyed by (seed, label). Draw i is a pure
// function of the key and i, so draws can be generated in any order and
// extending a stream never changes its prefix.
class Stream {
 public:
  Stream(std::uint64_t seed, std::string_view label)
      : base_(mix64(mix64(seed) ^ hash_label(label))) {}

  std::uint64_t bits(std::uint64_t index) const {
    return mix64(base_ + (index + 1) * kGoldenGamma);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t index) const {
    return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes counter slots 2i and 2i+1.
  double normal(std::uint64_t index) const {
    double u1 = uniform(2 * index);
    double u2 = uniform(2 * index + 1);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Uniform integer in [0, bound): 64-bit modulo, bias negligible for the
  // index ranges used here.
  std::uint64_t below(std::uint64_t index, std::uint64_t bound) const {
    return bits(index) % bound;
  }

  // Fisher-Yates permutation of {0,...,n-1}; consumes counter slots
  // [offset, offset + n).
  std::vector<std::size_t> permutation(std::size_t n,
                                       std::uint64_t offset = 0) const {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    for (std::size_t i = n; i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(offset + i - 1, i));
      std::swap(p[i - 1], p[j]);
    }
    return p;
  }

 private:
  std::uint64_t base_;
};

}  // namespace matdist::rng
