/*
   Copyright 2026 The percolab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace percolab {

// Counter-based generation (Salmon et al., SC 2011): every variate is a pure
// function of (seed, stream, trial, index), so trials can run on any worker
// in any order and still reproduce bit-identically.

namespace rng_detail {

constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85u;
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

}  // namespace rng_detail

/// Philox-4x32-10 block function.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 2> key,
                                               std::array<std::uint32_t, 4> ctr) {
  using namespace rng_detail;
  for (int round = 0; round < 10; ++round) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mul_hi_lo(kPhiloxM4x32A, ctr[0], lo0, hi0);
    mul_hi_lo(kPhiloxM4x32B, ctr[2], lo1, hi1);
    std::array<std::uint32_t, 4> next{hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    ctr = next;
    key[0] += kPhiloxW32A;
    key[1] += kPhiloxW32B;
  }
  return ctr;
}

// Stream tags keep unrelated draws in provably disjoint counter spaces.
enum : std::uint32_t {
  kStreamEdges = 0,      // per-edge uniforms of a bond configuration
  kStreamScratch = 1,    // sequential per-trial draws (points, counts, ...)
  kStreamTiles = 2,      // per-tile Bernoulli fields
  kStreamSites = 3,      // per-site Bernoulli fields (domination probe)
};

inline std::uint64_t counter_u64(std::uint64_t seed, std::uint32_t stream, std::uint64_t trial,
                                 std::uint64_t index) {
  std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed),
                                   static_cast<std::uint32_t>(seed >> 32)};
  std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(index),
                                   static_cast<std::uint32_t>(index >> 32),
                                   static_cast<std::uint32_t>(trial),
                                   static_cast<std::uint32_t>(trial >> 32) ^ stream};
  auto out = philox4x32(key, ctr);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

/// Uniform double in [0,1), 53 random bits.
inline double counter_unit(std::uint64_t seed, std::uint32_t stream, std::uint64_t trial,
                           std::uint64_t index) {
  return static_cast<double>(counter_u64(seed, stream, trial, index) >> 11) * 0x1.0p-53;
}

/// Uniform for edge `edge_id` of trial `trial`: computable without streaming
/// order, which is what makes the shared-uniform coupling cheap.
inline double edge_uniform(std::uint64_t seed, std::uint64_t trial, std::int64_t edge_id) {
  return counter_unit(seed, kStreamEdges, trial, static_cast<std::uint64_t>(edge_id));
}

/// Derive an independent sub-seed for a named purpose (event tags etc.).
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a, then one philox pass
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return counter_u64(master, 0xD5EEDu, h, h >> 7);
}

/// Sequential draw stream for variable-count sampling within one trial.
/// `substream` carves out a disjoint index block (32 bits of draws each), so
/// per-tile or per-block draws stay independent of draw order elsewhere.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint32_t stream, std::uint64_t trial,
                std::uint64_t substream = 0)
      : seed_(seed), stream_(stream), trial_(trial), index_(substream << 32) {}

  std::uint64_t next_u64() { return counter_u64(seed_, stream_, trial_, index_++); }
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double next_in(double lo, double hi) { return lo + next_unit() * (hi - lo); }

  /// Poisson count by inversion of exponential spacings; means above 30 are
  /// split additively so the running product never underflows.
  long next_poisson(double mean) {
    if (mean < 0) throw std::invalid_argument("poisson: negative mean");
    long total = 0;
    while (mean > 30.0) {
      total += knuth(30.0);
      mean -= 30.0;
    }
    return total + knuth(mean);
  }

  /// Poisson conditioned on being >= 1 (used for occupied-tile counts).
  long next_positive_poisson(double mean) {
    if (mean <= 0) throw std::invalid_argument("positive poisson: mean must be > 0");
    for (;;) {
      long n = next_poisson(mean);
      if (n > 0) return n;
    }
  }

 private:
  long knuth(double mean) {
    if (mean <= 0) return 0;
    double limit = std::exp(-mean);
    long k = 0;
    double prod = 1.0;
    do {
      ++k;
      prod *= next_unit();
    } while (prod > limit);
    return k - 1;
  }

  std::uint64_t seed_;
  std::uint32_t stream_;
  std::uint64_t trial_;
  std::uint64_t index_ = 0;
};

}  // namespace percolab
