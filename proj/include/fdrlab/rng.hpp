/*
   Copyright 2026 The fdrlab Authors

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
#include <numbers>

namespace fdrlab::rng {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// Streams are addressed by (seed, stream): the seed fills the key and the
// stream id fills the high counter words, so any number of streams can be
// drawn from concurrently with no shared state. Output for a given
// (seed, stream) is identical regardless of how work is scheduled.
class Philox {
public:
  Philox(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0, 0, static_cast<std::uint32_t>(stream),
             static_cast<std::uint32_t>(stream >> 32)} {}

  std::uint32_t next_u32() {
    if (index_ == 4) {
      block_ = round10(ctr_, key_);
      bump_counter();
      index_ = 0;
    }
    return block_[index_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform on (0, 1): 53 random bits, offset so 0 is excluded.
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the spare value is cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Gamma(shape, 1) by Marsaglia-Tsang squeeze.
  double next_gamma(double shape) {
    if (shape < 1.0) {
      const double g = next_gamma(shape + 1.0);
      return g * std::pow(next_double(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = next_normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = next_double();
      if (u < 1.0 - 0.0331 * x * x * x * x) {
        return d * v;
      }
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
        return d * v;
      }
    }
  }

  double next_chi2(double df) { return 2.0 * next_gamma(0.5 * df); }

  // Exponential(1).
  double next_exponential() { return -std::log(next_double()); }

private:
  static std::uint64_t mulhilo(std::uint32_t a, std::uint32_t b) {
    return static_cast<std::uint64_t>(a) * b;
  }

  static std::array<std::uint32_t, 4> round10(std::array<std::uint32_t, 4> c,
                                              std::array<std::uint32_t, 2> k) {
    constexpr std::uint32_t m0 = 0xD2511F53u;
    constexpr std::uint32_t m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u;
    constexpr std::uint32_t w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = mulhilo(m0, c[0]);
      const std::uint64_t p1 = mulhilo(m1, c[2]);
      const std::array<std::uint32_t, 4> next = {
          static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
          static_cast<std::uint32_t>(p0)};
      c = next;
      k[0] += w0;
      k[1] += w1;
    }
    return c;
  }

  void bump_counter() {
    if (++ctr_[0] == 0) {
      ++ctr_[1];
    }
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> block_{};
  int index_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace fdrlab::rng
