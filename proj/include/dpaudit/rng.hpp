//
// Copyright 2026 The dpaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPAUDIT_RNG_HPP_
#define DPAUDIT_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace dpaudit {

// SplitMix64 finalizer. Used only to derive engine seeds.
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Reproducible random source built on std::mt19937_64, whose output sequence
// is fixed by the standard. Real-valued draws are derived from raw 64-bit
// words here rather than through <random> distributions, which are
// implementation-defined.
//
// Stream rule: stream k of master seed s is seeded with
// Mix64(Mix64(s) ^ Mix64(k + 1)). Stream 0 of a seed is distinct from
// SeededRng(s).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(Mix64(seed)) {}

  static SeededRng Stream(std::uint64_t master_seed, std::uint64_t index) {
    SeededRng rng(master_seed);
    rng.engine_.seed(Mix64(Mix64(master_seed) ^ Mix64(index + 1)));
    return rng;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return position_; }

  std::uint64_t NextU64() {
    ++position_;
    return engine_();
  }

  // Uniform on the open interval (0, 1): (k + 1/2) / 2^53 for a 53-bit k.
  double UniformOpen01() {
    return (static_cast<double>(NextU64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) by rejection; bound must be positive.
  std::uint64_t UniformIndex(std::uint64_t bound) {
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = NextU64();
    } while (x >= limit);
    return x % bound;
  }

  // Standard normal via the Marsaglia polar method. Keeps the spare draw.
  double StandardNormal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * UniformOpen01() - 1.0;
      v = 2.0 * UniformOpen01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dpaudit

#endif  // DPAUDIT_RNG_HPP_
