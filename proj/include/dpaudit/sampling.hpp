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

// Synthetic stand-ins for unclipped encoder outputs.

#ifndef DPAUDIT_SAMPLING_HPP_
#define DPAUDIT_SAMPLING_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dpaudit/rng.hpp"
#include "dpaudit/vector.hpp"

namespace dpaudit {

enum class SamplerKind { kUniformPerDim, kGaussianZeroCentered };

// How the Gaussian sampler reads its spread parameter 0.1 * C.
// kVariance (default): sigma^2 = 0.1 * C. kStddev: sigma = 0.1 * C.
enum class SigmaConvention { kVariance, kStddev };

inline std::string_view SamplerName(SamplerKind kind) {
  return kind == SamplerKind::kUniformPerDim ? "uniform" : "gaussian";
}

inline SamplerKind ParseSamplerKind(std::string_view name) {
  if (name == "uniform") return SamplerKind::kUniformPerDim;
  if (name == "gaussian") return SamplerKind::kGaussianZeroCentered;
  throw std::invalid_argument("unknown sampler: " + std::string(name));
}

inline double GaussianSigma(double clip_constant, SigmaConvention convention) {
  return convention == SigmaConvention::kVariance
             ? std::sqrt(0.1 * clip_constant)
             : 0.1 * clip_constant;
}

namespace internal {

inline void CheckSamplerArgs(std::size_t n, std::size_t count, double c) {
  if (n < 1) throw std::invalid_argument("sampler: dimension must be >= 1");
  if (count < 1) throw std::invalid_argument("sampler: count must be >= 1");
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("sampler: clip constant must be positive");
  }
}

// Uniform on the open interval (-c, c).
inline double UniformCoordinate(double c, SeededRng& rng) {
  for (;;) {
    double x = -c + 2.0 * c * rng.UniformOpen01();
    if (x > -c && x < c) return x;
  }
}

inline void FillLatent(SamplerKind kind, double c, double sigma,
                       SeededRng& rng, std::vector<double>& out) {
  if (kind == SamplerKind::kUniformPerDim) {
    for (double& x : out) x = UniformCoordinate(c, rng);
  } else {
    for (double& x : out) x = sigma * rng.StandardNormal();
  }
}

}  // namespace internal

// `count` vectors with coordinates i.i.d. uniform on (-C, C), drawn in order
// from one generator.
inline std::vector<LatentVector> SampleUniformLatents(std::size_t n,
                                                      std::size_t count,
                                                      double clip_constant,
                                                      SeededRng& rng) {
  internal::CheckSamplerArgs(n, count, clip_constant);
  std::vector<LatentVector> out;
  out.reserve(count);
  std::vector<double> buf(n);
  for (std::size_t k = 0; k < count; ++k) {
    internal::FillLatent(SamplerKind::kUniformPerDim, clip_constant, 0.0, rng,
                         buf);
    out.emplace_back(buf);
  }
  return out;
}

// `count` vectors with coordinates i.i.d. N(0, sigma^2), sigma per
// `convention`.
inline std::vector<LatentVector> SampleGaussianLatents(
    std::size_t n, std::size_t count, double clip_constant, SeededRng& rng,
    SigmaConvention convention = SigmaConvention::kVariance) {
  internal::CheckSamplerArgs(n, count, clip_constant);
  double sigma = GaussianSigma(clip_constant, convention);
  std::vector<LatentVector> out;
  out.reserve(count);
  std::vector<double> buf(n);
  for (std::size_t k = 0; k < count; ++k) {
    internal::FillLatent(SamplerKind::kGaussianZeroCentered, clip_constant,
                         sigma, rng, buf);
    out.emplace_back(buf);
  }
  return out;
}

// Dense row-major block of `count` latent vectors, vector k drawn from
// SeededRng::Stream(seed, k). Any prefix of the set is the set for a smaller
// count, and coordinate prefixes are shared across dimensions.
struct LatentSet {
  std::size_t dim = 0;
  std::size_t count = 0;
  std::vector<double> data;

  std::span<const double> row(std::size_t k) const {
    return {data.data() + k * dim, dim};
  }
  std::span<double> row(std::size_t k) { return {data.data() + k * dim, dim}; }
  LatentVector vector(std::size_t k) const {
    auto r = row(k);
    return LatentVector(std::vector<double>(r.begin(), r.end()));
  }
};

inline LatentSet SampleLatentSet(
    SamplerKind kind, std::size_t n, std::size_t count, double clip_constant,
    std::uint64_t seed,
    SigmaConvention convention = SigmaConvention::kVariance) {
  internal::CheckSamplerArgs(n, count, clip_constant);
  double sigma = GaussianSigma(clip_constant, convention);
  LatentSet set{n, count, std::vector<double>(n * count)};
  std::vector<double> buf(n);
  for (std::size_t k = 0; k < count; ++k) {
    SeededRng rng = SeededRng::Stream(seed, k);
    internal::FillLatent(kind, clip_constant, sigma, rng, buf);
    std::copy(buf.begin(), buf.end(), set.row(k).begin());
  }
  return set;
}

}  // namespace dpaudit

#endif  // DPAUDIT_SAMPLING_HPP_
