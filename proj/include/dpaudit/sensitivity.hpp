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

// L1 sensitivity of the clipping function: the refuted 2C claim, the true
// 2C*sqrt(n) for L2 clipping, witness pairs, and empirical estimators.

#ifndef DPAUDIT_SENSITIVITY_HPP_
#define DPAUDIT_SENSITIVITY_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dpaudit/parallel.hpp"
#include "dpaudit/rng.hpp"
#include "dpaudit/sampling.hpp"
#include "dpaudit/vector.hpp"

namespace dpaudit {

inline constexpr const char* kClaimedSensitivityLabel = "claimed (refuted)";

// Absolute slack used by every "distance exceeds bound" decision.
inline constexpr double kViolationSlack = 1e-12;

inline bool ExceedsBound(double distance, double bound) {
  return distance > bound + kViolationSlack;
}

namespace internal {
inline void RequirePositive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) +
                                " must be positive and finite");
  }
}
inline void RequireDim(std::size_t n) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
}
}  // namespace internal

// 2C: the L1 diameter claimed for the L2 ball of radius C. False for n >= 2.
inline double ClaimedSensitivity(double clip_constant) {
  internal::RequirePositive(clip_constant, "clip constant");
  return 2.0 * clip_constant;
}

// 2C*sqrt(n): the actual L1 diameter of the L2 ball of radius C in n dims.
inline double TrueSensitivityL2Clip(double clip_constant, std::size_t n) {
  internal::RequirePositive(clip_constant, "clip constant");
  internal::RequireDim(n);
  return 2.0 * clip_constant * std::sqrt(static_cast<double>(n));
}

// L1 diameter of the L1 ball of radius C.
inline double SensitivityL1Clip(double clip_constant) {
  internal::RequirePositive(clip_constant, "clip constant");
  return 2.0 * clip_constant;
}

// Analytic L1 sensitivity of clip(., spec) in n dimensions.
inline double AnalyticSensitivity(const ClipSpec& spec, std::size_t n) {
  return spec.norm_kind == NormKind::kL2
             ? TrueSensitivityL2Clip(spec.clip_constant, n)
             : SensitivityL1Clip(spec.clip_constant);
}

using VectorPair = std::pair<LatentVector, LatentVector>;

// Antipodal hypercube corners -C/sqrt(n)*1 and +C/sqrt(n)*1. The coordinate
// is rounded down if needed so both stay fixed points of L2 clipping at C.
inline VectorPair ExtremalPair(double clip_constant, std::size_t n) {
  internal::RequirePositive(clip_constant, "clip constant");
  internal::RequireDim(n);
  double coord = clip_constant / std::sqrt(static_cast<double>(n));
  while (L2Norm(LatentVector::Filled(n, coord)) > clip_constant) {
    coord = std::nextafter(coord, 0.0);
  }
  return {LatentVector::Filled(n, -coord), LatentVector::Filled(n, coord)};
}

// r_x = (-2C/3, -2C/3), r_y = (2C/3, 2C/3). Both lie inside the L2 ball of
// radius C (norm 2*sqrt(2)/3 * C) yet sit 8C/3 apart in L1.
inline VectorPair CounterexamplePair(double clip_constant) {
  internal::RequirePositive(clip_constant, "clip constant");
  double c = 2.0 * clip_constant / 3.0;
  return {LatentVector{-c, -c}, LatentVector{c, c}};
}

// Realized privacy level of a Laplace mechanism calibrated to
// `delta_f_claimed` when the function's sensitivity is `delta_f_true`.
inline double EffectiveEpsilon(double epsilon_claimed, double delta_f_claimed,
                               double delta_f_true) {
  internal::RequirePositive(epsilon_claimed, "epsilon");
  internal::RequirePositive(delta_f_claimed, "claimed sensitivity");
  internal::RequirePositive(delta_f_true, "true sensitivity");
  return epsilon_claimed * delta_f_true / delta_f_claimed;
}

struct SensitivityRatioRow {
  std::size_t dim = 0;
  double claimed = 0.0;
  double true_analytic = 0.0;
  double ratio = 0.0;
  double effective_epsilon = 0.0;
};

inline std::vector<std::size_t> DefaultRatioDims() {
  return {32, 64, 128, 256, 512, 1024};
}

// Claimed vs true sensitivity of L2 clipping per dimension.
inline std::vector<SensitivityRatioRow> SensitivityRatioTable(
    const std::vector<std::size_t>& dims, double clip_constant,
    double epsilon) {
  std::vector<SensitivityRatioRow> rows;
  for (std::size_t n : dims) {
    SensitivityRatioRow row;
    row.dim = n;
    row.claimed = ClaimedSensitivity(clip_constant);
    row.true_analytic = TrueSensitivityL2Clip(clip_constant, n);
    row.ratio = row.true_analytic / row.claimed;
    row.effective_epsilon =
        EffectiveEpsilon(epsilon, row.claimed, row.true_analytic);
    rows.push_back(row);
  }
  return rows;
}

struct SensitivityReport {
  std::size_t dim = 0;
  ClipSpec clip;
  double claimed = 0.0;
  double true_analytic = 0.0;
  // Unset unless an empirical scan ran.
  std::optional<double> empirical_max;
  VectorPair witness_pair{LatentVector{0.0}, LatentVector{0.0}};
  std::size_t samples_used = 0;
  std::optional<SamplerKind> sampler;
  std::optional<std::uint64_t> seed;
};

// Analytic report; the witness is the extremal pair (L2) or the antipodal
// cross-polytope vertices (L1).
inline SensitivityReport AnalyticSensitivityReport(const ClipSpec& spec,
                                                   std::size_t n) {
  spec.Validate();
  internal::RequireDim(n);
  SensitivityReport report;
  report.dim = n;
  report.clip = spec;
  report.claimed = ClaimedSensitivity(spec.clip_constant);
  report.true_analytic = AnalyticSensitivity(spec, n);
  if (spec.norm_kind == NormKind::kL2) {
    report.witness_pair = ExtremalPair(spec.clip_constant, n);
  } else {
    std::vector<double> a(n, 0.0), b(n, 0.0);
    a[0] = -spec.clip_constant;
    b[0] = spec.clip_constant;
    report.witness_pair = {LatentVector(a), LatentVector(b)};
  }
  return report;
}

struct PairMax {
  double distance = -1.0;
  std::size_t i = 0;
  std::size_t j = 0;

  // Larger distance wins; ties go to the lexicographically smaller pair.
  void Offer(double d, std::size_t a, std::size_t b) {
    if (d > distance ||
        (d == distance && (a < i || (a == i && b < j)))) {
      distance = d;
      i = a;
      j = b;
    }
  }
};

// Maximum pairwise L1 distance among the rows of `clipped`. Rows are dealt
// to workers round-robin; the reduction is order independent.
inline PairMax MaxPairwiseL1(const LatentSet& clipped, std::size_t threads) {
  std::vector<PairMax> partial(std::max<std::size_t>(threads, 1));
  RunWorkers(partial.size(), [&](std::size_t w, std::size_t workers) {
    PairMax local;
    for (std::size_t a = w; a < clipped.count; a += workers) {
      auto ra = clipped.row(a);
      for (std::size_t b = a + 1; b < clipped.count; ++b) {
        local.Offer(L1Distance(ra, clipped.row(b)), a, b);
      }
    }
    partial[w] = local;
  });
  PairMax best;
  for (const PairMax& p : partial) {
    if (p.distance >= 0.0) best.Offer(p.distance, p.i, p.j);
  }
  return best;
}

// Empirical sensitivity over an explicit set of unclipped vectors.
inline SensitivityReport EmpiricalSensitivityOf(const ClipSpec& spec,
                                                const LatentSet& vectors,
                                                std::size_t threads = 1) {
  spec.Validate();
  if (vectors.count < 2) {
    throw std::invalid_argument("empirical sensitivity needs >= 2 vectors");
  }
  LatentSet clipped = vectors;
  for (std::size_t k = 0; k < clipped.count; ++k) {
    ClipInto(vectors.row(k), spec, clipped.row(k));
  }
  PairMax best = MaxPairwiseL1(clipped, threads);

  SensitivityReport report = AnalyticSensitivityReport(spec, vectors.dim);
  report.empirical_max = best.distance;
  report.witness_pair = {clipped.vector(best.i), clipped.vector(best.j)};
  report.samples_used = vectors.count;
  if (best.distance > report.true_analytic + 1e-9) {
    throw std::logic_error(
        "empirical sensitivity exceeds the analytic bound");
  }
  return report;
}

inline SensitivityReport EmpiricalSensitivity(
    const ClipSpec& spec, std::size_t n, SamplerKind sampler,
    std::size_t num_vectors, std::uint64_t seed, std::size_t threads = 1,
    SigmaConvention convention = SigmaConvention::kVariance) {
  if (num_vectors < 2) {
    throw std::invalid_argument("empirical sensitivity needs >= 2 vectors");
  }
  spec.Validate();
  LatentSet set = SampleLatentSet(sampler, n, num_vectors, spec.clip_constant,
                                  seed, convention);
  SensitivityReport report = EmpiricalSensitivityOf(spec, set, threads);
  report.sampler = sampler;
  report.seed = seed;
  return report;
}

inline constexpr std::size_t kOracleMaxDim = 16;
inline constexpr std::size_t kOracleMinTrials = 10000;

namespace internal {

inline void RandomSpherePoint(double radius, SeededRng& rng,
                              std::vector<double>& out) {
  double norm = 0.0;
  do {
    for (double& x : out) x = rng.StandardNormal();
    norm = L2Norm(out);
  } while (norm == 0.0);
  for (double& x : out) x *= radius / norm;
}

inline void Renormalize(std::vector<double>& v, double radius) {
  double norm = L2Norm(v);
  for (double& x : v) x *= radius / norm;
}

}  // namespace internal

// Independent numerical estimate of max ||x - y||_1 over x, y on the L2
// sphere of radius C. Random search over `trials` pairs, then the best pair
// is polished by ascent over Givens rotations in every coordinate plane of
// either point, halving the angle whenever a full sweep makes no progress.
inline double BruteForceMaxL1OnSphere(double clip_constant, std::size_t n,
                                      std::size_t trials, std::uint64_t seed) {
  internal::RequirePositive(clip_constant, "clip constant");
  if (n < 1 || n > kOracleMaxDim) {
    throw std::invalid_argument("oracle dimension must be in [1, 16]");
  }
  if (trials < kOracleMinTrials) {
    throw std::invalid_argument("oracle needs at least 10000 trials");
  }
  SeededRng rng(seed);
  std::vector<double> x(n), y(n), best_x(n), best_y(n);
  double best = -1.0;
  for (std::size_t t = 0; t < trials; ++t) {
    internal::RandomSpherePoint(clip_constant, rng, x);
    internal::RandomSpherePoint(clip_constant, rng, y);
    double d = L1Distance(x, y);
    if (d > best) {
      best = d;
      best_x = x;
      best_y = y;
    }
  }
  if (n == 1) return best;

  std::vector<double> trial(n);
  for (double angle = 0.5; angle > 1e-13; angle *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int which = 0; which < 2; ++which) {
        std::vector<double>& moving = which == 0 ? best_x : best_y;
        const std::vector<double>& fixed = which == 0 ? best_y : best_x;
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = i + 1; j < n; ++j) {
            for (double a : {angle, -angle}) {
              trial = moving;
              double c = std::cos(a), s = std::sin(a);
              trial[i] = c * moving[i] - s * moving[j];
              trial[j] = s * moving[i] + c * moving[j];
              internal::Renormalize(trial, clip_constant);
              double d = L1Distance(trial, fixed);
              // Ignore gains at the level of renormalization round-off.
              if (d > best * (1.0 + 1e-15)) {
                best = d;
                moving = trial;
                improved = true;
              }
            }
          }
        }
      }
    }
  }
  return best;
}

}  // namespace dpaudit

#endif  // DPAUDIT_SENSITIVITY_HPP_
