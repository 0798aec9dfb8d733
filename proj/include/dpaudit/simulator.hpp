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

// Violation simulation: how many pairs of L2-clipped latent vectors sit
// further apart in L1 than the claimed 2C sensitivity, swept over dimension.

#ifndef DPAUDIT_SIMULATOR_HPP_
#define DPAUDIT_SIMULATOR_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dpaudit/format.hpp"
#include "dpaudit/parallel.hpp"
#include "dpaudit/rng.hpp"
#include "dpaudit/sampling.hpp"
#include "dpaudit/sensitivity.hpp"
#include "dpaudit/vector.hpp"

namespace dpaudit {

enum class PairMode { kAllPairs, kSampledPairs };

inline std::vector<std::size_t> DefaultSimulationDims() {
  return {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
}

struct SimulationConfig {
  std::vector<std::size_t> dims = DefaultSimulationDims();
  std::size_t num_vectors = 10000;
  double clip_constant = 1.0;
  SamplerKind sampler = SamplerKind::kUniformPerDim;
  PairMode pair_mode = PairMode::kAllPairs;
  // Number of distinct pairs drawn in kSampledPairs mode.
  std::uint64_t sampled_pairs = 0;
  SigmaConvention sigma_convention = SigmaConvention::kVariance;
  std::uint64_t seed = 0;
  // Caps worker threads; never changes results.
  std::size_t threads = 1;

  void Validate() const {
    if (dims.empty()) throw std::invalid_argument("dims must be non-empty");
    for (std::size_t d : dims) {
      if (d < 1) throw std::invalid_argument("every dim must be >= 1");
    }
    if (num_vectors < 2) {
      throw std::invalid_argument("num_vectors must be >= 2");
    }
    internal::RequirePositive(clip_constant, "clip constant");
    if (pair_mode == PairMode::kSampledPairs && sampled_pairs < 1) {
      throw std::invalid_argument("sampled pair count must be >= 1");
    }
  }
};

struct SimulationRecord {
  std::size_t dim = 0;
  SamplerKind sampler = SamplerKind::kUniformPerDim;
  std::size_t num_vectors = 0;
  std::uint64_t pairs_checked = 0;
  std::uint64_t violations = 0;
  double violation_fraction = 0.0;
  double clip_constant = 0.0;
  std::uint64_t seed = 0;
  double claimed_bound = 0.0;
  // Requested sampled-pair count was larger than the number of distinct pairs
  // and was clamped to all pairs.
  bool pair_count_clamped = false;
  // Lexicographically first violating pair (vector indices), if any.
  std::optional<std::pair<std::size_t, std::size_t>> first_violation;
};

struct SimulationResult {
  std::vector<SimulationRecord> records;
};

inline std::uint64_t DistinctPairCount(std::size_t m) {
  return static_cast<std::uint64_t>(m) * (m - 1) / 2;
}

namespace internal {

// Maps a linear index in [0, m(m-1)/2) to the pair (i, j), i < j, in
// row-major order of the strict upper triangle.
inline std::pair<std::size_t, std::size_t> PairFromIndex(std::uint64_t k,
                                                         std::size_t m) {
  // Row i starts at S(i) = i*m - i*(i+1)/2.
  auto row_start = [m](std::uint64_t i) { return i * m - i * (i + 1) / 2; };
  double mm = static_cast<double>(m);
  double guess = std::floor(
      (2.0 * mm - 1.0 -
       std::sqrt((2.0 * mm - 1.0) * (2.0 * mm - 1.0) - 8.0 * double(k))) /
      2.0);
  std::uint64_t i = guess < 0.0 ? 0 : static_cast<std::uint64_t>(guess);
  if (i > m - 2) i = m - 2;
  while (i > 0 && row_start(i) > k) --i;
  while (i + 1 <= m - 2 && row_start(i + 1) <= k) ++i;
  std::uint64_t j = k - row_start(i) + i + 1;
  return {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
}

// `count` distinct pair indices by Floyd's algorithm, sorted.
inline std::vector<std::uint64_t> SampleDistinctPairIndices(
    std::uint64_t total, std::uint64_t count, SeededRng& rng) {
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(count * 2);
  for (std::uint64_t j = total - count; j < total; ++j) {
    std::uint64_t t = rng.UniformIndex(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

// L1 distance exceeds `threshold`; stops early once the partial sum does.
// Partial sums of non-negative terms never decrease, so this agrees with
// comparing the full L1Distance.
inline bool L1Exceeds(std::span<const double> a, std::span<const double> b,
                      double threshold) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += std::abs(a[i] - b[i]);
    if (sum > threshold) return true;
  }
  return false;
}

struct ScanTally {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::optional<std::pair<std::size_t, std::size_t>> first;

  void Merge(const ScanTally& other) {
    checked += other.checked;
    violations += other.violations;
    if (other.first && (!first || *other.first < *first)) first = other.first;
  }
};

}  // namespace internal

// Runs one (dim, sampler) cell: sample num_vectors vectors from `seed`, L2 clip
// each at C in place, then count pairs whose L1 distance exceeds 2C.
inline SimulationRecord SimulateDimension(const SimulationConfig& config,
                                          std::size_t dim) {
  const std::size_t m = config.num_vectors;
  const double bound = ClaimedSensitivity(config.clip_constant);
  const double threshold = bound + kViolationSlack;
  const ClipSpec clip{NormKind::kL2, config.clip_constant};

  LatentSet set = SampleLatentSet(config.sampler, dim, m, config.clip_constant,
                                  config.seed, config.sigma_convention);
  std::vector<double> scratch(dim);
  for (std::size_t k = 0; k < m; ++k) {
    ClipInto(set.row(k), clip, scratch);
    std::copy(scratch.begin(), scratch.end(), set.row(k).begin());
  }

  SimulationRecord record;
  record.dim = dim;
  record.sampler = config.sampler;
  record.num_vectors = m;
  record.clip_constant = config.clip_constant;
  record.seed = config.seed;
  record.claimed_bound = bound;

  const std::uint64_t total = DistinctPairCount(m);
  bool all_pairs = config.pair_mode == PairMode::kAllPairs;
  if (!all_pairs && config.sampled_pairs >= total) {
    record.pair_count_clamped = config.sampled_pairs > total;
    all_pairs = true;
  }

  std::size_t workers = std::max<std::size_t>(config.threads, 1);
  std::vector<internal::ScanTally> tallies(workers);
  if (all_pairs) {
    RunWorkers(workers, [&](std::size_t w, std::size_t n_workers) {
      internal::ScanTally tally;
      for (std::size_t i = w; i + 1 < m; i += n_workers) {
        auto ri = set.row(i);
        for (std::size_t j = i + 1; j < m; ++j) {
          ++tally.checked;
          if (internal::L1Exceeds(ri, set.row(j), threshold)) {
            ++tally.violations;
            if (!tally.first || std::pair(i, j) < *tally.first) {
              tally.first = std::pair(i, j);
            }
          }
        }
      }
      tallies[w] = tally;
    });
  } else {
    // The pair sample depends only on the seed, never on the worker count.
    SeededRng pair_rng = SeededRng::Stream(~config.seed, dim);
    std::vector<std::uint64_t> picks = internal::SampleDistinctPairIndices(
        total, config.sampled_pairs, pair_rng);
    RunWorkers(workers, [&](std::size_t w, std::size_t n_workers) {
      internal::ScanTally tally;
      for (std::size_t k = w; k < picks.size(); k += n_workers) {
        auto [i, j] = internal::PairFromIndex(picks[k], m);
        ++tally.checked;
        if (internal::L1Exceeds(set.row(i), set.row(j), threshold)) {
          ++tally.violations;
          if (!tally.first || std::pair(i, j) < *tally.first) {
            tally.first = std::pair(i, j);
          }
        }
      }
      tallies[w] = tally;
    });
  }

  internal::ScanTally merged;
  for (const auto& t : tallies) merged.Merge(t);
  record.pairs_checked = merged.checked;
  record.violations = merged.violations;
  record.violation_fraction = static_cast<double>(merged.violations) /
                              static_cast<double>(merged.checked);
  record.first_violation = merged.first;
  return record;
}

inline SimulationResult RunViolationSimulation(const SimulationConfig& config) {
  config.Validate();
  SimulationResult result;
  for (std::size_t dim : config.dims) {
    result.records.push_back(SimulateDimension(config, dim));
  }
  return result;
}

inline constexpr const char* kSimulationCsvHeader =
    "dim,sampler,num_vectors,pairs_checked,violations,violation_fraction,"
    "clip_constant,seed";

inline void WriteSimulationCsvHeader(std::ostream& out) {
  out << kSimulationCsvHeader << '\n';
}

inline void WriteSimulationCsvRows(const SimulationResult& result,
                                   std::ostream& out) {
  for (const auto& r : result.records) {
    out << r.dim << ',' << SamplerName(r.sampler) << ',' << r.num_vectors
        << ',' << r.pairs_checked << ',' << r.violations << ','
        << FormatDouble(r.violation_fraction) << ','
        << FormatDouble(r.clip_constant) << ',' << r.seed << '\n';
  }
}

inline void WriteSimulationCsv(const SimulationResult& result,
                               std::ostream& out) {
  WriteSimulationCsvHeader(out);
  WriteSimulationCsvRows(result, out);
}

}  // namespace dpaudit

#endif  // DPAUDIT_SIMULATOR_HPP_
