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

// Analytic DP audit of a Laplace mechanism on a pair of inputs. For outputs
// fx = f(x), fy = f(y) the density ratio p(M(x) = z) / p(M(y) = z) is at most
// exp(eps * ||fx - fy||_1 / Delta f) for every z, with equality far out along
// sign(fx - fy). The mechanism is eps-DP on the pair iff that exponent is at
// most eps, i.e. iff ||fx - fy||_1 <= Delta f.

#ifndef DPAUDIT_AUDITOR_HPP_
#define DPAUDIT_AUDITOR_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dpaudit/format.hpp"
#include "dpaudit/mechanisms.hpp"
#include "dpaudit/rng.hpp"
#include "dpaudit/sensitivity.hpp"
#include "dpaudit/vector.hpp"

namespace dpaudit {

// eps * ||fy - fx||_1 / delta_f: the smallest exponent bounding the density
// ratio of the two outputs over all z.
inline double RatioBoundExponent(const LatentVector& fx, const LatentVector& fy,
                                 double delta_f, double epsilon) {
  RequireSameDim(fx, fy, "RatioBoundExponent");
  internal::RequirePositive(delta_f, "delta f");
  internal::RequirePositive(epsilon, "epsilon");
  return epsilon * L1Distance(fy, fx) / delta_f;
}

struct AuditFinding {
  LatentVector x{0.0};
  LatentVector y{0.0};
  ScaleMode mode = ScaleMode::kClaimedAdept;
  double l1_distance_after_clip = 0.0;
  double claimed_sensitivity = 0.0;
  // l1_distance_after_clip / claimed_sensitivity; the realized exponent is
  // this factor times epsilon.
  double ratio_exponent_factor = 0.0;
  double epsilon = 0.0;
  bool violated = false;
  std::string verdict_note;
};

inline AuditFinding CheckDpBound(const LatentVector& x, const LatentVector& y,
                                 const MechanismSpec& spec) {
  spec.Validate();
  RequireSameDim(x, y, "CheckDpBound");
  spec.RequireInputDim(x.dim());

  AuditFinding finding;
  finding.x = x;
  finding.y = y;
  finding.mode = spec.scale_mode;
  finding.l1_distance_after_clip =
      L1Distance(Clip(x, spec.clip), Clip(y, spec.clip));
  finding.claimed_sensitivity = spec.claimed_sensitivity;
  finding.ratio_exponent_factor =
      finding.l1_distance_after_clip / spec.claimed_sensitivity;
  finding.epsilon = spec.epsilon;
  finding.violated =
      ExceedsBound(finding.l1_distance_after_clip, spec.claimed_sensitivity);

  std::string note =
      finding.violated
          ? "VIOLATION: density ratio reaches exp(" +
                FormatDouble(finding.ratio_exponent_factor) +
                " * epsilon) > exp(epsilon). "
          : std::string("bound holds for this pair. ");
  note += PrivacyStatus(spec.scale_mode);
  finding.verdict_note = std::move(note);
  return finding;
}

// Audits every pair under the mode's mechanism built for that pair's
// dimension.
inline std::vector<AuditFinding> AuditPairs(
    const std::vector<VectorPair>& pairs, ScaleMode mode, double clip_constant,
    double epsilon) {
  std::vector<AuditFinding> findings;
  findings.reserve(pairs.size());
  for (const auto& [x, y] : pairs) {
    RequireSameDim(x, y, "AuditPairs");
    MechanismSpec spec =
        MechanismSpec::ForMode(mode, clip_constant, epsilon, x.dim());
    findings.push_back(CheckDpBound(x, y, spec));
  }
  return findings;
}

// Far-field probe z = f(x) + t * sign(f(x) - f(y)) with
// t = 1e3 * max(b, ||f(x)||_inf). Every coordinate of z lies on the far side
// of f(x) from f(y), where the per-coordinate log ratio saturates at
// eps * |f(x)_i - f(y)_i| / Delta f.
inline LatentVector FarFieldProbe(const LatentVector& fx,
                                  const LatentVector& fy, double noise_scale) {
  double inf_norm = 0.0;
  for (double v : fx.components()) inf_norm = std::max(inf_norm, std::abs(v));
  double t = 1e3 * std::max(noise_scale, inf_norm);
  std::vector<double> z(fx.dim());
  for (std::size_t i = 0; i < fx.dim(); ++i) {
    double d = fx[i] - fy[i];
    double sign = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    z[i] = fx[i] + t * sign;
  }
  return LatentVector(std::move(z));
}

// Maximum of log p(M(x) = z) - log p(M(y) = z) over `probe_points` outputs z
// drawn from M(x) and M(y) alternately, plus the far-field probe when
// `include_far_field` is set.
inline double NumericRatioProbe(const LatentVector& x, const LatentVector& y,
                                const MechanismSpec& spec,
                                std::size_t probe_points, std::uint64_t seed,
                                bool include_far_field = true) {
  spec.Validate();
  RequireSameDim(x, y, "NumericRatioProbe");
  if (probe_points < 1) {
    throw std::invalid_argument("probe_points must be >= 1");
  }
  SeededRng rng(seed);
  auto log_ratio = [&](const LatentVector& z) {
    return MechanismLogDensity(spec, x, z) - MechanismLogDensity(spec, y, z);
  };
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < probe_points; ++k) {
    const LatentVector& source = k % 2 == 0 ? x : y;
    best = std::max(best, log_ratio(Privatize(source, spec, rng)));
  }
  if (include_far_field) {
    LatentVector fx = Clip(x, spec.clip);
    LatentVector fy = Clip(y, spec.clip);
    best = std::max(best, log_ratio(FarFieldProbe(fx, fy, spec.noise_scale)));
  }
  return best;
}

}  // namespace dpaudit

#endif  // DPAUDIT_AUDITOR_HPP_
