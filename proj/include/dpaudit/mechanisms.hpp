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

#ifndef DPAUDIT_MECHANISMS_HPP_
#define DPAUDIT_MECHANISMS_HPP_

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dpaudit/rng.hpp"
#include "dpaudit/sensitivity.hpp"
#include "dpaudit/vector.hpp"

namespace dpaudit {

// Laplace density (1/2b) exp(-|mu - t| / b).
inline double LaplaceDensity(double t, double mu, double b) {
  if (!(b > 0.0)) throw std::invalid_argument("Laplace scale must be > 0");
  return std::exp(-std::abs(mu - t) / b) / (2.0 * b);
}

// Inverse CDF of Lap(mu, b) at u in (-1/2, 1/2).
inline double LaplaceInverseCdf(double mu, double b, double u) {
  double sign = u < 0.0 ? -1.0 : (u > 0.0 ? 1.0 : 0.0);
  return mu - b * sign * std::log1p(-2.0 * std::abs(u));
}

inline double SampleLaplace(double mu, double b, SeededRng& rng) {
  if (!(b > 0.0)) throw std::invalid_argument("Laplace scale must be > 0");
  return LaplaceInverseCdf(mu, b, rng.UniformOpen01() - 0.5);
}

enum class ScaleMode {
  // L2 clip, noise calibrated to the refuted 2C sensitivity. Not epsilon-DP
  // for n >= 2.
  kClaimedAdept,
  // L2 clip, noise calibrated to the true sensitivity 2C*sqrt(n).
  kCorrectedRescaled,
  // L1 clip, whose L1 sensitivity really is 2C.
  kCorrectedL1Clip,
};

inline std::string_view ScaleModeName(ScaleMode mode) {
  switch (mode) {
    case ScaleMode::kClaimedAdept:
      return "claimed-adept";
    case ScaleMode::kCorrectedRescaled:
      return "corrected-rescaled";
    case ScaleMode::kCorrectedL1Clip:
      return "corrected-l1clip";
  }
  return "unknown";
}

inline ScaleMode ParseScaleMode(std::string_view name) {
  if (name == "claimed-adept") return ScaleMode::kClaimedAdept;
  if (name == "corrected-rescaled") return ScaleMode::kCorrectedRescaled;
  if (name == "corrected-l1clip") return ScaleMode::kCorrectedL1Clip;
  throw std::invalid_argument("unknown mechanism mode: " + std::string(name));
}

// One-line privacy status attached to every report for a mode.
inline std::string_view PrivacyStatus(ScaleMode mode) {
  switch (mode) {
    case ScaleMode::kClaimedAdept:
      return "NOT epsilon-DP: noise is calibrated to the claimed L1 "
             "sensitivity 2C, which is false for n >= 2 (true value "
             "2C*sqrt(n))";
    case ScaleMode::kCorrectedRescaled:
      return "epsilon-DP: L2 clipping with noise calibrated to the true L1 "
             "sensitivity 2C*sqrt(n)";
    case ScaleMode::kCorrectedL1Clip:
      return "epsilon-DP: L1 clipping bounds the L1 sensitivity by 2C";
  }
  return "";
}

struct MechanismSpec {
  ClipSpec clip;
  double epsilon = 1.0;
  ScaleMode scale_mode = ScaleMode::kClaimedAdept;
  // Delta f used for calibration and in the density.
  double claimed_sensitivity = 2.0;
  // b; equals claimed_sensitivity / epsilon when built by the factories.
  double noise_scale = 2.0;
  // Set for kCorrectedRescaled, whose scale depends on n.
  std::optional<std::size_t> dim;

  static MechanismSpec ClaimedAdept(double clip_constant, double epsilon) {
    internal::RequirePositive(epsilon, "epsilon");
    MechanismSpec spec;
    spec.clip = {NormKind::kL2, clip_constant};
    spec.epsilon = epsilon;
    spec.scale_mode = ScaleMode::kClaimedAdept;
    spec.claimed_sensitivity = ClaimedSensitivity(clip_constant);
    spec.noise_scale = spec.claimed_sensitivity / epsilon;
    return spec;
  }

  static MechanismSpec CorrectedRescaled(double clip_constant, double epsilon,
                                         std::size_t n) {
    internal::RequirePositive(epsilon, "epsilon");
    MechanismSpec spec;
    spec.clip = {NormKind::kL2, clip_constant};
    spec.epsilon = epsilon;
    spec.scale_mode = ScaleMode::kCorrectedRescaled;
    spec.claimed_sensitivity = TrueSensitivityL2Clip(clip_constant, n);
    spec.noise_scale = spec.claimed_sensitivity / epsilon;
    spec.dim = n;
    return spec;
  }

  static MechanismSpec CorrectedL1Clip(double clip_constant, double epsilon) {
    internal::RequirePositive(epsilon, "epsilon");
    MechanismSpec spec;
    spec.clip = {NormKind::kL1, clip_constant};
    spec.epsilon = epsilon;
    spec.scale_mode = ScaleMode::kCorrectedL1Clip;
    spec.claimed_sensitivity = SensitivityL1Clip(clip_constant);
    spec.noise_scale = spec.claimed_sensitivity / epsilon;
    return spec;
  }

  // `n` is only consulted by kCorrectedRescaled.
  static MechanismSpec ForMode(ScaleMode mode, double clip_constant,
                               double epsilon, std::size_t n) {
    switch (mode) {
      case ScaleMode::kClaimedAdept:
        return ClaimedAdept(clip_constant, epsilon);
      case ScaleMode::kCorrectedRescaled:
        return CorrectedRescaled(clip_constant, epsilon, n);
      case ScaleMode::kCorrectedL1Clip:
        return CorrectedL1Clip(clip_constant, epsilon);
    }
    throw std::invalid_argument("unknown mechanism mode");
  }

  // Structural checks. The noise scale is only required to be positive so a
  // harness can override it.
  void Validate() const {
    clip.Validate();
    internal::RequirePositive(epsilon, "epsilon");
    internal::RequirePositive(claimed_sensitivity, "claimed sensitivity");
    internal::RequirePositive(noise_scale, "noise scale");
    NormKind expected = scale_mode == ScaleMode::kCorrectedL1Clip
                            ? NormKind::kL1
                            : NormKind::kL2;
    if (clip.norm_kind != expected) {
      throw std::invalid_argument("clip norm does not match mechanism mode");
    }
    if (scale_mode == ScaleMode::kCorrectedRescaled && !dim.has_value()) {
      throw std::invalid_argument("rescaled mechanism requires a dimension");
    }
  }

  void RequireInputDim(std::size_t n) const {
    if (dim.has_value() && *dim != n) {
      throw std::invalid_argument(
          "input dimension " + std::to_string(n) +
          " does not match mechanism dimension " + std::to_string(*dim));
    }
  }
};

// clip(r) + eta with eta_i i.i.d. Lap(0, noise_scale), one draw per
// coordinate in index order.
inline LatentVector Privatize(const LatentVector& r, const MechanismSpec& spec,
                              SeededRng& rng) {
  spec.Validate();
  spec.RequireInputDim(r.dim());
  std::vector<double> out = Clip(r, spec.clip).values();
  for (double& x : out) x += SampleLaplace(0.0, spec.noise_scale, rng);
  return LatentVector(std::move(out));
}

// log p(M(r) = z) = sum_i [log(eps / (2 Delta f)) - eps |f(r)_i - z_i| / Delta f]
// with f = clip and Delta f = spec.claimed_sensitivity.
inline double MechanismLogDensity(const MechanismSpec& spec,
                                  const LatentVector& r,
                                  const LatentVector& z) {
  spec.Validate();
  RequireSameDim(r, z, "MechanismLogDensity");
  spec.RequireInputDim(r.dim());
  LatentVector fr = Clip(r, spec.clip);
  double rate = spec.epsilon / spec.claimed_sensitivity;
  double log_norm = std::log(rate / 2.0);
  double total = 0.0;
  for (std::size_t i = 0; i < r.dim(); ++i) {
    total += log_norm - rate * std::abs(fr[i] - z[i]);
  }
  return total;
}

}  // namespace dpaudit

#endif  // DPAUDIT_MECHANISMS_HPP_
