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

#ifndef DPAUDIT_VECTOR_HPP_
#define DPAUDIT_VECTOR_HPP_

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dpaudit {

// A dense latent vector. Always non-empty with finite components.
class LatentVector {
 public:
  explicit LatentVector(std::vector<double> components)
      : components_(std::move(components)) {
    if (components_.empty()) {
      throw std::invalid_argument("LatentVector: dimension must be >= 1");
    }
    for (double c : components_) {
      if (!std::isfinite(c)) {
        throw std::invalid_argument("LatentVector: non-finite component");
      }
    }
  }

  LatentVector(std::initializer_list<double> components)
      : LatentVector(std::vector<double>(components)) {}

  // Vector of `dim` copies of `value`.
  static LatentVector Filled(std::size_t dim, double value) {
    return LatentVector(std::vector<double>(dim, value));
  }

  std::size_t dim() const { return components_.size(); }
  std::span<const double> components() const { return components_; }
  double operator[](std::size_t i) const { return components_[i]; }

  const std::vector<double>& values() const& { return components_; }
  std::vector<double> values() && { return std::move(components_); }

  friend bool operator==(const LatentVector&, const LatentVector&) = default;

 private:
  std::vector<double> components_;
};

enum class NormKind { kL2, kL1 };

inline const char* NormKindName(NormKind kind) {
  return kind == NormKind::kL2 ? "l2" : "l1";
}

struct ClipSpec {
  NormKind norm_kind = NormKind::kL2;
  double clip_constant = 1.0;

  void Validate() const {
    if (!(clip_constant > 0.0) || !std::isfinite(clip_constant)) {
      throw std::invalid_argument(
          "ClipSpec: clip constant must be positive and finite");
    }
  }
};

inline double L1Norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += std::abs(x);
  return sum;
}

inline double L2Norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

inline double L1Norm(const LatentVector& v) { return L1Norm(v.components()); }
inline double L2Norm(const LatentVector& v) { return L2Norm(v.components()); }

inline double Norm(const LatentVector& v, NormKind kind) {
  return kind == NormKind::kL2 ? L2Norm(v) : L1Norm(v);
}

inline void RequireSameDim(const LatentVector& a, const LatentVector& b,
                           const char* where) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()) + ")");
  }
}

// ||a - b||_1, summed left to right.
inline double L1Distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum;
}

inline double L1Distance(const LatentVector& a, const LatentVector& b) {
  RequireSameDim(a, b, "L1Distance");
  return L1Distance(a.components(), b.components());
}

// Scale factor min(1, C / ||v||). A zero norm maps to 1 so the zero vector is
// a fixed point.
inline double ClipFactor(double norm, double clip_constant) {
  if (norm == 0.0) return 1.0;
  double ratio = clip_constant / norm;
  return ratio < 1.0 ? ratio : 1.0;
}

// Writes v * min(1, C / ||v||_p) into `out`. Rounding in the product can leave
// the norm a hair above C; components are nudged toward zero until the bound
// holds so clipping stays idempotent.
inline void ClipInto(std::span<const double> v, const ClipSpec& spec,
                     std::span<double> out) {
  auto norm_of = [&](std::span<const double> x) {
    return spec.norm_kind == NormKind::kL2 ? L2Norm(x) : L1Norm(x);
  };
  double factor = ClipFactor(norm_of(v), spec.clip_constant);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * factor;
  if (factor == 1.0) return;
  while (norm_of(out) > spec.clip_constant) {
    for (double& x : out) x = std::nextafter(x, 0.0);
  }
}

// Vectors already inside the ball come back bit-identical.
inline LatentVector Clip(const LatentVector& v, const ClipSpec& spec) {
  spec.Validate();
  std::vector<double> out(v.dim());
  ClipInto(v.components(), spec, out);
  return LatentVector(std::move(out));
}

}  // namespace dpaudit

#endif  // DPAUDIT_VECTOR_HPP_
