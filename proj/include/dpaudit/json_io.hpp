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

// JSON documents for reports and findings.

#ifndef DPAUDIT_JSON_IO_HPP_
#define DPAUDIT_JSON_IO_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dpaudit/auditor.hpp"
#include "dpaudit/mechanisms.hpp"
#include "dpaudit/sensitivity.hpp"
#include "dpaudit/simulator.hpp"
#include "dpaudit/vector.hpp"

namespace dpaudit {

using Json = nlohmann::ordered_json;

inline Json ToJson(const LatentVector& v) { return Json(v.values()); }

inline LatentVector VectorFromJson(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("vector must be a JSON array");
  std::vector<double> values;
  values.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) {
      throw std::invalid_argument("vector entries must be numbers");
    }
    values.push_back(e.get<double>());
  }
  return LatentVector(std::move(values));
}

// Accepts {"x": [...], "y": [...]} or [[...], [...]].
inline VectorPair PairFromJson(const Json& j) {
  if (j.is_object()) {
    if (!j.contains("x") || !j.contains("y")) {
      throw std::invalid_argument("pair object needs \"x\" and \"y\"");
    }
    return {VectorFromJson(j.at("x")), VectorFromJson(j.at("y"))};
  }
  if (j.is_array() && j.size() == 2) {
    return {VectorFromJson(j[0]), VectorFromJson(j[1])};
  }
  throw std::invalid_argument("pair must be {\"x\":[..],\"y\":[..]} or [[..],[..]]");
}

inline VectorPair ParsePairLine(std::string_view line) {
  Json j = Json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded()) throw std::invalid_argument("malformed JSON pair line");
  return PairFromJson(j);
}

inline Json ToJson(const SensitivityReport& r) {
  Json j;
  j["dim"] = r.dim;
  j["clip_norm"] = NormKindName(r.clip.norm_kind);
  j["clip_constant"] = r.clip.clip_constant;
  j["claimed"] = r.claimed;
  j["claimed_label"] = kClaimedSensitivityLabel;
  j["true_analytic"] = r.true_analytic;
  j["ratio_true_to_claimed"] = r.true_analytic / r.claimed;
  j["empirical_max"] =
      r.empirical_max ? Json(*r.empirical_max) : Json(nullptr);
  j["witness_pair"] = Json::array(
      {ToJson(r.witness_pair.first), ToJson(r.witness_pair.second)});
  j["samples_used"] = r.samples_used;
  if (r.sampler) j["sampler"] = std::string(SamplerName(*r.sampler));
  if (r.seed) j["seed"] = *r.seed;
  return j;
}

inline Json ToJson(const AuditFinding& f) {
  Json j;
  j["pair"] = Json::array({ToJson(f.x), ToJson(f.y)});
  j["mode"] = std::string(ScaleModeName(f.mode));
  j["l1_distance_after_clip"] = f.l1_distance_after_clip;
  j["claimed_sensitivity"] = f.claimed_sensitivity;
  j["ratio_exponent_factor"] = f.ratio_exponent_factor;
  j["epsilon"] = f.epsilon;
  j["realized_exponent"] = f.ratio_exponent_factor * f.epsilon;
  j["violated"] = f.violated;
  j["verdict_note"] = f.verdict_note;
  return j;
}

inline Json ToJson(const SensitivityRatioRow& r) {
  Json j;
  j["dim"] = r.dim;
  j["claimed"] = r.claimed;
  j["true_analytic"] = r.true_analytic;
  j["ratio"] = r.ratio;
  j["effective_epsilon"] = r.effective_epsilon;
  return j;
}

inline Json ToJson(const SimulationRecord& r) {
  Json j;
  j["dim"] = r.dim;
  j["sampler"] = std::string(SamplerName(r.sampler));
  j["num_vectors"] = r.num_vectors;
  j["pairs_checked"] = r.pairs_checked;
  j["violations"] = r.violations;
  j["violation_fraction"] = r.violation_fraction;
  j["clip_constant"] = r.clip_constant;
  j["seed"] = r.seed;
  j["claimed_bound"] = r.claimed_bound;
  j["pair_count_clamped"] = r.pair_count_clamped;
  if (r.first_violation) {
    j["first_violation"] =
        Json::array({r.first_violation->first, r.first_violation->second});
  }
  return j;
}

}  // namespace dpaudit

#endif  // DPAUDIT_JSON_IO_HPP_
