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

// Command-line front end. Exit codes: 0 success, 1 usage or validation
// error, 2 an audit found at least one violating pair.

#ifndef DPAUDIT_CLI_HPP_
#define DPAUDIT_CLI_HPP_

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dpaudit/auditor.hpp"
#include "dpaudit/format.hpp"
#include "dpaudit/json_io.hpp"
#include "dpaudit/mechanisms.hpp"
#include "dpaudit/sampling.hpp"
#include "dpaudit/sensitivity.hpp"
#include "dpaudit/simulator.hpp"
#include "dpaudit/vector.hpp"

namespace dpaudit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

enum class OutputFormat { kJson, kCsv, kHumanText };

struct CliConfig {
  std::string subcommand;
  std::optional<std::uint64_t> seed;
  std::string out_path;  // empty: the caller's output stream
  OutputFormat format = OutputFormat::kJson;
  std::size_t threads = 1;
};

namespace internal {

inline std::string FormatVector(const LatentVector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) s += ", ";
    s += FormatDouble(v[i]);
  }
  return s + "]";
}

inline void PrintFindingText(const AuditFinding& f, std::ostream& out) {
  out << "mode:                   " << ScaleModeName(f.mode) << '\n'
      << "x:                      " << FormatVector(f.x) << '\n'
      << "y:                      " << FormatVector(f.y) << '\n'
      << "l1 distance after clip: " << FormatDouble(f.l1_distance_after_clip)
      << '\n'
      << "claimed sensitivity:    " << FormatDouble(f.claimed_sensitivity)
      << '\n'
      << "ratio exponent factor:  " << FormatDouble(f.ratio_exponent_factor)
      << '\n'
      << "epsilon:                " << FormatDouble(f.epsilon) << '\n'
      << "violated:               " << (f.violated ? "yes" : "no") << '\n'
      << "verdict:                " << f.verdict_note << '\n';
}

inline void PrintReportText(const SensitivityReport& r, std::ostream& out) {
  out << "dim:            " << r.dim << '\n'
      << "clip:           " << NormKindName(r.clip.norm_kind) << " at "
      << FormatDouble(r.clip.clip_constant) << '\n'
      << "claimed:        " << FormatDouble(r.claimed) << " ("
      << kClaimedSensitivityLabel << ")\n"
      << "true analytic:  " << FormatDouble(r.true_analytic) << '\n'
      << "empirical max:  "
      << (r.empirical_max ? FormatDouble(*r.empirical_max) : "n/a") << '\n'
      << "samples used:   " << r.samples_used << '\n'
      << "witness x:      " << FormatVector(r.witness_pair.first) << '\n'
      << "witness y:      " << FormatVector(r.witness_pair.second) << '\n';
}

inline LatentVector VectorFromList(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("--vector must be non-empty");
  return LatentVector(values);
}

inline NormKind ParseNormKind(const std::string& name) {
  if (name == "l2") return NormKind::kL2;
  if (name == "l1") return NormKind::kL1;
  throw std::invalid_argument("unknown norm: " + name);
}

inline std::pair<PairMode, std::uint64_t> ParsePairMode(
    const std::string& text) {
  if (text == "all") return {PairMode::kAllPairs, 0};
  const std::string prefix = "sampled:";
  if (text.rfind(prefix, 0) == 0) {
    std::string count = text.substr(prefix.size());
    std::size_t used = 0;
    unsigned long long k = 0;
    try {
      k = std::stoull(count, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != count.size() || k == 0 || count[0] == '-') {
      throw std::invalid_argument("--pair-mode sampled:K needs K >= 1");
    }
    return {PairMode::kSampledPairs, k};
  }
  throw std::invalid_argument("--pair-mode must be 'all' or 'sampled:K'");
}

inline SigmaConvention ParseSigmaConvention(const std::string& name) {
  if (name == "variance") return SigmaConvention::kVariance;
  if (name == "stddev") return SigmaConvention::kStddev;
  throw std::invalid_argument("unknown sigma convention: " + name);
}

inline void RequireSeed(const CliConfig& config, const char* what) {
  if (!config.seed) {
    throw std::invalid_argument(std::string(what) + " requires --seed");
  }
}

}  // namespace internal

// Parses `args` (without the program name), runs the subcommand, and writes
// the report to `out` (or --out). Diagnostics go to `err`.
inline int Dispatch(const std::vector<std::string>& args, std::ostream& out,
                    std::ostream& err) {
  CliConfig config;

  CLI::App app{
      "dpaudit: audit L2-clipped Laplace privatization of latent vectors.\n"
      "Modes: claimed-adept (noise at the refuted 2C sensitivity, NOT "
      "epsilon-DP),\n"
      "corrected-rescaled (noise at the true 2C*sqrt(n)), corrected-l1clip "
      "(L1 clipping).",
      "dpaudit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format_name = "json";
  app.add_option("--format", format_name, "Report format for JSON reports")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out", config.out_path,
                 "Write the report to this path instead of standard output");
  app.add_option("--threads", config.threads,
                 "Maximum worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);

  const std::vector<std::string> modes = {"claimed-adept", "corrected-rescaled",
                                          "corrected-l1clip"};

  // clip
  std::string clip_norm;
  double clip_c = 1.0;
  double epsilon = 1.0;
  std::vector<double> vector_values;
  auto* clip_cmd = app.add_subcommand(
      "clip",
      "Clipping function f(r) = r * min(1, C/||r||_p); l2 is the clip of the "
      "audited mechanism, l1 the corrected remedy");
  clip_cmd->add_option("--norm", clip_norm, "Clipping norm")
      ->required()
      ->check(CLI::IsMember({"l1", "l2"}));
  clip_cmd->add_option("--clip", clip_c, "Clipping constant C > 0")->required();
  clip_cmd->add_option("--vector", vector_values, "Comma-separated vector")
      ->required()
      ->delimiter(',');

  // noise
  std::string mode_name;
  std::uint64_t seed_value = 0;
  auto* noise_cmd = app.add_subcommand(
      "noise",
      "Laplace mechanism on the clipped vector: clip(r) + Lap(0, Delta f / "
      "epsilon) per coordinate. claimed-adept is the refuted calibration (NOT "
      "epsilon-DP); corrected-* modes are epsilon-DP");
  noise_cmd->add_option("--mode", mode_name, "Mechanism mode")
      ->required()
      ->check(CLI::IsMember(modes));
  noise_cmd->add_option("--clip", clip_c, "Clipping constant C > 0")
      ->required();
  noise_cmd->add_option("--epsilon", epsilon, "Privacy parameter > 0")
      ->required();
  auto* noise_seed = noise_cmd->add_option("--seed", seed_value, "RNG seed");
  noise_cmd->add_option("--vector", vector_values, "Comma-separated vector")
      ->required()
      ->delimiter(',');

  // sensitivity
  std::size_t dim = 1;
  std::size_t num_vectors = 0;
  std::string sampler_name = "uniform";
  std::string sens_norm = "l2";
  bool empirical = false;
  bool ratio_table = false;
  auto* sens_cmd = app.add_subcommand(
      "sensitivity",
      "L1 sensitivity of the clipping function: the claimed 2C (refuted for "
      "n >= 2) against the true 2C*sqrt(n) of L2 clipping, with the extremal "
      "corner witness pair");
  auto* sens_dim = sens_cmd->add_option("--dim", dim, "Latent dimension n >= 1");
  sens_cmd->add_option("--clip", clip_c, "Clipping constant C > 0")
      ->required();
  sens_cmd->add_option("--norm", sens_norm, "Clipping norm (default l2)")
      ->check(CLI::IsMember({"l1", "l2"}));
  sens_cmd->add_flag("--empirical", empirical,
                     "Also scan sampled vector pairs for the maximum distance");
  sens_cmd->add_option("--vectors", num_vectors, "Vectors sampled (>= 2)");
  sens_cmd->add_option("--sampler", sampler_name, "Latent sampler")
      ->check(CLI::IsMember({"uniform", "gaussian"}));
  auto* sens_seed = sens_cmd->add_option("--seed", seed_value, "RNG seed");
  sens_cmd->add_flag("--ratio-table", ratio_table,
                     "Emit true/claimed ratios for n in 32..1024 instead");
  auto* sens_eps = sens_cmd->add_option(
      "--epsilon", epsilon, "Epsilon for the --ratio-table effective epsilon");

  // counterexample
  auto* cex_cmd = app.add_subcommand(
      "counterexample",
      "Two-dimensional counterexample (+-2C/3, +-2C/3): both points survive L2 "
      "clipping, lie 8C/3 apart, and break the claimed (refuted) 2C "
      "sensitivity with ratio exp(4/3 * epsilon). Exits 2");
  cex_cmd->add_option("--clip", clip_c, "Clipping constant C > 0")->required();
  cex_cmd->add_option("--epsilon", epsilon, "Privacy parameter > 0")
      ->required();

  // audit
  std::string pairs_file;
  auto* audit_cmd = app.add_subcommand(
      "audit",
      "Check the Laplace-mechanism bound ||f(x) - f(y)||_1 <= Delta f on each "
      "pair of a newline-delimited JSON file; claimed-adept audits the "
      "refuted claim, corrected-* the remedies. Exits 2 iff any pair "
      "violates");
  audit_cmd->add_option("--mode", mode_name, "Mechanism mode")
      ->required()
      ->check(CLI::IsMember(modes));
  audit_cmd->add_option("--clip", clip_c, "Clipping constant C > 0")
      ->required();
  audit_cmd->add_option("--epsilon", epsilon, "Privacy parameter > 0")
      ->required();
  audit_cmd->add_option("--pairs-file", pairs_file,
                        "One {\"x\":[..],\"y\":[..]} object per line")
      ->required();

  // simulate
  std::vector<std::size_t> dims;
  std::string sim_sampler = "both";
  std::string pair_mode_text = "all";
  std::string sigma_name = "variance";
  auto* sim_cmd = app.add_subcommand(
      "simulate",
      "Violation simulation: fraction of L2-clipped sampled vector pairs whose "
      "L1 distance exceeds the claimed (refuted) 2C bound, per dimension. "
      "Writes CSV");
  sim_cmd->add_option("--dims", dims, "Comma-separated dimensions")
      ->required()
      ->delimiter(',');
  sim_cmd->add_option("--vectors", num_vectors, "Vectors per dimension (>= 2)")
      ->required();
  sim_cmd->add_option("--sampler", sim_sampler, "Latent sampler")
      ->check(CLI::IsMember({"uniform", "gaussian", "both"}));
  sim_cmd->add_option("--clip", clip_c, "Clipping constant C > 0 (default 1)");
  auto* sim_seed = sim_cmd->add_option("--seed", seed_value, "RNG seed");
  sim_cmd->add_option("--pair-mode", pair_mode_text, "all or sampled:K");
  sim_cmd->add_option("--sigma-convention", sigma_name,
                      "Gaussian spread: variance (sigma^2 = 0.1C, default) or "
                      "stddev (sigma = 0.1C)")
      ->check(CLI::IsMember({"variance", "stddev"}));

  std::vector<const char*> argv;
  argv.push_back("dpaudit");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitError;
  }

  config.format =
      format_name == "text" ? OutputFormat::kHumanText : OutputFormat::kJson;
  auto* chosen = app.get_subcommands().front();
  config.subcommand = chosen->get_name();
  if ((chosen == noise_cmd && noise_seed->count() > 0) ||
      (chosen == sens_cmd && sens_seed->count() > 0) ||
      (chosen == sim_cmd && sim_seed->count() > 0)) {
    config.seed = seed_value;
  }

  std::ostringstream report;
  int exit_code = kExitOk;
  try {
    bool text = config.format == OutputFormat::kHumanText;
    if (chosen == clip_cmd) {
      ClipSpec spec{internal::ParseNormKind(clip_norm), clip_c};
      spec.Validate();
      LatentVector clipped = Clip(internal::VectorFromList(vector_values), spec);
      report << (text ? internal::FormatVector(clipped) : ToJson(clipped).dump())
             << '\n';
    } else if (chosen == noise_cmd) {
      internal::RequireSeed(config, "noise");
      LatentVector r = internal::VectorFromList(vector_values);
      MechanismSpec spec = MechanismSpec::ForMode(ParseScaleMode(mode_name),
                                                  clip_c, epsilon, r.dim());
      SeededRng rng(*config.seed);
      LatentVector z = Privatize(r, spec, rng);
      if (text) {
        report << internal::FormatVector(z) << '\n';
      } else {
        Json j;
        j["mode"] = std::string(ScaleModeName(spec.scale_mode));
        j["privacy_status"] = std::string(PrivacyStatus(spec.scale_mode));
        j["clip_constant"] = clip_c;
        j["epsilon"] = epsilon;
        j["sensitivity"] = spec.claimed_sensitivity;
        j["noise_scale"] = spec.noise_scale;
        j["seed"] = *config.seed;
        j["privatized"] = ToJson(z);
        report << j.dump() << '\n';
      }
    } else if (chosen == sens_cmd) {
      if (ratio_table) {
        if (sens_eps->count() == 0) epsilon = 1.0;
        auto rows = SensitivityRatioTable(DefaultRatioDims(), clip_c, epsilon);
        for (const auto& row : rows) {
          if (text) {
            report << "n=" << row.dim << " claimed=" << FormatDouble(row.claimed)
                   << " true=" << FormatDouble(row.true_analytic)
                   << " ratio=" << FormatDouble(row.ratio)
                   << " effective_epsilon="
                   << FormatDouble(row.effective_epsilon) << '\n';
          } else {
            report << ToJson(row).dump() << '\n';
          }
        }
      } else {
        if (sens_dim->count() == 0) {
          throw std::invalid_argument("sensitivity requires --dim");
        }
        ClipSpec spec{internal::ParseNormKind(sens_norm), clip_c};
        spec.Validate();
        SensitivityReport r;
        if (empirical) {
          internal::RequireSeed(config, "sensitivity --empirical");
          if (num_vectors < 2) {
            throw std::invalid_argument("--empirical requires --vectors >= 2");
          }
          r = EmpiricalSensitivity(spec, dim, ParseSamplerKind(sampler_name),
                                   num_vectors, *config.seed, config.threads);
        } else {
          r = AnalyticSensitivityReport(spec, dim);
        }
        if (text) {
          internal::PrintReportText(r, report);
        } else {
          report << ToJson(r).dump() << '\n';
        }
      }
    } else if (chosen == cex_cmd) {
      auto [x, y] = CounterexamplePair(clip_c);
      AuditFinding f =
          CheckDpBound(x, y, MechanismSpec::ClaimedAdept(clip_c, epsilon));
      if (text) {
        internal::PrintFindingText(f, report);
      } else {
        report << ToJson(f).dump() << '\n';
      }
      if (f.violated) exit_code = kExitViolation;
    } else if (chosen == audit_cmd) {
      ScaleMode mode = ParseScaleMode(mode_name);
      MechanismSpec::ForMode(mode, clip_c, epsilon, 1).Validate();
      std::ifstream in(pairs_file);
      if (!in) throw std::invalid_argument("cannot open " + pairs_file);
      std::vector<VectorPair> pairs;
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
          pairs.push_back(ParsePairLine(line));
        } catch (const std::exception& e) {
          throw std::invalid_argument(pairs_file + ":" +
                                      std::to_string(line_no) + ": " +
                                      e.what());
        }
      }
      for (const AuditFinding& f : AuditPairs(pairs, mode, clip_c, epsilon)) {
        if (text) {
          internal::PrintFindingText(f, report);
          report << '\n';
        } else {
          report << ToJson(f).dump() << '\n';
        }
        if (f.violated) exit_code = kExitViolation;
      }
    } else if (chosen == sim_cmd) {
      internal::RequireSeed(config, "simulate");
      SimulationConfig sim;
      sim.dims = dims;
      sim.num_vectors = num_vectors;
      sim.clip_constant = clip_c;
      std::tie(sim.pair_mode, sim.sampled_pairs) =
          internal::ParsePairMode(pair_mode_text);
      sim.sigma_convention = internal::ParseSigmaConvention(sigma_name);
      sim.seed = *config.seed;
      sim.threads = config.threads;
      std::vector<SamplerKind> samplers;
      if (sim_sampler == "both") {
        samplers = {SamplerKind::kUniformPerDim,
                    SamplerKind::kGaussianZeroCentered};
      } else {
        samplers = {ParseSamplerKind(sim_sampler)};
      }
      config.format = OutputFormat::kCsv;
      WriteSimulationCsvHeader(report);
      for (SamplerKind s : samplers) {
        sim.sampler = s;
        SimulationResult result = RunViolationSimulation(sim);
        for (const auto& rec : result.records) {
          if (rec.pair_count_clamped) {
            err << "warning: dim " << rec.dim << " (" << SamplerName(s)
                << "): sampled pair count exceeds the " << rec.pairs_checked
                << " distinct pairs; checked all pairs\n";
          }
        }
        WriteSimulationCsvRows(result, report);
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  if (config.out_path.empty()) {
    out << report.str();
  } else {
    std::ofstream file(config.out_path, std::ios::binary);
    if (!file || !(file << report.str())) {
      err << "error: cannot write " << config.out_path << '\n';
      return kExitError;
    }
  }
  return exit_code;
}

}  // namespace dpaudit::cli

#endif  // DPAUDIT_CLI_HPP_
