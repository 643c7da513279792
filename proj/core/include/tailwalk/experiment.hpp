#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tailwalk/errors.hpp"
#include "tailwalk/step_law.hpp"

namespace tailwalk {

enum class Subcommand {
  Constants,   // threshold and K_alpha grids
  Dichotomy,   // tail difference decomposition over a t grid
  Sample,      // acceptance-rejection exact sampler
  Naive,       // horizon-conditioned oracle sampler
  Hitting,     // tau_b statistics across barriers under the proposal
  CertifyC,    // grid certification of the direct-proposal sign condition
  Crosscheck,  // KS comparison of the exact sampler against the oracle
};

std::string subcommand_name(Subcommand s);
Subcommand subcommand_from_name(const std::string& name);

/// Parsed experiment configuration. (config, seed) fully determines every
/// output byte; threads only changes wall time.
struct ExperimentConfig {
  Subcommand subcommand = Subcommand::Constants;
  std::optional<StepLaw> step;
  double barrier = 0.0;
  std::optional<double> translation;  // nullopt = "auto": resolve by certify_c
  double quadrature_tol = 1e-10;
  std::uint64_t seed = 1;
  std::uint64_t replications = 0;
  std::uint64_t horizon = 10'000;
  std::uint64_t guard = 10'000'000;
  std::uint64_t attempt_cap = 1'000'000;  // per replication
  bool strict = true;                     // abort on positive log LR
  std::vector<double> t_grid;
  std::vector<double> alpha_grid;
  std::vector<double> barriers;
  double certify_t_max = 0.0;  // 0 = default_certify_t_max(step)
  int certify_grid_size = 200;
  unsigned threads = 0;  // 0 = hardware concurrency

  /// Parses the JSON schema described in the README. Unknown keys are
  /// rejected; per-subcommand requirements are enforced by validate().
  static ExperimentConfig from_json_text(const std::string& text, Subcommand sub);

  void validate() const;

  /// Canonical serialization used for hashing and the manifest echo.
  std::string canonical_json() const;
};

struct Diagnostics {
  std::uint64_t guard_hits = 0;
  std::uint64_t lr_violations = 0;
  std::uint64_t quadrature_failures = 0;
};

struct ExperimentReport {
  Subcommand subcommand = Subcommand::Constants;
  std::string csv_header;
  std::vector<std::string> csv_rows;
  std::string manifest_json;  // includes estimates and diagnostics
  Diagnostics diagnostics;
  std::optional<double> resolved_c;
  ExitCode exit_code = ExitCode::Ok;
};

/// Runs the configured pipeline and assembles the report in memory.
/// Typed errors from inner modules propagate (each carries its exit code).
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Writes <out>/results.csv and <out>/manifest.json. Throws IoError.
void emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir);

/// Deterministic fan-out: body(i) runs once for each i in [0, n), distributed
/// over worker threads; any exception is rethrown on the caller thread.
void parallel_for(std::uint64_t n, unsigned threads,
                  const std::function<void(std::uint64_t)>& body);

/// Canonical step laws used across tests and benchmark runs; one per regime
/// of the dichotomy (direct / non-direct / linear hitting time).
StepLaw canonical_config_a();  // alpha = 1.2, mean -1
StepLaw canonical_config_b();  // alpha = 1.8, mean -1
StepLaw canonical_config_c();  // alpha = 2.5, mean -1

}  // namespace tailwalk
