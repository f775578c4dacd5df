#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "meanscope/laws.hpp"

namespace meanscope {

inline constexpr const char* kToolVersion = "0.1.0";

/// Process exit codes of the CLI.
enum ExitCode : int { kExitOk = 0, kExitViolation = 1, kExitUsage = 2 };

/// A verifiable law as the harness sees it. Built-ins wrap check_law and
/// sample_instance; tests register extra entries.
struct LawEntry {
  std::string name;
  bool tensor = false;
  int boundary_count = 0;
  std::function<Instance(const TrialShape&, std::uint64_t seed, int boundary)> sample;
  std::function<CheckResult(const Instance&, const Tolerances&)> check;
};

std::vector<LawEntry> builtin_registry();

struct VerifyConfig {
  std::vector<std::string> laws{"all"};
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  /// Fixed dimension; otherwise n cycles 1..6 (1..3 for tensor laws).
  std::optional<Index> n;
  /// Fixed tuple length; otherwise m cycles 1..4.
  std::optional<int> m;
  Field field = Field::Complex;
  double kappa_max = 1e4;
  Tolerances tol;
  /// Overrides the t-grid of the tensor-f / tensor-g laws.
  std::optional<std::vector<double>> grid;
  std::string out;
  unsigned jobs = 1;
};

nlohmann::json config_to_json(const VerifyConfig& c);
/// Reads the keys of a JSON config file into `c` (absent keys keep their
/// value). Throws PreconditionError on malformed values.
void apply_config_json(const nlohmann::json& j, VerifyConfig& c);

/// Parses "a:b:step" into an inclusive grid.
std::vector<double> parse_grid(const std::string& text);

TrialShape trial_shape(const VerifyConfig& c, const LawEntry& law, std::size_t trial);
std::uint64_t trial_seed(const VerifyConfig& c, std::size_t trial);
/// Instance for trial `trial` exactly as verify builds it.
Instance trial_instance(const VerifyConfig& c, const LawEntry& law, std::size_t trial);
CheckResult run_trial(const VerifyConfig& c, const LawEntry& law, std::size_t trial);

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  Index n = 0;
  int m = 0;
  double margin = 0.0;  ///< worst slack of the trial
  std::string error;    ///< non-empty when the trial threw
};

struct LawSummary {
  std::string law;
  std::size_t trials = 0;
  std::size_t passes = 0;
  std::size_t fails = 0;
  std::size_t skips = 0;
  std::optional<TrialRecord> worst;
  std::vector<TrialRecord> failures;
};

struct Report {
  std::string version = kToolVersion;
  nlohmann::json config;
  std::vector<LawSummary> laws;
  double wall_clock_seconds = 0.0;
  int exit_status = kExitOk;
};

nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

/// Resolves law names ("all" expands to the registry). Throws
/// PreconditionError on an unknown name.
std::vector<const LawEntry*> select_laws(const std::vector<std::string>& names,
                                         const std::vector<LawEntry>& registry);

Report run_verify(const VerifyConfig& c, const std::vector<LawEntry>& registry);

/// Full dump of one trial: instance matrices in the matrix file format and
/// every link.
std::string repro_to_json(const std::string& law, const CheckResult& result,
                          const Instance& instance, std::size_t trial);

/// Entry point shared by the meanscope binary and the CLI tests.
int run_cli(int argc, const char* const* argv, const std::vector<LawEntry>& registry,
            std::ostream& out, std::ostream& err);

}  // namespace meanscope
