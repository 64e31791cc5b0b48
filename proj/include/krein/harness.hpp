#pragma once

#include "krein/error.hpp"
#include "krein/instance.hpp"
#include "krein/verification.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace krein {

struct Report {
  std::string command;
  std::vector<std::pair<std::string, bool>> verdicts;
  std::vector<std::pair<std::string, Matrix>> matrices;
  std::vector<std::pair<std::string, double>> scalars;
  CheckList oracle_checks;
  ToleranceProfile tolerances_used;
  std::vector<std::string> notes;  // error context, skipped sections

  void verdict(std::string name, bool value) { verdicts.emplace_back(std::move(name), value); }
  void matrix(std::string name, Matrix value) { matrices.emplace_back(std::move(name), std::move(value)); }
  void scalar(std::string name, double value) { scalars.emplace_back(std::move(name), value); }
};

/// Process exit codes.
enum class Outcome : int {
  Success = 0,
  InvalidInput = 1,  // parse or validation failure
  Infeasible = 2,    // no extension / no PSD solution
  OracleFailure = 3, // cross-check mismatch or tolerance breach
};

struct RunOptions {
  ToleranceProfile base_tolerances;      // defaults or a profile file
  ToleranceOverrides flag_overrides;     // command-line flags win
  std::optional<std::uint64_t> seed;     // overrides the instance seed
  int samples = 50;
};

struct RunResult {
  Report report;
  Outcome outcome = Outcome::Success;
};

/// Commands: check, kvn, short, interval, unique, solve, verify-all.
/// Library errors are caught and turned into a report plus outcome.
RunResult run_command(std::string_view command, const Instance& instance,
                      const RunOptions& options = {});

std::string format_report(const Report& report);

Outcome outcome_for(ErrorKind kind);

/// Effective profile: base, then instance overrides, then flags.
ToleranceProfile resolve_tolerances(const Instance& instance, const RunOptions& options);

}  // namespace krein
