#pragma once

// Line-oriented instance files. See docs/formats.md for the grammar.

#include "krein/numerics.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace krein {

struct EquationData {
  Matrix a;
  Matrix b;
};

/// Per-field tolerance overrides; unset fields fall through to the next layer.
struct ToleranceOverrides {
  std::optional<double> rank_rel;
  std::optional<double> psd_slack;
  std::optional<double> residual;

  bool empty() const { return !rank_rel && !psd_slack && !residual; }
  ToleranceProfile apply(ToleranceProfile base) const;
};

struct Instance {
  std::optional<std::string> kind;
  Index dim = 0;
  /// Domain vectors and their images as columns (n x k). The image may be
  /// omitted when only the subspace matters (shorting a full operator).
  std::optional<Matrix> domain;
  std::optional<Matrix> image;
  std::optional<Matrix> full_operator;
  std::optional<EquationData> equation;
  ToleranceOverrides tolerances;
  std::optional<std::uint64_t> seed;
};

/// Throws ParseError (syntax, unknown or duplicate keys, non-finite numbers)
/// or BadShape (inconsistent dimensions).
Instance parse_instance(std::string_view text);
Instance read_instance(std::istream& in);
/// Reads `tol_*` lines only, as used by a tolerance profile file.
ToleranceOverrides parse_tolerance_file(std::string_view text);

std::string write_instance(const Instance& instance);

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double value);

enum class InstanceKind { Positive, Contraction, PsdFull, Equation };

InstanceKind parse_kind(std::string_view name);
std::string_view to_string(InstanceKind kind);

/// Deterministic random instance. Requires 1 <= k <= n <= 64; `degenerate`
/// (positive and equation kinds, k < n) plants an obstruction to extension.
/// Throws BadShape.
Instance gen_instance(InstanceKind kind, Index n, Index k, std::uint64_t seed,
                      bool degenerate = false);

}  // namespace krein
