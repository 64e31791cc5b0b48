#pragma once

#include "krein/error.hpp"
#include "krein/numerics.hpp"

#include <optional>

namespace krein {

/// Why S*A = B does or does not admit a positive semidefinite solution S.
struct Solvability {
  bool well_defined = false;       // ker A ⊆ ker B
  bool symmetric_form = false;     // B^T A = A^T B
  bool positive_form = false;      // B^T A is PSD
  bool bounded_condition = false;  // ker sym(B^T A) ⊆ ker B
  bool solvable = false;
  /// x with x^T sym(B^T A) x ≈ 0 but B x != 0, present when the bounded
  /// condition fails.
  std::optional<Vector> certificate;
};

class NotSolvableError : public Error {
 public:
  explicit NotSolvableError(Solvability report)
      : Error(ErrorKind::NotSolvable, "S*A = B has no positive semidefinite solution"),
        report_(std::move(report)) {}

  const Solvability& report() const { return report_; }

 private:
  Solvability report_;
};

/// Throws ShapeMismatch unless A and B are both n x m.
Solvability check_solvable(const Matrix& a, const Matrix& b, const ToleranceProfile& tol = {});

/// Minimal PSD solution B * sym(B^T A)^+ * B^T. Throws NotSolvableError.
Matrix solve_min(const Matrix& a, const Matrix& b, const ToleranceProfile& tol = {});

}  // namespace krein
