#pragma once

#include "krein/partial_op.hpp"

namespace krein {

/// S = shorted + kvn_part, where kvn_part is the Krein-von Neumann extension
/// of S restricted to the subspace.
struct ShortedResult {
  Matrix shorted;
  Matrix kvn_part;
  Subspace subspace;
};

/// Shortening of a PSD matrix to a subspace: S - (S|_D)_N. Throws NotPSD.
ShortedResult short_to(const Matrix& s, const Subspace& d, const ToleranceProfile& tol = {});

/// h^T (S - (S|_D)_N) h. The infimum of <S(f+h), f+h> over f in D is computed
/// in closed form alongside; a disagreement beyond 1e-8 relative throws
/// OracleMismatch.
double shorted_qform(const Matrix& s, const Subspace& d, const Vector& h,
                     const ToleranceProfile& tol = {});

/// Closed-form infimum of <S(f+h), f+h> over f in D, with minimizer
/// f = -B (B^T S B)^+ B^T S h.
double shorted_qform_infimum(const Matrix& s, const Subspace& d, const Vector& h,
                             const ToleranceProfile& tol = {});

/// ran (S - (S|_D)_N)^{1/2}, cross-checked against ran S^{1/2} ∩ D^⊥.
/// Throws RangeIdentityViolated if the two disagree.
Subspace shorted_root_range(const Matrix& s, const Subspace& d, const ToleranceProfile& tol = {});

/// Generalized Schur complement on the trailing block: [[0,0],[0, C - B^T A^+ B]]
/// for S = [[A, B], [B^T, C]] with A of size p.
Matrix schur_oracle(const Matrix& s, Index p, const ToleranceProfile& tol = {});

/// For S <= T with ran S ⊆ D^⊥, S stays below the shortening of T to D.
/// Throws PreconditionViolated.
bool shorted_monotone_floor(const Matrix& s, const Matrix& t, const Subspace& d,
                            const ToleranceProfile& tol = {});

struct MonotoneReport {
  bool form_dominance = false;   // <Sf, f> <= <Tf, f> on D
  bool range_inclusion = false;  // ran S_N^{1/2} ⊆ ran T_N^{1/2}
  bool loewner = false;          // S_N <= T_N, evaluated directly

  bool holds() const { return form_dominance && range_inclusion; }
};

/// Both ways of comparing the Krein-von Neumann extensions of two positive
/// operators on the same domain. Throws DomainMismatch, NoExtension, or
/// OracleMismatch if the two ways disagree.
MonotoneReport kvn_monotone_report(const PartialOperator& ps, const PartialOperator& pt);
bool kvn_monotone_check(const PartialOperator& ps, const PartialOperator& pt);

}  // namespace krein
