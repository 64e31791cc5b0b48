#pragma once

// Tolerance-aware dense kernel. Every rank, range, positivity and ordering
// decision in the library goes through the functions declared here.

#include <Eigen/Dense>

#include <span>
#include <string_view>

namespace krein {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

struct ToleranceProfile {
  double rank_rel = 1e-10;   // relative singular-value cutoff
  double psd_slack = 1e-9;   // allowed negative eigenvalue, relative to ||M||
  double residual = 1e-8;    // relative residual for equality/range tests

  /// Throws BadShape unless every threshold is strictly positive and finite.
  void validate() const;

  bool operator==(const ToleranceProfile&) const = default;
};

/// A subspace of R^n carried by an orthonormal basis (n x r, r may be 0).
class Subspace {
 public:
  explicit Subspace(Index ambient_dim);  // the zero subspace
  Subspace(Index ambient_dim, Matrix orthonormal_basis);

  static Subspace full(Index ambient_dim);
  /// Orthonormal basis of span of the columns of `spanning`.
  static Subspace span(const Matrix& spanning, const ToleranceProfile& tol);

  Index ambient_dim() const { return ambient_dim_; }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

  Matrix projector() const;
  Subspace orthogonal_complement() const;

 private:
  Index ambient_dim_;
  Matrix basis_;
};

Matrix symmetrize(const Matrix& m);
double spectral_norm(const Matrix& m);
bool all_finite(const Matrix& m);
/// Throws ShapeMismatch if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);

// `scale` is a reference magnitude: the cutoff becomes
// rank_rel * max(sigma_max(M), scale). Quantities that should vanish
// (residual matrices, differences) pass the scale of their ingredients so that
// round-off is not mistaken for rank.

Index rank_tol(const Matrix& m, const ToleranceProfile& tol, double scale = 0.0);
Matrix pinv(const Matrix& m, const ToleranceProfile& tol, double scale = 0.0);

/// Pseudoinverse of a symmetric PSD matrix from its eigendecomposition:
/// eigenvalues under the rank cutoff (including round-off negatives) are
/// dropped, so the result is PSD. Throws NotPSD.
Matrix pinv_psd(const Matrix& m, const ToleranceProfile& tol, double scale = 0.0);

/// Orthonormal basis of ran M.
Subspace range_of(const Matrix& m, const ToleranceProfile& tol, double scale = 0.0);
/// Orthonormal basis of ker M.
Subspace kernel_of(const Matrix& m, const ToleranceProfile& tol, double scale = 0.0);

double min_eigenvalue(const Matrix& m);  // of sym(M)
double max_eigenvalue(const Matrix& m);  // of sym(M)

bool is_psd(const Matrix& m, const ToleranceProfile& tol);
/// Symmetric PSD root of sym(M). Eigenvalues inside the PSD slack or under
/// the rank cutoff are set to zero before rooting, so ran sqrt(M) = ran M.
Matrix sqrt_psd(const Matrix& m, const ToleranceProfile& tol, double scale = 0.0);

/// ran X ⊆ ran Y, decided by ||(I - Y Y^+) X|| <= residual * max(||X||, 1).
bool range_leq(const Matrix& x, const Matrix& y, const ToleranceProfile& tol,
               double scale = 0.0);

/// Orthonormal basis of the intersection of ran M_i. A unit vector belongs to
/// it when its summed squared distance to the ranges is at most `residual`.
Subspace range_intersect(std::span<const Matrix> ms, const ToleranceProfile& tol,
                         double scale = 0.0);

bool loewner_leq(const Matrix& a, const Matrix& b, const ToleranceProfile& tol);
/// Resolvent comparison (I+B)^-1 <= (I+A)^-1. Throws NotPSD on non-PSD input.
bool form_order_leq(const Matrix& a, const Matrix& b, const ToleranceProfile& tol);

}  // namespace krein
