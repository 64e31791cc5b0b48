#include "krein/psd_equation.hpp"

#include <cmath>
#include <algorithm>

namespace krein {

namespace {

double residual_bound(const Matrix& reference, const ToleranceProfile& tol) {
  return tol.residual * std::max(spectral_norm(reference), 1.0);
}

}  // namespace

Solvability check_solvable(const Matrix& a, const Matrix& b, const ToleranceProfile& tol) {
  tol.validate();
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "A and B must have the same shape");
  }
  require_finite(a, "A");
  require_finite(b, "B");
  const Index m = a.cols();
  Solvability out;

  const Subspace ker_a = kernel_of(a, tol);
  out.well_defined = ker_a.dim() == 0 || spectral_norm(b * ker_a.basis()) <= residual_bound(b, tol);

  const Matrix form = b.transpose() * a;
  out.symmetric_form = spectral_norm(form - form.transpose()) <= residual_bound(form, tol);

  const Matrix gram = symmetrize(form);
  out.positive_form = is_psd(gram, tol);

  // Form-null directions: eigenvectors of sym(B^T A) under the rank cutoff.
  Matrix nulls(m, 0);
  if (m > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    const Vector& lambda = eig.eigenvalues();
    const double top = std::max(lambda.cwiseAbs().maxCoeff(), spectral_norm(a) * spectral_norm(b));
    Index count = 0;
    for (Index i = 0; i < m; ++i) {
      if (std::abs(lambda(i)) <= tol.rank_rel * top || top == 0.0) ++count;
    }
    nulls.resize(m, count);
    Index j = 0;
    for (Index i = 0; i < m; ++i) {
      if (std::abs(lambda(i)) <= tol.rank_rel * top || top == 0.0) {
        nulls.col(j++) = eig.eigenvectors().col(i);
      }
    }
  }
  out.bounded_condition =
      nulls.cols() == 0 || spectral_norm(b * nulls) <= residual_bound(b, tol);
  if (!out.bounded_condition) {
    // The null direction whose image under B is largest; first index on ties.
    Index best = 0;
    double best_norm = -1.0;
    for (Index j = 0; j < nulls.cols(); ++j) {
      const double norm = (b * nulls.col(j)).norm();
      if (norm > best_norm) {
        best_norm = norm;
        best = j;
      }
    }
    out.certificate = nulls.col(best);
  }

  out.solvable = out.well_defined && out.symmetric_form && out.positive_form && out.bounded_condition;
  return out;
}

Matrix solve_min(const Matrix& a, const Matrix& b, const ToleranceProfile& tol) {
  Solvability report = check_solvable(a, b, tol);
  if (!report.solvable) throw NotSolvableError(std::move(report));
  const Matrix gram = symmetrize(b.transpose() * a);
  return symmetrize(b * pinv_psd(gram, tol, spectral_norm(a) * spectral_norm(b)) * b.transpose());
}

}  // namespace krein
