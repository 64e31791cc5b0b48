#include "krein/partial_op.hpp"

#include "krein/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace krein {

namespace {

double residual_bound(const Matrix& reference, const ToleranceProfile& tol) {
  return tol.residual * std::max(spectral_norm(reference), 1.0);
}

}  // namespace

OrthonormalAction orthonormalize_action(const Matrix& dom_basis, const Matrix& image,
                                        const ToleranceProfile& tol) {
  if (dom_basis.rows() != image.rows() || dom_basis.cols() != image.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "domain and image must have the same shape");
  }
  require_finite(dom_basis, "domain basis");
  require_finite(image, "image");
  const Index n = dom_basis.rows();
  if (dom_basis.cols() == 0) return {Matrix(n, 0), Matrix(n, 0)};

  Eigen::JacobiSVD<Matrix> svd(dom_basis, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  Index r = 0;
  if (s(0) > 0.0) {
    while (r < s.size() && s(r) > tol.rank_rel * s(0)) ++r;
  }
  const Matrix& v = svd.matrixV();
  const Index k = dom_basis.cols();
  if (r < k) {
    const Matrix null_image = image * v.rightCols(k - r);
    if (spectral_norm(null_image) > residual_bound(image, tol)) {
      throw Error(ErrorKind::InconsistentAction,
                  "a vanishing combination of domain vectors has a nonzero image");
    }
  }
  Matrix basis = svd.matrixU().leftCols(r);
  Matrix mapped = image * v.leftCols(r) * s.head(r).cwiseInverse().asDiagonal();
  return {std::move(basis), std::move(mapped)};
}

PartialOperator PartialOperator::make(const Matrix& dom_basis, const Matrix& image,
                                      const ToleranceProfile& tol) {
  tol.validate();
  OrthonormalAction action = orthonormalize_action(dom_basis, image, tol);
  const Matrix raw = action.basis.transpose() * action.image;
  if (spectral_norm(raw - raw.transpose()) > residual_bound(raw, tol)) {
    throw Error(ErrorKind::NotSymmetric, "<Tf, g> != <f, Tg> on the domain");
  }
  Matrix gram = symmetrize(raw);
  if (!is_psd(gram, tol)) {
    throw Error(ErrorKind::NotPositiveForm, "<Tf, f> takes negative values on the domain");
  }
  return PartialOperator(std::move(action.basis), std::move(action.image), std::move(gram), tol);
}

Subspace dstar(const PartialOperator& p) {
  const Index n = p.ambient_dim();
  const Index k = p.domain_dim();
  if (k == 0) return Subspace::full(n);
  const Matrix& g = p.gram();
  const Matrix off_range = Matrix::Identity(k, k) - g * pinv_psd(g, p.tol(), p.form_scale());
  const Matrix constraint = off_range * p.image().transpose();
  return kernel_of(constraint, p.tol(), spectral_norm(p.image()));
}

namespace {

// Eigenvectors of G whose eigenvalues fall under the shared rank cutoff.
Matrix form_null_directions(const Matrix& gram, const ToleranceProfile& tol, double scale) {
  const Index k = gram.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const Vector& lambda = eig.eigenvalues();
  const double top = std::max(lambda(k - 1), scale);
  Index nulls = 0;
  while (nulls < k && lambda(nulls) <= tol.rank_rel * top) ++nulls;
  return eig.eigenvectors().leftCols(nulls);
}

bool form_null_has_null_image(const PartialOperator& p) {
  if (p.domain_dim() == 0) return true;
  const Matrix nulls = form_null_directions(p.gram(), p.tol(), p.form_scale());
  if (nulls.cols() == 0) return true;
  return spectral_norm(p.image() * nulls) <= residual_bound(p.image(), p.tol());
}

}  // namespace

ExtensionBound has_bounded_psd_extension(const PartialOperator& p) {
  if (!form_null_has_null_image(p)) return {false, std::nullopt};
  if (p.domain_dim() == 0) return {true, 0.0};
  // gamma = lambda_max(G^{+1/2} image^T image G^{+1/2}) = ||image G^{+1/2}||^2
  const Matrix root_pinv = sqrt_psd(pinv_psd(p.gram(), p.tol(), p.form_scale()), p.tol());
  const double norm = spectral_norm(p.image() * root_pinv);
  return {true, norm * norm};
}

Theorem1Report theorem1_report(const PartialOperator& p) {
  const Index n = p.ambient_dim();
  Theorem1Report report;

  const Subspace dense = dstar(p);
  report.cond_dstar_dense = dense.dim() == n;

  const std::array<Matrix, 2> ranges{dense.orthogonal_complement().projector(), p.image()};
  report.cond_perp_ran = range_intersect(ranges, p.tol(), 1.0).dim() == 0;

  report.cond_pos_closable = form_null_has_null_image(p);

  report.all_agree = report.cond_dstar_dense == report.cond_perp_ran &&
                     report.cond_perp_ran == report.cond_pos_closable;
  return report;
}

}  // namespace krein
