#include "krein/kvn.hpp"

#include "krein/error.hpp"

#include <algorithm>
#include <cmath>

namespace krein {

namespace {

void require_square(const Matrix& s, const PartialOperator& p) {
  if (s.rows() != p.ambient_dim() || s.cols() != p.ambient_dim()) {
    throw Error(ErrorKind::ShapeMismatch, "candidate operator has the wrong size");
  }
  require_finite(s, "candidate operator");
}

void require_extendible(const PartialOperator& p) {
  if (!has_bounded_psd_extension(p).exists) {
    throw Error(ErrorKind::NoExtension, "T has no positive self-adjoint extension");
  }
}

}  // namespace

Matrix kvn_extension(const PartialOperator& p) {
  require_extendible(p);
  const Index n = p.ambient_dim();
  if (p.domain_dim() == 0) return Matrix::Zero(n, n);
  return symmetrize(p.image() * pinv_psd(p.gram(), p.tol(), p.form_scale()) * p.image().transpose());
}

double qform_tn(const PartialOperator& p, const Vector& g) {
  if (g.size() != p.ambient_dim()) throw Error(ErrorKind::ShapeMismatch, "vector has the wrong size");
  require_extendible(p);
  if (p.domain_dim() == 0) return 0.0;
  const Vector v = p.image().transpose() * g;
  return v.dot(pinv_psd(p.gram(), p.tol(), p.form_scale()) * v);
}

bool is_extension(const Matrix& s, const PartialOperator& p) {
  require_square(s, p);
  if (p.domain_dim() == 0) return true;
  const Matrix mismatch = s * p.dom_basis() - p.image();
  return spectral_norm(mismatch) <= p.tol().residual * std::max(spectral_norm(p.image()), 1.0);
}

bool characterize_extension(const Matrix& s, const PartialOperator& p) {
  require_square(s, p);
  if (!is_psd(s, p.tol())) throw Error(ErrorKind::NotPSD, "candidate is not positive");
  const Matrix tn = kvn_extension(p);
  if (!loewner_leq(tn, s, p.tol())) return false;
  if (p.domain_dim() == 0) return true;
  // ||S^{1/2} f||^2 <= <Tf, f> for every f in the domain
  const Matrix compressed = p.dom_basis().transpose() * symmetrize(s) * p.dom_basis();
  return loewner_leq(compressed, p.gram(), p.tol());
}

bool kvn_range_criterion(const Matrix& s, const PartialOperator& p) {
  require_square(s, p);
  if (!is_psd(s, p.tol()) || !is_extension(s, p)) {
    throw Error(ErrorKind::NotExtension, "candidate is not a positive extension");
  }
  const Matrix tn = kvn_extension(p);
  const double scale = std::max(spectral_norm(s), spectral_norm(tn));
  const Matrix root_s = sqrt_psd(s, p.tol(), scale);
  const Matrix root_tn = sqrt_psd(tn, p.tol(), scale);
  const double root_scale = std::sqrt(scale);
  return range_leq(root_s, root_tn, p.tol(), root_scale) &&
         range_leq(root_tn, root_s, p.tol(), root_scale);
}

bool verify_sandwich(const PartialOperator& p, const Matrix& r, const Matrix& s) {
  require_square(r, p);
  require_square(s, p);
  if (!is_psd(r, p.tol()) || !is_extension(r, p)) {
    throw Error(ErrorKind::PreconditionViolated, "upper operator is not a positive extension");
  }
  const Matrix tn = kvn_extension(p);
  if (!is_psd(s, p.tol()) || !loewner_leq(tn, s, p.tol()) || !loewner_leq(s, r, p.tol())) {
    throw Error(ErrorKind::PreconditionViolated, "T_N <= S <= R does not hold");
  }
  return is_extension(s, p);
}

}  // namespace krein
