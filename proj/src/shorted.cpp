#include "krein/shorted.hpp"

#include "krein/error.hpp"
#include "krein/kvn.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace krein {

namespace {

void require_psd_square(const Matrix& s, const ToleranceProfile& tol, const char* what) {
  if (s.rows() != s.cols()) throw Error(ErrorKind::ShapeMismatch, std::string(what) + " is not square");
  require_finite(s, what);
  if (!is_psd(s, tol)) throw Error(ErrorKind::NotPSD, std::string(what) + " is not positive semidefinite");
}

void require_ambient(const Subspace& d, Index n) {
  if (d.ambient_dim() != n) throw Error(ErrorKind::ShapeMismatch, "subspace lives in another space");
}

}  // namespace

ShortedResult short_to(const Matrix& s, const Subspace& d, const ToleranceProfile& tol) {
  require_psd_square(s, tol, "operator");
  require_ambient(d, s.rows());
  const Matrix sym = symmetrize(s);
  const PartialOperator restricted = make_partial(d.basis(), sym * d.basis(), tol);
  Matrix kvn_part = kvn_extension(restricted);
  Matrix shorted = symmetrize(sym - kvn_part);
  return {std::move(shorted), std::move(kvn_part), d};
}

double shorted_qform_infimum(const Matrix& s, const Subspace& d, const Vector& h,
                             const ToleranceProfile& tol) {
  require_ambient(d, s.rows());
  if (h.size() != s.rows()) throw Error(ErrorKind::ShapeMismatch, "vector has the wrong size");
  const Matrix sym = symmetrize(s);
  const Matrix& b = d.basis();
  Vector best = h;
  if (d.dim() > 0) {
    const Matrix restricted = b.transpose() * sym * b;
    const Vector c = -pinv_psd(restricted, tol, spectral_norm(sym)) * (b.transpose() * sym * h);
    best += b * c;
  }
  return best.dot(sym * best);
}

double shorted_qform(const Matrix& s, const Subspace& d, const Vector& h,
                     const ToleranceProfile& tol) {
  const ShortedResult shorted = short_to(s, d, tol);
  if (h.size() != s.rows()) throw Error(ErrorKind::ShapeMismatch, "vector has the wrong size");
  const double value = h.dot(shorted.shorted * h);
  const double infimum = shorted_qform_infimum(s, d, h, tol);
  const double scale = std::max(spectral_norm(s) * h.squaredNorm(), 1e-300);
  if (std::abs(value - infimum) > 1e-8 * scale) {
    throw Error(ErrorKind::OracleMismatch, "shorted quadratic form disagrees with its infimum");
  }
  return value;
}

Subspace shorted_root_range(const Matrix& s, const Subspace& d, const ToleranceProfile& tol) {
  const ShortedResult shorted = short_to(s, d, tol);
  const double scale = spectral_norm(s);
  const double root_scale = std::sqrt(scale);
  const Matrix root = sqrt_psd(shorted.shorted, tol, scale);
  Subspace direct = range_of(root, tol, root_scale);

  const std::array<Matrix, 2> parts{sqrt_psd(s, tol), d.orthogonal_complement().projector()};
  const Subspace intersected = range_intersect(parts, tol, root_scale);

  const bool agree = direct.dim() == intersected.dim() &&
                     range_leq(direct.basis(), intersected.basis(), tol) &&
                     range_leq(intersected.basis(), direct.basis(), tol);
  if (!agree) {
    throw Error(ErrorKind::RangeIdentityViolated,
                "ran (S - T_N)^{1/2} differs from ran S^{1/2} ∩ D^⊥");
  }
  return direct;
}

Matrix schur_oracle(const Matrix& s, Index p, const ToleranceProfile& tol) {
  require_psd_square(s, tol, "operator");
  const Index n = s.rows();
  if (p < 0 || p > n) throw Error(ErrorKind::ShapeMismatch, "block size out of range");
  const Matrix sym = symmetrize(s);
  const Index q = n - p;
  Matrix out = Matrix::Zero(n, n);
  const Matrix a = sym.topLeftCorner(p, p);
  const Matrix b = sym.topRightCorner(p, q);
  const Matrix c = sym.bottomRightCorner(q, q);
  out.bottomRightCorner(q, q) = symmetrize(c - b.transpose() * pinv(a, tol, spectral_norm(sym)) * b);
  return out;
}

bool shorted_monotone_floor(const Matrix& s, const Matrix& t, const Subspace& d,
                            const ToleranceProfile& tol) {
  if (s.rows() != t.rows() || s.cols() != t.cols() || s.rows() != s.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "operators differ in shape");
  }
  require_ambient(d, s.rows());
  if (!is_psd(s, tol) || !is_psd(t, tol) || !loewner_leq(s, t, tol)) {
    throw Error(ErrorKind::PreconditionViolated, "need 0 <= S <= T");
  }
  if (!range_leq(s, d.orthogonal_complement().projector(), tol)) {
    throw Error(ErrorKind::PreconditionViolated, "ran S must lie in the orthogonal complement of D");
  }
  return loewner_leq(s, short_to(t, d, tol).shorted, tol);
}

MonotoneReport kvn_monotone_report(const PartialOperator& ps, const PartialOperator& pt) {
  const ToleranceProfile& tol = ps.tol();
  if (ps.ambient_dim() != pt.ambient_dim() || ps.domain_dim() != pt.domain_dim() ||
      spectral_norm(ps.domain().projector() - pt.domain().projector()) > tol.residual) {
    throw Error(ErrorKind::DomainMismatch, "operators are defined on different subspaces");
  }
  const Matrix sn = kvn_extension(ps);
  const Matrix tn = kvn_extension(pt);

  MonotoneReport report;
  // Gram of T in the coordinates of the domain basis of S.
  const Matrix change = ps.dom_basis().transpose() * pt.dom_basis();
  const Matrix t_gram = symmetrize(change * pt.gram() * change.transpose());
  report.form_dominance = loewner_leq(ps.gram(), t_gram, tol);

  const double scale = std::max({spectral_norm(sn), spectral_norm(tn), 0.0});
  const double root_scale = std::sqrt(scale);
  report.range_inclusion =
      range_leq(sqrt_psd(sn, tol, scale), sqrt_psd(tn, tol, scale), tol, root_scale);

  report.loewner = loewner_leq(sn, tn, tol);
  if (report.holds() != report.loewner) {
    throw Error(ErrorKind::OracleMismatch,
                "form dominance with range inclusion disagrees with S_N <= T_N");
  }
  return report;
}

bool kvn_monotone_check(const PartialOperator& ps, const PartialOperator& pt) {
  return kvn_monotone_report(ps, pt).holds();
}

}  // namespace krein
