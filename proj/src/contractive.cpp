#include "krein/contractive.hpp"

#include "krein/error.hpp"
#include "krein/kvn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace krein {

ContractivePartial ContractivePartial::make(const Matrix& dom_basis, const Matrix& image,
                                            const ToleranceProfile& tol) {
  tol.validate();
  OrthonormalAction action = orthonormalize_action(dom_basis, image, tol);
  const Matrix raw = action.basis.transpose() * action.image;
  if (spectral_norm(raw - raw.transpose()) > tol.residual * std::max(spectral_norm(raw), 1.0)) {
    throw Error(ErrorKind::NotSymmetric, "<Sf, g> != <f, Sg> on the domain");
  }
  const Index k = action.basis.cols();
  const Matrix defect = Matrix::Identity(k, k) - action.image.transpose() * action.image;
  if (!is_psd(defect, tol)) {
    throw Error(ErrorKind::NotContraction, "||Sf|| exceeds ||f|| on the domain");
  }
  const double norm = spectral_norm(action.image);
  return ContractivePartial(std::move(action.basis), std::move(action.image), norm, tol);
}

Matrix ContractivePartial::defect() const {
  const Index k = domain_dim();
  return symmetrize(Matrix::Identity(k, k) - image_.transpose() * image_);
}

ExtensionInterval extremal_extensions(const ContractivePartial& c) {
  const Index n = c.ambient_dim();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix& basis = c.dom_basis();
  const PartialOperator plus = make_partial(basis, basis + c.image(), c.tol());
  const PartialOperator minus = make_partial(basis, basis - c.image(), c.tol());
  return {symmetrize(kvn_extension(plus) - id), symmetrize(id - kvn_extension(minus))};
}

MembershipReport interval_membership(const Matrix& s_tilde, const ContractivePartial& c,
                                     const ExtensionInterval& interval) {
  const Index n = c.ambient_dim();
  if (s_tilde.rows() != n || s_tilde.cols() != n) {
    throw Error(ErrorKind::ShapeMismatch, "candidate operator has the wrong size");
  }
  require_finite(s_tilde, "candidate operator");
  const ToleranceProfile& tol = c.tol();
  if (spectral_norm(s_tilde - s_tilde.transpose()) >
      tol.residual * std::max(spectral_norm(s_tilde), 1.0)) {
    throw Error(ErrorKind::NotSymmetric, "candidate operator is not symmetric");
  }
  const Matrix sym = symmetrize(s_tilde);

  MembershipReport report;
  const bool extends =
      c.domain_dim() == 0 ||
      spectral_norm(sym * c.dom_basis() - c.image()) <=
          tol.residual * std::max(spectral_norm(c.image()), 1.0);
  report.by_norm = extends && spectral_norm(sym) <= 1.0 + tol.residual;
  report.by_interval = loewner_leq(interval.s_m, sym, tol) && loewner_leq(sym, interval.s_M, tol);
  return report;
}

bool interval_member(const Matrix& s_tilde, const ContractivePartial& c,
                     const ExtensionInterval& interval) {
  const MembershipReport report = interval_membership(s_tilde, c, interval);
  if (report.by_norm != report.by_interval) {
    throw Error(ErrorKind::RouteMismatch, "norm route and interval route disagree on membership");
  }
  return report.by_interval;
}

bool interval_member(const Matrix& s_tilde, const ContractivePartial& c) {
  return interval_member(s_tilde, c, extremal_extensions(c));
}

namespace {

// Component of image^T g outside ran M, M = I - image^T image.
Matrix unbounded_part(const ContractivePartial& c, const Matrix& defect_pinv, const Matrix& g) {
  const Index k = c.domain_dim();
  const Matrix defect = c.defect();
  const Matrix off_range = Matrix::Identity(k, k) - defect * defect_pinv;
  return off_range * (c.image().transpose() * g);
}

}  // namespace

double sup_qform(const ContractivePartial& c, const Vector& g) {
  if (g.size() != c.ambient_dim()) throw Error(ErrorKind::ShapeMismatch, "vector has the wrong size");
  if (c.domain_dim() == 0) return 0.0;
  const Matrix defect_pinv = pinv_psd(c.defect(), c.tol(), 1.0);
  const Vector outside = unbounded_part(c, defect_pinv, g);
  if (outside.norm() > c.tol().rank_rel * g.norm()) {
    return std::numeric_limits<double>::infinity();
  }
  const Vector v = c.image().transpose() * g;
  return v.dot(defect_pinv * v);
}

UniquenessReport uniqueness_report(const ContractivePartial& c) {
  const Index n = c.ambient_dim();
  const Index k = c.domain_dim();
  const ToleranceProfile& tol = c.tol();
  const Matrix id = Matrix::Identity(n, n);
  UniquenessReport report;

  const ExtensionInterval interval = extremal_extensions(c);
  report.by_interval = spectral_norm(interval.s_M - interval.s_m) <= tol.residual;

  const Matrix mid = 0.5 * (interval.s_m + interval.s_M);
  const Subspace complement = c.domain().orthogonal_complement();
  const std::array<Matrix, 3> parts{sqrt_psd(id - mid, tol, 1.0), sqrt_psd(id + mid, tol, 1.0),
                                    complement.projector()};
  report.by_range = range_intersect(parts, tol, 1.0).dim() == 0;

  if (c.norm_attained()) {
    // g in D^⊥ has a finite supremum iff image^T g lies in ran M; these g
    // form the kernel of the map below.
    const Matrix defect_pinv = pinv_psd(c.defect(), tol, 1.0);
    const Matrix& q_perp = complement.basis();
    const Matrix finite_map = unbounded_part(c, defect_pinv, q_perp);
    const Subspace finite = kernel_of(finite_map, tol, 1.0);
    const bool by_sup = n - k == 0 || finite.dim() == 0;

    // Pointwise evaluation must agree with the subspace verdict.
    bool pointwise = true;
    if (by_sup) {
      for (Index j = 0; j < q_perp.cols(); ++j) {
        pointwise = pointwise && std::isinf(sup_qform(c, q_perp.col(j)));
      }
    } else if (n - k > 0) {
      const Vector witness = q_perp * finite.basis().col(0);
      pointwise = std::isfinite(sup_qform(c, witness));
    }
    if (!pointwise) {
      throw Error(ErrorKind::RouteMismatch, "supremum test disagrees with its subspace form");
    }
    report.by_sup = by_sup;
  }

  const bool agree = report.by_interval == report.by_range &&
                     (!report.by_sup || *report.by_sup == report.by_interval);
  if (!agree) {
    throw Error(ErrorKind::RouteMismatch, "uniqueness routes disagree");
  }
  report.unique = report.by_interval;
  return report;
}

bool uniqueness(const ContractivePartial& c) { return uniqueness_report(c).unique; }

}  // namespace krein
