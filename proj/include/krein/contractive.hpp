#pragma once

#include "krein/partial_op.hpp"

#include <optional>

namespace krein {

/// A symmetric contraction known only on a subspace D.
class ContractivePartial {
 public:
  /// Throws NotSymmetric, NotContraction, InconsistentAction or ShapeMismatch.
  static ContractivePartial make(const Matrix& dom_basis, const Matrix& image,
                                 const ToleranceProfile& tol = {});

  Index ambient_dim() const { return basis_.rows(); }
  Index domain_dim() const { return basis_.cols(); }
  const Matrix& dom_basis() const { return basis_; }
  const Matrix& image() const { return image_; }
  const ToleranceProfile& tol() const { return tol_; }
  Subspace domain() const { return Subspace(ambient_dim(), basis_); }
  double operator_norm_on_D() const { return norm_; }
  /// ||S|| = 1 up to the residual tolerance.
  bool norm_attained() const { return norm_ >= 1.0 - tol_.residual; }
  /// I_k - image^T image, PSD for a contraction.
  Matrix defect() const;

 private:
  ContractivePartial(Matrix basis, Matrix image, double norm, ToleranceProfile tol)
      : basis_(std::move(basis)), image_(std::move(image)), norm_(norm), tol_(tol) {}

  Matrix basis_;
  Matrix image_;
  double norm_;
  ToleranceProfile tol_;
};

struct ExtensionInterval {
  Matrix s_m;  // (I+S)_N - I
  Matrix s_M;  // I - (I-S)_N
};

ExtensionInterval extremal_extensions(const ContractivePartial& c);

struct MembershipReport {
  bool by_norm = false;      // self-adjoint extension with norm <= 1
  bool by_interval = false;  // s_m <= S~ <= s_M
};

MembershipReport interval_membership(const Matrix& s_tilde, const ContractivePartial& c,
                                     const ExtensionInterval& interval);
/// Throws RouteMismatch when the norm route and the interval route disagree.
bool interval_member(const Matrix& s_tilde, const ContractivePartial& c,
                     const ExtensionInterval& interval);
bool interval_member(const Matrix& s_tilde, const ContractivePartial& c);

/// sup { |<Sf, g>|^2 : f in D, ||f||^2 - ||Sf||^2 <= 1 }; +infinity when unbounded.
double sup_qform(const ContractivePartial& c, const Vector& g);

struct UniquenessReport {
  bool by_interval = false;      // s_M == s_m
  bool by_range = false;         // ran(I-S~)^{1/2} ∩ ran(I+S~)^{1/2} ∩ D^⊥ = {0}
  std::optional<bool> by_sup;    // supremum infinite for every nonzero g in D^⊥;
                                 // evaluated only when the norm is attained
  bool unique = false;
};

/// Evaluates every applicable route; throws RouteMismatch if they disagree.
UniquenessReport uniqueness_report(const ContractivePartial& c);
bool uniqueness(const ContractivePartial& c);

}  // namespace krein
