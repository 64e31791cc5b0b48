#pragma once

#include "krein/numerics.hpp"

#include <optional>

namespace krein {

/// A linear action given on a subspace: column j of `image` is the value on
/// column j of the orthonormal `basis`.
struct OrthonormalAction {
  Matrix basis;
  Matrix image;
};

/// Orthonormalizes a possibly rank-deficient spanning set and carries the
/// image through the same change of coordinates. Throws InconsistentAction
/// when a vanishing combination of the domain vectors has a nonzero image.
OrthonormalAction orthonormalize_action(const Matrix& dom_basis, const Matrix& image,
                                        const ToleranceProfile& tol);

/// A positive symmetric operator known only on a subspace D of R^n.
///
/// The form matrix G = sym(basis^T * image) is the Gram matrix of the energy
/// inner product <Tf, h> restricted to D, written in the orthonormal basis.
class PartialOperator {
 public:
  /// Validates symmetry and positivity of the form. Throws InconsistentAction,
  /// NotSymmetric, NotPositiveForm or ShapeMismatch.
  static PartialOperator make(const Matrix& dom_basis, const Matrix& image,
                              const ToleranceProfile& tol = {});

  Index ambient_dim() const { return basis_.rows(); }
  Index domain_dim() const { return basis_.cols(); }
  const Matrix& dom_basis() const { return basis_; }
  const Matrix& image() const { return image_; }
  const Matrix& gram() const { return gram_; }
  const ToleranceProfile& tol() const { return tol_; }
  /// Reference magnitude for rank decisions on G: the norm of the image.
  double form_scale() const { return scale_; }
  Subspace domain() const { return Subspace(ambient_dim(), basis_); }

 private:
  PartialOperator(Matrix basis, Matrix image, Matrix gram, ToleranceProfile tol)
      : basis_(std::move(basis)),
        image_(std::move(image)),
        gram_(std::move(gram)),
        tol_(tol),
        scale_(spectral_norm(image_)) {}

  Matrix basis_;
  Matrix image_;
  Matrix gram_;
  ToleranceProfile tol_;
  double scale_ = 0.0;
};

inline PartialOperator make_partial(const Matrix& dom_basis, const Matrix& image,
                                    const ToleranceProfile& tol = {}) {
  return PartialOperator::make(dom_basis, image, tol);
}

/// D_*(T) = { g : image^T g lies in ran G }.
Subspace dstar(const PartialOperator& p);

struct ExtensionBound {
  bool exists = false;
  std::optional<double> gamma;  // least gamma with ||Tf||^2 <= gamma <Tf, f>
};

/// Existence of a bounded positive extension: ker G ⊆ ker image, decided at
/// the shared residual tolerance.
ExtensionBound has_bounded_psd_extension(const PartialOperator& p);

struct Theorem1Report {
  bool cond_dstar_dense = false;   // D_*(T) is the whole space
  bool cond_perp_ran = false;      // D_*(T)^⊥ ∩ ran T = {0}
  bool cond_pos_closable = false;  // form-null vectors have null image
  bool all_agree = false;
};

/// Evaluates the three extendibility conditions by independent computations.
Theorem1Report theorem1_report(const PartialOperator& p);

}  // namespace krein
