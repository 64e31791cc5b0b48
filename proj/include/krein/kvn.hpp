#pragma once

#include "krein/partial_op.hpp"

namespace krein {

/// Smallest positive self-adjoint extension, image * G^+ * image^T.
/// Throws NoExtension if T has no positive extension.
Matrix kvn_extension(const PartialOperator& p);

/// ||T_N^{1/2} g||^2 computed from the energy form, v^T G^+ v with v = image^T g.
double qform_tn(const PartialOperator& p, const Vector& g);

/// S agrees with T on its domain.
bool is_extension(const Matrix& s, const PartialOperator& p);

/// T_N <= S and ||S^{1/2} f||^2 <= <Tf, f> on the domain. Throws NotPSD.
bool characterize_extension(const Matrix& s, const PartialOperator& p);

/// ran T_N^{1/2} == ran S^{1/2} for a positive extension S.
/// Throws NotExtension if S is not one.
bool kvn_range_criterion(const Matrix& s, const PartialOperator& p);

/// For T_N <= S <= R with R a positive extension, S itself extends T.
/// Throws PreconditionViolated if the sandwich does not hold.
bool verify_sandwich(const PartialOperator& p, const Matrix& r, const Matrix& s);

}  // namespace krein
