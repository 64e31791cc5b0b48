#pragma once

#include "krein/numerics.hpp"
#include "krein/sampling.hpp"

#include <initializer_list>

namespace krein::test {

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = r == 0 ? 0 : static_cast<Index>(rows.begin()->size());
  Matrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Matrix col(std::initializer_list<double> values) {
  Matrix m(static_cast<Index>(values.size()), 1);
  Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

inline Vector unit(Index n, Index i) { return Vector::Unit(n, i); }

inline Matrix diag(std::initializer_list<double> values) {
  Vector d(static_cast<Index>(values.size()));
  Index i = 0;
  for (double v : values) d(i++) = v;
  return d.asDiagonal();
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

struct RawAction {
  Matrix dom;
  Matrix image;
};

// image = S0 * dom for a random PSD S0: always extendible.
inline RawAction planted_action(Index n, Index k, Rng& rng) {
  const Matrix s0 = random_psd(n, uniform_index(0, n, rng), rng);
  const Matrix dom = gaussian(n, k, rng);
  return {dom, s0 * dom};
}

// Form of rank < k on D plus a component of the image outside D on the
// form-null part: symmetric, positive, never extendible. Needs k < n.
inline RawAction obstructed_action(Index n, Index k, Rng& rng) {
  const Matrix q = random_orthonormal(n, n, rng);
  const Matrix qd = q.leftCols(k);
  const Matrix qp = q.rightCols(n - k);
  const Index form_rank = uniform_index(0, k - 1, rng);
  const Matrix f = gaussian(k, form_rank, rng);
  Matrix null_dirs = kernel_of(f.transpose(), ToleranceProfile{}).basis();
  const Matrix leak = gaussian(n - k, null_dirs.cols(), rng) * null_dirs.transpose();
  const Matrix mix = gaussian(k, k, rng) + 3.0 * Matrix::Identity(k, k);
  return {qd * mix, (qd * (f * f.transpose()) + qp * leak) * mix};
}

}  // namespace krein::test
