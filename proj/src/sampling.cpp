#include "krein/sampling.hpp"

#include <algorithm>

namespace krein {

Matrix gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(rows, cols);
  // Filled in a fixed order so the stream is reproducible.
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
  }
  return out;
}

double uniform(double lo, double hi, Rng& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Index uniform_index(Index lo, Index hi, Rng& rng) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

Matrix random_orthonormal(Index n, Index k, Rng& rng) {
  if (k == 0) return Matrix(n, 0);
  Eigen::HouseholderQR<Matrix> qr(gaussian(n, k, rng));
  Matrix q = qr.householderQ() * Matrix::Identity(n, k);
  // Sign fix makes the distribution Haar.
  const Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Index j = 0; j < k; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Matrix random_psd(Index n, Index rank, Rng& rng) {
  rank = std::clamp<Index>(rank, 0, n);
  if (rank == 0) return Matrix::Zero(n, n);
  const Matrix factor = gaussian(n, rank, rng);
  return symmetrize(factor * factor.transpose() / static_cast<double>(std::max(n, rank)));
}

Matrix random_symmetric(Index n, Rng& rng) { return symmetrize(gaussian(n, n, rng)); }

Vector random_unit(Index n, Rng& rng) {
  Vector v = gaussian(n, 1, rng);
  const double norm = v.norm();
  return norm > 0.0 ? Vector(v / norm) : v;
}

}  // namespace krein
