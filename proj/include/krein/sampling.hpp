#pragma once

// Seeded random matrices for instance generation and sampling-based checks.

#include "krein/numerics.hpp"

#include <cstdint>
#include <random>

namespace krein {

using Rng = std::mt19937_64;

Matrix gaussian(Index rows, Index cols, Rng& rng);
double uniform(double lo, double hi, Rng& rng);
Index uniform_index(Index lo, Index hi, Rng& rng);  // inclusive range

/// n x k matrix with orthonormal columns, Haar-distributed.
Matrix random_orthonormal(Index n, Index k, Rng& rng);
/// Random symmetric PSD matrix of the given rank, spectral scale about 1.
Matrix random_psd(Index n, Index rank, Rng& rng);
/// Random symmetric matrix with entries of unit scale.
Matrix random_symmetric(Index n, Rng& rng);
/// Unit vector uniformly distributed on the sphere of R^n.
Vector random_unit(Index n, Rng& rng);

}  // namespace krein
