#include "krein/error.hpp"
#include "krein/numerics.hpp"
#include "krein/sampling.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>

namespace krein {
namespace {

using test::col;
using test::diag;
using test::mat;
using test::max_abs_diff;

const ToleranceProfile kTol{};

TEST(ToleranceProfile, DefaultsAndValidation) {
  EXPECT_EQ(kTol.rank_rel, 1e-10);
  EXPECT_EQ(kTol.psd_slack, 1e-9);
  EXPECT_EQ(kTol.residual, 1e-8);
  EXPECT_NO_THROW(kTol.validate());
  ToleranceProfile bad;
  bad.residual = 0.0;
  EXPECT_THROW(bad.validate(), Error);
  bad.residual = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(bad.validate(), Error);
}

TEST(RankTol, Examples) {
  EXPECT_EQ(rank_tol(Matrix::Identity(3, 3), kTol), 3);
  EXPECT_EQ(rank_tol(Matrix::Zero(2, 2), kTol), 0);
  EXPECT_EQ(rank_tol(mat({{1, 1}, {1, 1}}), kTol), 1);
}

TEST(RankTol, ReferenceScaleSuppressesRoundoff) {
  const Matrix tiny = 1e-14 * Matrix::Identity(2, 2);
  EXPECT_EQ(rank_tol(tiny, kTol), 2);
  EXPECT_EQ(rank_tol(tiny, kTol, 1.0), 0);
}

TEST(Pinv, Examples) {
  EXPECT_LT(max_abs_diff(pinv(diag({2, 0}), kTol), diag({0.5, 0})), 1e-15);
  EXPECT_LT(max_abs_diff(pinv(Matrix::Identity(3, 3), kTol), Matrix::Identity(3, 3)), 1e-15);
  EXPECT_LT(max_abs_diff(pinv(mat({{1, 1}, {1, 1}}), kTol), Matrix::Constant(2, 2, 0.25)), 1e-15);
}

TEST(Pinv, ZeroAndEmpty) {
  EXPECT_EQ(pinv(Matrix::Zero(2, 3), kTol), Matrix::Zero(3, 2));
  EXPECT_EQ(pinv(Matrix(0, 0), kTol).size(), 0);
}

TEST(Pinv, PenroseIdentitiesOnRandomMatrices) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Index r = uniform_index(1, 8, rng);
    const Index c = uniform_index(1, 8, rng);
    const Index rank = uniform_index(0, std::min(r, c), rng);
    const Matrix m = gaussian(r, rank, rng) * gaussian(rank, c, rng);
    const Matrix x = pinv(m, kTol);
    const double s = std::max(spectral_norm(m), 1.0);
    const double si = std::max(spectral_norm(x), 1.0);
    EXPECT_LE(spectral_norm(m * x * m - m), kTol.residual * s);
    EXPECT_LE(spectral_norm(x * m * x - x), kTol.residual * si);
    EXPECT_LE(spectral_norm((m * x).transpose() - m * x), kTol.residual);
    EXPECT_LE(spectral_norm((x * m).transpose() - x * m), kTol.residual);
    EXPECT_EQ(rank_tol(m, kTol), rank);
  }
}

TEST(IsPsd, Examples) {
  EXPECT_TRUE(is_psd(Matrix::Identity(2, 2), kTol));
  EXPECT_FALSE(is_psd(mat({{1, 2}, {2, 1}}), kTol));
  EXPECT_TRUE(is_psd(Matrix::Zero(3, 3), kTol));
}

TEST(IsPsd, SlackIsRelative) {
  EXPECT_TRUE(is_psd(diag({1, -1e-10}), kTol));
  EXPECT_FALSE(is_psd(diag({1, -1e-8}), kTol));
  EXPECT_TRUE(is_psd(diag({1e6, -1e-4}), kTol));
  EXPECT_FALSE(is_psd(diag({1e6, -1e-2}), kTol));
}

TEST(IsPsd, NonSquareThrows) {
  EXPECT_THROW(is_psd(Matrix::Zero(2, 3), kTol), Error);
}

TEST(SqrtPsd, Examples) {
  EXPECT_LT(max_abs_diff(sqrt_psd(diag({4, 9}), kTol), diag({2, 3})), 1e-14);
  EXPECT_LT(max_abs_diff(sqrt_psd(Matrix::Identity(3, 3), kTol), Matrix::Identity(3, 3)), 1e-14);
  EXPECT_LT(max_abs_diff(sqrt_psd(mat({{2, 2}, {2, 2}}), kTol), mat({{1, 1}, {1, 1}})), 1e-14);
}

TEST(SqrtPsd, RejectsIndefinite) {
  try {
    sqrt_psd(mat({{1, 2}, {2, 1}}), kTol);
    FAIL() << "expected NotPSD";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPSD);
  }
}

TEST(SqrtPsd, ClampsSlackNegatives) {
  const Matrix r = sqrt_psd(diag({1, -1e-12}), kTol);
  EXPECT_LT(max_abs_diff(r, diag({1, 0})), 1e-15);
}

TEST(SqrtPsd, SquaresBackOnRandomPsd) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = uniform_index(1, 8, rng);
    const Matrix m = random_psd(n, uniform_index(0, n, rng), rng);
    const Matrix r = sqrt_psd(m, kTol);
    EXPECT_LE(spectral_norm(r * r - m), kTol.residual * std::max(spectral_norm(m), 1.0));
    EXPECT_LE(spectral_norm(r - r.transpose()), 1e-15);
    EXPECT_TRUE(is_psd(r, kTol));
    EXPECT_EQ(rank_tol(r, kTol), rank_tol(m, kTol));
  }
}

TEST(RangeLeq, Examples) {
  EXPECT_TRUE(range_leq(col({1, 0}), Matrix::Identity(2, 2), kTol));
  EXPECT_FALSE(range_leq(col({0, 1}), diag({1, 0}), kTol));
  EXPECT_TRUE(range_leq(mat({{1, 1}, {1, 1}}), col({1, 1}), kTol));
}

TEST(RangeLeq, ShapeMismatchThrows) {
  EXPECT_THROW(range_leq(Matrix::Zero(2, 1), Matrix::Zero(3, 1), kTol), Error);
}

TEST(RangeLeq, ReflexiveTransitiveAndRankConsistent) {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = uniform_index(1, 8, rng);
    const Index rz = uniform_index(0, n, rng);
    const Index ry = uniform_index(0, rz, rng);
    const Index rx = uniform_index(0, ry, rng);
    // Nested ranges by construction: X = Y*A, Y = Z*B.
    const Matrix z = gaussian(n, rz, rng);
    const Matrix y = z * gaussian(rz, ry, rng);
    const Matrix x = y * gaussian(ry, rx, rng);
    EXPECT_TRUE(range_leq(x, x, kTol));
    EXPECT_TRUE(range_leq(x, y, kTol));
    EXPECT_TRUE(range_leq(y, z, kTol));
    EXPECT_TRUE(range_leq(x, z, kTol));
    if (range_leq(z, x, kTol)) {
      EXPECT_EQ(rank_tol(x, kTol), rank_tol(z, kTol));
    }
    if (rank_tol(x, kTol) < rank_tol(z, kTol)) {
      EXPECT_FALSE(range_leq(z, x, kTol));
    }
  }
}

TEST(RangeIntersect, Examples) {
  {
    const std::array<Matrix, 2> ms{Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
    EXPECT_EQ(range_intersect(ms, kTol).dim(), 2);
  }
  {
    const std::array<Matrix, 2> ms{diag({1, 0}), diag({0, 1})};
    EXPECT_EQ(range_intersect(ms, kTol).dim(), 0);
  }
  {
    const std::array<Matrix, 2> ms{Matrix::Identity(2, 2), mat({{1, 1}, {1, 1}})};
    const Subspace s = range_intersect(ms, kTol);
    ASSERT_EQ(s.dim(), 1);
    const Vector v = s.basis().col(0);
    EXPECT_NEAR(std::abs(v(0)), 1.0 / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(v(0), v(1), 1e-14);
  }
}

TEST(RangeIntersect, ContainedInEveryInput) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = uniform_index(2, 8, rng);
    const Index shared = uniform_index(0, n / 2, rng);
    const Matrix common = gaussian(n, shared, rng);
    std::array<Matrix, 3> ms;
    for (Matrix& m : ms) {
      const Index extra = uniform_index(0, n - shared, rng);
      m.resize(n, shared + extra);
      m << common, gaussian(n, extra, rng);
    }
    const Subspace s = range_intersect(ms, kTol);
    EXPECT_GE(s.dim(), shared);
    for (const Matrix& m : ms) EXPECT_TRUE(range_leq(s.basis(), m, kTol));
    EXPECT_TRUE(range_leq(common, s.basis(), kTol));
  }
}

TEST(LoewnerLeq, Examples) {
  EXPECT_TRUE(loewner_leq(diag({1, 1}), diag({2, 1}), kTol));
  EXPECT_FALSE(loewner_leq(diag({2, 0}), diag({1, 1}), kTol));
  const Matrix a = mat({{3, 1}, {1, 2}});
  EXPECT_TRUE(loewner_leq(a, a, kTol));
}

TEST(FormOrderLeq, Examples) {
  EXPECT_TRUE(form_order_leq(Matrix::Zero(2, 2), Matrix::Identity(2, 2), kTol));
  EXPECT_FALSE(form_order_leq(Matrix::Identity(2, 2), Matrix::Zero(2, 2), kTol));
  EXPECT_TRUE(form_order_leq(diag({1, 3}), diag({2, 3}), kTol));
}

TEST(FormOrderLeq, RejectsIndefiniteInput) {
  try {
    form_order_leq(mat({{1, 2}, {2, 1}}), Matrix::Identity(2, 2), kTol);
    FAIL() << "expected NotPSD";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPSD);
  }
}

TEST(FormOrderLeq, AgreesWithLoewnerOnRandomPairs) {
  Rng rng(41);
  int ordered = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = uniform_index(1, 6, rng);
    const Matrix a = random_psd(n, uniform_index(0, n, rng), rng);
    // Half the pairs are ordered by construction.
    const Matrix b = trial % 2 == 0 ? Matrix(a + random_psd(n, uniform_index(0, n, rng), rng))
                                    : random_psd(n, uniform_index(0, n, rng), rng);
    const bool direct = loewner_leq(a, b, kTol);
    ordered += direct ? 1 : 0;
    EXPECT_EQ(direct, form_order_leq(a, b, kTol)) << "trial " << trial;
  }
  EXPECT_GE(ordered, 150);
}

TEST(Subspace, SpanComplementAndProjector) {
  const Subspace s = Subspace::span(mat({{1, 2}, {1, 2}, {0, 0}}), kTol);
  EXPECT_EQ(s.dim(), 1);
  const Subspace perp = s.orthogonal_complement();
  EXPECT_EQ(perp.dim(), 2);
  EXPECT_LT(spectral_norm(s.projector() + perp.projector() - Matrix::Identity(3, 3)), 1e-14);
  EXPECT_EQ(Subspace(4).orthogonal_complement().dim(), 4);
  EXPECT_EQ(Subspace::full(4).orthogonal_complement().dim(), 0);
}

TEST(Subspace, RejectsNonOrthonormalBasis) {
  EXPECT_THROW(Subspace(2, col({1, 1})), Error);
}

TEST(KernelOf, MatchesNullity) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Index r = uniform_index(1, 8, rng);
    const Index c = uniform_index(1, 8, rng);
    const Index rank = uniform_index(0, std::min(r, c), rng);
    const Matrix m = gaussian(r, rank, rng) * gaussian(rank, c, rng);
    const Subspace ker = kernel_of(m, kTol);
    EXPECT_EQ(ker.dim(), c - rank);
    if (ker.dim() > 0) EXPECT_LE(spectral_norm(m * ker.basis()), 1e-10 * std::max(spectral_norm(m), 1.0));
    EXPECT_EQ(range_of(m, kTol).dim(), rank);
  }
}

TEST(Numerics, RejectsNonFinite) {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_FALSE(all_finite(m));
  EXPECT_THROW(require_finite(m, "m"), Error);
}

}  // namespace
}  // namespace krein
