#include "krein/contractive.hpp"
#include "krein/error.hpp"
#include "krein/verification.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace krein {
namespace {

using test::col;
using test::diag;
using test::mat;
using test::max_abs_diff;

const ContractivePartial kIdentityOnE1 = ContractivePartial::make(col({1, 0}), col({1, 0}));
const ContractivePartial kFlip = ContractivePartial::make(col({1, 0}), col({0, 1}));
const ContractivePartial kHalfFlip = ContractivePartial::make(col({1, 0}), col({0, 0.5}));

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::ParseError;
}

TEST(ContractivePartial, Validation) {
  EXPECT_EQ(kind_of([] { ContractivePartial::make(col({1, 0}), col({1.5, 0})); }),
            ErrorKind::NotContraction);
  EXPECT_EQ(kind_of([] { ContractivePartial::make(Matrix::Identity(2, 2), mat({{0, 0}, {1, 0}})); }),
            ErrorKind::NotSymmetric);
  EXPECT_EQ(kind_of([] { ContractivePartial::make(mat({{1, 1}, {0, 0}}), mat({{1, 0}, {0, 0}})); }),
            ErrorKind::InconsistentAction);
  EXPECT_NEAR(kFlip.operator_norm_on_D(), 1.0, 1e-15);
  EXPECT_TRUE(kFlip.norm_attained());
  EXPECT_NEAR(kHalfFlip.operator_norm_on_D(), 0.5, 1e-15);
  EXPECT_FALSE(kHalfFlip.norm_attained());
}

TEST(ExtremalExtensions, Examples) {
  const ExtensionInterval a = extremal_extensions(kIdentityOnE1);
  EXPECT_LT(max_abs_diff(a.s_m, diag({1, -1})), 1e-15);
  EXPECT_LT(max_abs_diff(a.s_M, diag({1, 1})), 1e-15);

  const ExtensionInterval b = extremal_extensions(kFlip);
  EXPECT_LT(max_abs_diff(b.s_m, mat({{0, 1}, {1, 0}})), 1e-15);
  EXPECT_LT(max_abs_diff(b.s_M, mat({{0, 1}, {1, 0}})), 1e-15);

  const ExtensionInterval c = extremal_extensions(kHalfFlip);
  EXPECT_LT(max_abs_diff(c.s_m, mat({{0, 0.5}, {0.5, -0.75}})), 1e-15);
  EXPECT_LT(max_abs_diff(c.s_M, mat({{0, 0.5}, {0.5, 0.75}})), 1e-15);
}

TEST(IntervalMember, Examples) {
  EXPECT_TRUE(interval_member(diag({1, 0.3}), kIdentityOnE1));
  EXPECT_FALSE(interval_member(diag({1, 1.5}), kIdentityOnE1));
  const ExtensionInterval i = extremal_extensions(kIdentityOnE1);
  EXPECT_TRUE(interval_member(0.5 * (i.s_m + i.s_M), kIdentityOnE1, i));
}

TEST(IntervalMember, RejectsNonSymmetricAndWrongShape) {
  EXPECT_EQ(kind_of([] { interval_member(mat({{1, 1}, {0, 0}}), kIdentityOnE1); }),
            ErrorKind::NotSymmetric);
  EXPECT_EQ(kind_of([] { interval_member(Matrix::Identity(3, 3), kIdentityOnE1); }),
            ErrorKind::ShapeMismatch);
}

TEST(SupQform, Examples) {
  EXPECT_TRUE(std::isinf(sup_qform(kFlip, test::unit(2, 1))));
  EXPECT_NEAR(sup_qform(kIdentityOnE1, test::unit(2, 1)), 0.0, 1e-15);
  const ContractivePartial half = ContractivePartial::make(col({1, 0}), col({0.5, 0}));
  EXPECT_NEAR(sup_qform(half, test::unit(2, 0)), 1.0 / 3.0, 1e-15);
}

TEST(SupQform, MatchesBruteForceOnFiniteCase) {
  // sup |<Sf, g>|^2 over ||f||^2 - ||Sf||^2 <= 1, f = c e1, for S e1 = 0.5 e1.
  const ContractivePartial half = ContractivePartial::make(col({1, 0}), col({0.5, 0}));
  double best = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double c = i * 1e-4;
    if (c * c * 0.75 <= 1.0) best = std::max(best, 0.25 * c * c);
  }
  EXPECT_NEAR(sup_qform(half, test::unit(2, 0)), best, 1e-6);
}

TEST(Uniqueness, Examples) {
  EXPECT_TRUE(uniqueness(kFlip));
  EXPECT_FALSE(uniqueness(kIdentityOnE1));
  EXPECT_TRUE(uniqueness(ContractivePartial::make(Matrix::Identity(3, 3), diag({1, -0.5, 0.2}))));

  const UniquenessReport flip = uniqueness_report(kFlip);
  EXPECT_TRUE(flip.by_interval && flip.by_range && flip.by_sup.value_or(false));
  const UniquenessReport id = uniqueness_report(kIdentityOnE1);
  EXPECT_FALSE(id.by_interval || id.by_range || id.by_sup.value_or(true));
}

TEST(Uniqueness, StrictContractionSkipsSupremumRoute) {
  const UniquenessReport r = uniqueness_report(kHalfFlip);
  EXPECT_FALSE(r.by_sup.has_value());
  EXPECT_FALSE(r.unique);
}

struct RandomContraction {
  Matrix full;  // a norm-one symmetric extension, planted
  ContractivePartial partial;
};

RandomContraction random_contraction(Rng& rng, bool attain) {
  const Index n = uniform_index(2, 8, rng);
  const Index k = uniform_index(1, n, rng);
  const Matrix q = random_orthonormal(n, n, rng);
  Vector eig(n);
  for (Index i = 0; i < n; ++i) {
    eig(i) = uniform(0.0, 1.0, rng) < 0.5 ? (uniform(0.0, 1.0, rng) < 0.5 ? 1.0 : -1.0)
                                          : uniform(-1.0, 1.0, rng);
  }
  if (attain) {
    // The top eigenvector is put in D so the norm is attained there.
    eig(0) = uniform(0.0, 1.0, rng) < 0.5 ? 1.0 : -1.0;
  } else {
    eig *= 0.8;
  }
  const Matrix full = symmetrize(q * eig.asDiagonal() * q.transpose());
  Matrix dom = gaussian(n, k, rng);
  if (attain) dom.col(0) = q.col(0);
  return {full, ContractivePartial::make(dom, full * dom)};
}

TEST(Contractions, IntervalContainsPlantedExtensionAndIsOrdered) {
  Rng rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const RandomContraction rc = random_contraction(rng, trial % 3 != 0);
    const ContractivePartial& c = rc.partial;
    const ExtensionInterval i = extremal_extensions(c);
    const ToleranceProfile& tol = c.tol();
    const double res = 1e-8 * std::max(spectral_norm(c.image()), 1.0);
    EXPECT_LE(spectral_norm(i.s_m * c.dom_basis() - c.image()), res) << trial;
    EXPECT_LE(spectral_norm(i.s_M * c.dom_basis() - c.image()), res) << trial;
    EXPECT_LE(spectral_norm(i.s_m), 1.0 + 1e-8) << trial;
    EXPECT_LE(spectral_norm(i.s_M), 1.0 + 1e-8) << trial;
    EXPECT_TRUE(loewner_leq(i.s_m, i.s_M, tol)) << trial;
    const MembershipReport m = interval_membership(rc.full, c, i);
    EXPECT_TRUE(m.by_norm) << trial;
    EXPECT_TRUE(m.by_interval) << trial;
    if (c.norm_attained()) {
      EXPECT_NEAR(spectral_norm(i.s_m), 1.0, 1e-8) << trial;
      EXPECT_NEAR(spectral_norm(i.s_M), 1.0, 1e-8) << trial;
    }
  }
}

TEST(Contractions, UniquenessRoutesAgree) {
  Rng rng(67);
  int unique = 0;
  int attained = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const RandomContraction rc = random_contraction(rng, trial % 5 != 0);
    const UniquenessReport r = uniqueness_report(rc.partial);
    EXPECT_EQ(r.by_interval, r.by_range) << trial;
    if (r.by_sup) {
      ++attained;
      EXPECT_EQ(*r.by_sup, r.by_interval) << trial;
    }
    unique += r.unique ? 1 : 0;
  }
  EXPECT_GT(unique, 0);
  EXPECT_GT(attained, 300);
}

TEST(Contractions, VerificationChecksPass) {
  Rng rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    const RandomContraction rc = random_contraction(rng, trial % 4 != 0);
    const CheckList checks = verify_contraction(rc.partial, rng, SampleBudget{10});
    for (const OracleCheck& check : checks) {
      EXPECT_TRUE(check.passed) << trial << ' ' << check.name << ' ' << check.discrepancy;
    }
  }
}

}  // namespace
}  // namespace krein
