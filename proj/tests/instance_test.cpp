#include "krein/contractive.hpp"
#include "krein/error.hpp"
#include "krein/instance.hpp"
#include "krein/partial_op.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <sstream>

namespace krein {
namespace {

ErrorKind parse_error_kind(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "parsed:\n" << text;
  return ErrorKind::ShapeMismatch;
}

TEST(ParseInstance, CounterexampleFile) {
  const Instance inst = parse_instance(
      "# positive operator on span e1\n"
      "kind positive\n"
      "dim 2\n"
      "domain 1\n"
      "1 0\n"
      "image 1\n"
      "1 1   # trailing comment\n"
      "\n"
      "tol_residual 1e-7\n"
      "seed 42\n");
  EXPECT_EQ(inst.kind.value(), "positive");
  EXPECT_EQ(inst.dim, 2);
  ASSERT_TRUE(inst.domain && inst.image);
  // Row-listed vectors become columns.
  EXPECT_EQ(inst.domain->rows(), 2);
  EXPECT_EQ(inst.domain->cols(), 1);
  EXPECT_EQ((*inst.image)(1, 0), 1.0);
  EXPECT_EQ(inst.tolerances.residual.value(), 1e-7);
  EXPECT_FALSE(inst.tolerances.rank_rel.has_value());
  EXPECT_EQ(inst.seed.value(), 42u);
}

TEST(ParseInstance, FullOperatorAndEquation) {
  const Instance inst = parse_instance(
      "dim 2\n"
      "full_operator 2 2\n"
      "2 1\n"
      "1 1\n"
      "equation_a 2 1\n"
      "1\n"
      "0\n"
      "equation_b 2 1\n"
      "3\n"
      "0\n");
  ASSERT_TRUE(inst.full_operator && inst.equation);
  EXPECT_EQ((*inst.full_operator)(0, 1), 1.0);
  EXPECT_EQ(inst.equation->a.cols(), 1);
  EXPECT_EQ(inst.equation->b(0, 0), 3.0);
}

TEST(ParseInstance, Rejections) {
  EXPECT_EQ(parse_error_kind("dim 2\nbogus 1\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind("dim 2\ndim 2\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind("domain 1\n1 0\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind("dim 2\ndomain 1\n1 nan\nimage 1\n1 0\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind("dim 2\ndomain 1\n1 inf\nimage 1\n1 0\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind("dim 2\ndomain 1\n1 0 0\nimage 1\n1 0\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind("dim 2\ndomain 1\n1 0\nimage 2\n1 0\n0 1\n"), ErrorKind::BadShape);
  EXPECT_EQ(parse_error_kind("dim 2\ndomain 1\n1 0\n"), ErrorKind::MissingSection);
  EXPECT_EQ(parse_error_kind("dim 2\ndomain 2\n1 0\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind("dim 2\nfull_operator 2 3\n1 0 0\n0 1 0\n"), ErrorKind::BadShape);
  EXPECT_EQ(parse_error_kind("dim 2\ntol_rank -1\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind("dim 2\nseed -3\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind("dim 2\nkind hermitian\n"), ErrorKind::ParseError);
  EXPECT_EQ(parse_error_kind(""), ErrorKind::MissingSection);
  EXPECT_EQ(parse_error_kind("dim 1\nimage 1\n1\n"), ErrorKind::MissingSection);
}

TEST(ParseInstance, DomainWithFullOperatorNeedsNoImage) {
  const Instance inst = parse_instance("dim 2\ndomain 1\n1 0\nfull_operator 2 2\n2 1\n1 1\n");
  EXPECT_FALSE(inst.image.has_value());
  EXPECT_EQ(write_instance(parse_instance(write_instance(inst))), write_instance(inst));
}

TEST(WriteInstance, RoundTripsExactly) {
  for (const InstanceKind kind : {InstanceKind::Positive, InstanceKind::Contraction,
                                  InstanceKind::PsdFull, InstanceKind::Equation}) {
    const Instance inst = gen_instance(kind, 5, 3, 9);
    const std::string text = write_instance(inst);
    const Instance back = parse_instance(text);
    EXPECT_EQ(write_instance(back), text);
    if (inst.image) EXPECT_EQ(*back.image, *inst.image);
  }
}

TEST(FormatDouble, SeventeenDigitsAndNormalizedZero) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(2.0), "2");
  const double third = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_double(third)), third);
}

TEST(ToleranceFile, OnlyToleranceKeys) {
  const ToleranceOverrides t = parse_tolerance_file("tol_rank 1e-12\n# comment\ntol_psd 1e-8\n");
  EXPECT_EQ(t.rank_rel.value(), 1e-12);
  EXPECT_EQ(t.psd_slack.value(), 1e-8);
  EXPECT_FALSE(t.residual.has_value());
  EXPECT_THROW(parse_tolerance_file("dim 3\n"), Error);
  const ToleranceProfile applied = t.apply({});
  EXPECT_EQ(applied.rank_rel, 1e-12);
  EXPECT_EQ(applied.residual, 1e-8);
}

TEST(GenInstance, DeterministicBytes) {
  EXPECT_EQ(write_instance(gen_instance(InstanceKind::Positive, 4, 2, 7)),
            write_instance(gen_instance(InstanceKind::Positive, 4, 2, 7)));
  EXPECT_NE(write_instance(gen_instance(InstanceKind::Positive, 4, 2, 7)),
            write_instance(gen_instance(InstanceKind::Positive, 4, 2, 8)));
}

TEST(GenInstance, ContractionValidates) {
  const Instance inst = gen_instance(InstanceKind::Contraction, 3, 1, 1);
  EXPECT_NO_THROW(ContractivePartial::make(*inst.domain, *inst.image));
}

TEST(GenInstance, DegeneratePositiveIsObstructed) {
  const Instance inst = gen_instance(InstanceKind::Positive, 2, 1, 0, true);
  const PartialOperator p = make_partial(*inst.domain, *inst.image);
  EXPECT_FALSE(has_bounded_psd_extension(p).exists);
}

TEST(GenInstance, ShapeLimits) {
  EXPECT_THROW(gen_instance(InstanceKind::Positive, 0, 0, 1), Error);
  EXPECT_THROW(gen_instance(InstanceKind::Positive, 3, 4, 1), Error);
  EXPECT_THROW(gen_instance(InstanceKind::Positive, 65, 1, 1), Error);
  EXPECT_THROW(gen_instance(InstanceKind::Positive, 3, 3, 1, true), Error);
  EXPECT_THROW(gen_instance(InstanceKind::Contraction, 3, 1, 1, true), Error);
  EXPECT_NO_THROW(gen_instance(InstanceKind::Positive, 64, 64, 1));
}

TEST(GenInstance, KindNames) {
  for (const InstanceKind kind : {InstanceKind::Positive, InstanceKind::Contraction,
                                  InstanceKind::PsdFull, InstanceKind::Equation}) {
    EXPECT_EQ(parse_kind(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_kind("nope"), Error);
}

TEST(ReadInstance, FromStream) {
  std::istringstream in("dim 1\ndomain 1\n1\nimage 1\n2\n");
  const Instance inst = read_instance(in);
  EXPECT_EQ((*inst.image)(0, 0), 2.0);
}

}  // namespace
}  // namespace krein
