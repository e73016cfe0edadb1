#include <gtest/gtest.h>

#include "mixgp/design_space.hpp"

using namespace mixgp;

namespace {

DesignSpace mixed_space() {
  return DesignSpace({VariableSpec::continuous("x", -1.0, 3.0), VariableSpec::categorical("shape", {"sq", "ci", "tr"}),
                      VariableSpec::integer("n", 2, 6), VariableSpec::categorical("c", 2)});
}

}  // namespace

TEST(VariableSpec, RejectsBadDomains) {
  EXPECT_THROW(VariableSpec::continuous("x", 1.0, 1.0), InvalidArgument);
  EXPECT_THROW(VariableSpec::integer("z", 3, 2), InvalidArgument);
  EXPECT_THROW(VariableSpec::categorical("c", 1), InvalidArgument);
  EXPECT_THROW(VariableSpec::categorical("c", {"a", "a"}), InvalidArgument);
}

TEST(VariableSpec, NumberedLevels) {
  const auto v = VariableSpec::categorical("c", 13);
  ASSERT_EQ(v.as_categorical().count(), 13);
  EXPECT_EQ(v.as_categorical().levels.front(), "1");
  EXPECT_EQ(v.as_categorical().levels.back(), "13");
}

TEST(DesignSpace, CountsAndSlots) {
  const auto s = mixed_space();
  EXPECT_EQ(s.n_continuous(), 1u);
  EXPECT_EQ(s.n_integer(), 1u);
  EXPECT_EQ(s.n_categorical(), 2u);
  EXPECT_EQ(s.relaxed_categorical_dim(), 5u);
  EXPECT_EQ(s.relaxed_dim(), 7u);
  EXPECT_EQ(s.categorical_index(1), 3u);
  EXPECT_EQ(s.slot(2).kind, VariableKind::Integer);
  EXPECT_EQ((s.level_counts()), (std::vector<int>{3, 2}));
}

TEST(DesignSpace, RejectsEmptyAndDuplicates) {
  EXPECT_THROW(DesignSpace(std::vector<VariableSpec>{}), InvalidArgument);
  EXPECT_THROW(DesignSpace({VariableSpec::continuous("a", 0, 1), VariableSpec::categorical("a", 2)}), InvalidArgument);
}

TEST(ValidatePoint, ReportsOffendingIndex) {
  const auto s = mixed_space();
  MixedPoint p{{0.5}, {3}, {2, 1}};
  EXPECT_NO_THROW(validate_point(s, p));

  p.continuous[0] = 3.5;
  try {
    validate_point(s, p);
    FAIL();
  } catch (const OutOfBounds& e) {
    EXPECT_EQ(e.index(), 0u);
  }

  p = {{0.5}, {3.5}, {2, 1}};
  EXPECT_THROW(validate_point(s, p), OutOfBounds);

  p = {{0.5}, {3}, {2, 3}};
  try {
    validate_point(s, p);
    FAIL();
  } catch (const LevelOutOfRange& e) {
    EXPECT_EQ(e.index(), 3u);
    EXPECT_EQ(e.level(), 3);
  }

  p = {{0.5}, {3}, {2}};
  EXPECT_THROW(validate_point(s, p), DimensionMismatch);
}

TEST(OneHot, EncodeDecodeRoundTrip) {
  const auto s = mixed_space();
  for (int a = 1; a <= 3; ++a) {
    for (int b = 1; b <= 2; ++b) {
      const MixedPoint p{{0.0}, {2}, {a, b}};
      const Eigen::VectorXd e = one_hot_encode(s, p);
      ASSERT_EQ(e.size(), 5);
      EXPECT_DOUBLE_EQ(e.sum(), 2.0);
      EXPECT_EQ(e[a - 1], 1.0);
      EXPECT_EQ(e[3 + b - 1], 1.0);
      EXPECT_EQ(decode_one_hot(s, e), p.categorical);
    }
  }
  EXPECT_THROW(decode_one_hot(s, Eigen::VectorXd::Zero(4)), DimensionMismatch);
}

TEST(Normalize, MapsToUnitAndBack) {
  const auto s = mixed_space();
  const MixedPoint p{{2.0}, {5}, {3, 2}};
  const MixedPoint u = normalize(s, p);
  EXPECT_DOUBLE_EQ(u.continuous[0], 0.75);
  EXPECT_DOUBLE_EQ(u.integer[0], 0.75);
  EXPECT_EQ(u.categorical, p.categorical);
  EXPECT_EQ(denormalize(s, u), p);
}

TEST(Dataset, Validates) {
  const auto s = mixed_space();
  const MixedPoint p{{2.0}, {5}, {3, 2}};
  EXPECT_NO_THROW(Dataset(s, {p}, {1.0}));
  EXPECT_THROW(Dataset(s, {p}, {}), DimensionMismatch);
  EXPECT_THROW(Dataset(s, {}, {}), InvalidArgument);
  EXPECT_THROW(Dataset(s, {p}, {std::nan("")}), InvalidArgument);
  EXPECT_THROW(Dataset(s, {MixedPoint{{9.0}, {5}, {3, 2}}}, {1.0}), OutOfBounds);
}
