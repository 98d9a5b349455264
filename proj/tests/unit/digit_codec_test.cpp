// SPDX-License-Identifier: Apache-2.0

#include "baire/digit_codec.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "baire/error.hpp"
#include "oracles.hpp"

namespace baire {
namespace {

BaireParams decimal(std::uint32_t precision, Rounding rounding = Rounding::kTruncate) {
  return {10, precision, rounding};
}

std::vector<Digit> digits(std::initializer_list<Digit> d) { return d; }

TEST(Encode, ReadsDecimalPlaces) {
  const auto x = encode(0.478, decimal(3));
  EXPECT_EQ(x.sign(), 1);
  EXPECT_EQ(x.int_digits(), digits({0}));
  EXPECT_EQ(x.frac_digits, digits({4, 7, 8}));
}

TEST(Encode, ZeroIsAllZeroDigits) {
  const auto x = encode(0.0, decimal(3));
  EXPECT_EQ(x.sign(), 1);
  EXPECT_EQ(x.int_digits(), digits({0}));
  EXPECT_EQ(x.frac_digits, digits({0, 0, 0}));
  EXPECT_EQ(encode(-0.0, decimal(3)), x);
}

TEST(Encode, TruncatesExtraDigits) {
  EXPECT_EQ(encode(0.4376, decimal(3)).frac_digits, digits({4, 3, 7}));
}

TEST(Encode, PadsShortValuesWithZeros) {
  EXPECT_EQ(encode(0.4, decimal(3)), encode(0.400, decimal(3)));
  EXPECT_EQ(encode(0.4, decimal(3)).frac_digits, digits({4, 0, 0}));
}

TEST(Encode, RoundHalfEven) {
  const auto p = decimal(3, Rounding::kRoundHalfEven);
  EXPECT_EQ(encode(0.4376, p).frac_digits, digits({4, 3, 8}));
  EXPECT_EQ(encode(0.4374, p).frac_digits, digits({4, 3, 7}));
  EXPECT_EQ(encode(0.4375, p).frac_digits, digits({4, 3, 8}));  // tie, 7 is odd
  EXPECT_EQ(encode(0.4385, p).frac_digits, digits({4, 3, 8}));  // tie, 8 is even
  EXPECT_EQ(encode(0.43850001, p).frac_digits, digits({4, 3, 9}));
  const auto carried = encode(0.9996, p);
  EXPECT_EQ(carried.int_digits(), digits({1}));
  EXPECT_EQ(carried.frac_digits, digits({0, 0, 0}));
}

TEST(Encode, IntegerDigitsAndSign) {
  const auto x = encode(-123.25, decimal(2));
  EXPECT_EQ(x.sign(), -1);
  EXPECT_EQ(x.int_digits(), digits({1, 2, 3}));
  EXPECT_EQ(x.frac_digits, digits({2, 5}));
  EXPECT_EQ(to_string(x), "-123.25");
}

TEST(Encode, TinyNegativeCollapsesToPositiveZero) {
  EXPECT_EQ(encode(-0.0001, decimal(3)).sign(), 1);
}

TEST(Encode, ScientificInputUsesPositionalDigits) {
  EXPECT_EQ(encode(4.5e-2, decimal(4)).frac_digits, digits({0, 4, 5, 0}));
}

TEST(Encode, BinaryBase) {
  const BaireParams p{2, 6, Rounding::kTruncate};
  EXPECT_EQ(encode(0.75, p).frac_digits, digits({1, 1, 0, 0, 0, 0}));
  // 0.1 = 0.000110011..._2
  EXPECT_EQ(encode(0.1, p).frac_digits, digits({0, 0, 0, 1, 1, 0}));
  const auto x = encode(5.5, p);
  EXPECT_EQ(x.int_digits(), digits({1, 0, 1}));
  EXPECT_EQ(x.frac_digits, digits({1, 0, 0, 0, 0, 0}));
}

TEST(Encode, OtherBases) {
  // 0.5 = 0.1111..._3; the remainder after any prefix is exactly one half.
  EXPECT_EQ(encode(0.5, {3, 3, Rounding::kTruncate}).frac_digits, digits({1, 1, 1}));
  EXPECT_EQ(encode(0.5, {3, 3, Rounding::kRoundHalfEven}).frac_digits, digits({1, 1, 2}));
  const auto hex = encode(255.5, {16, 2, Rounding::kTruncate});
  EXPECT_EQ(hex.int_digits(), digits({15, 15}));
  EXPECT_EQ(hex.frac_digits, digits({8, 0}));
  EXPECT_EQ(to_string(hex), "+15/15.8/0");
}

TEST(Encode, RejectsNonFinite) {
  EXPECT_THROW(encode(std::numeric_limits<double>::quiet_NaN(), {}), EncodingError);
  EXPECT_THROW(encode(std::numeric_limits<double>::infinity(), {}), EncodingError);
  EXPECT_THROW(encode(-std::numeric_limits<double>::infinity(), {}), EncodingError);
}

TEST(Encode, RejectsBadParams) {
  EXPECT_THROW(encode(0.5, {1, 3, Rounding::kTruncate}), ValidationError);
  EXPECT_THROW(encode(0.5, {10, 0, Rounding::kTruncate}), ValidationError);
  EXPECT_THROW(encode(0.5, {BaireParams::kMaxBase + 1, 3, Rounding::kTruncate}), ValidationError);
  EXPECT_THROW(parse_rounding("nearest"), ValidationError);
}

TEST(CommonPrefix, StopsAtFirstMismatch) {
  const auto p = decimal(3);
  EXPECT_EQ(common_prefix_length(encode(0.478, p), encode(0.472, p)), 2u);
  EXPECT_EQ(common_prefix_length(encode(0.437, p), encode(0.577, p)), 0u);
  EXPECT_EQ(common_prefix_length(encode(0.437, p), encode(0.437, p)), 3u);
}

TEST(CommonPrefix, IntegerOrSignMismatch) {
  const auto p = decimal(3);
  EXPECT_EQ(common_prefix_length(encode(0.437, p), encode(1.437, p)), std::nullopt);
  EXPECT_EQ(common_prefix_length(encode(-0.4, p), encode(0.4, p)), std::nullopt);
}

TEST(CommonPrefix, RejectsDifferentParams) {
  EXPECT_THROW(common_prefix_length(encode(0.4, decimal(3)), encode(0.4, decimal(4))),
               IncompatibleEncodingError);
  EXPECT_THROW(baire_distance(encode(0.4, decimal(3)), encode(0.4, decimal(3)), decimal(4)),
               IncompatibleEncodingError);
}

TEST(BaireDistance, PowersOfTheBase) {
  const auto p6 = decimal(6);
  EXPECT_EQ(baire_distance(encode(0.4371, p6), encode(0.4372, p6), p6), 1e-3);
  EXPECT_EQ(baire_distance(encode(0.437, p6), encode(0.571, p6), p6), 1.0);
  EXPECT_EQ(baire_distance(encode(0.437, p6), encode(1.437, p6), p6), 1.0);
  EXPECT_EQ(baire_distance(encode(0.123456, p6), encode(0.123456, p6), p6), 1e-6);
  const BaireParams b2{2, 4, Rounding::kTruncate};
  EXPECT_EQ(baire_distance(encode(0.75, b2), encode(0.875, b2), b2), 0.25);
}

TEST(BasePower, ExactForSmallExponents) {
  EXPECT_EQ(base_power(10, 0), 1.0);
  EXPECT_EQ(base_power(10, 3), 1e-3);
  EXPECT_EQ(base_power(2, 10), 1.0 / 1024.0);
}

TEST(Decode, RoundTripsAcrossBases) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> wide(-1000.0, 1000.0);
  for (std::uint32_t base : {2u, 3u, 7u, 10u, 16u}) {
    for (std::uint32_t precision : {1u, 3u, 6u, 8u}) {
      for (auto rounding : {Rounding::kTruncate, Rounding::kRoundHalfEven}) {
        const BaireParams p{base, precision, rounding};
        for (int i = 0; i < 300; ++i) {
          const double v = i % 2 == 0 ? unit(rng) : wide(rng);
          const auto d = encode(v, p);
          ASSERT_EQ(encode(decode(d), p), d) << v << " base " << base << " K " << precision;
        }
      }
    }
  }
}

TEST(Decode, DecimalGivesTheWrittenValue) {
  EXPECT_EQ(decode(encode(0.478, decimal(3))), 0.478);
  EXPECT_EQ(decode(encode(-12.5, decimal(2))), -12.5);
}

// Triples drawn from a small digit alphabet so long shared prefixes are common.
class UltrametricAxioms : public ::testing::TestWithParam<std::pair<std::uint32_t, std::uint32_t>> {};

TEST_P(UltrametricAxioms, HoldOnRandomTriples) {
  const auto [base, precision] = GetParam();
  const BaireParams p{base, precision, Rounding::kTruncate};
  std::mt19937_64 rng(base * 100 + precision);
  for (int i = 0; i < 20000; ++i) {
    const auto x = encode(std::stod(oracle::random_decimal(rng, 8, 3, 1)), p);
    const auto y = encode(std::stod(oracle::random_decimal(rng, 8, 3, 1)), p);
    const auto z = encode(std::stod(oracle::random_decimal(rng, 8, 3, 1)), p);
    const double dxy = baire_distance(x, y, p);
    const double dyz = baire_distance(y, z, p);
    const double dxz = baire_distance(x, z, p);
    ASSERT_GT(dxy, 0.0);
    ASSERT_EQ(dxy, baire_distance(y, x, p));
    ASSERT_LE(dxz, std::max(dxy, dyz));
    ASSERT_EQ(dxy == base_power(base, precision), x == y);
  }
}

INSTANTIATE_TEST_SUITE_P(Bases, UltrametricAxioms,
                         ::testing::Values(std::pair{2u, 3u}, std::pair{2u, 6u},
                                           std::pair{10u, 3u}, std::pair{10u, 6u}));

TEST(CommonPrefix, AgreesWithStringScan) {
  std::mt19937_64 rng(11);
  for (std::uint32_t precision : {1u, 3u, 6u}) {
    const auto p = decimal(precision);
    for (int i = 0; i < 20000; ++i) {
      const std::string a = oracle::random_decimal(rng, 1 + rng() % 8, 3, 2);
      const std::string b = oracle::random_decimal(rng, 1 + rng() % 8, 3, 2);
      ASSERT_EQ(common_prefix_length(encode(std::stod(a), p), encode(std::stod(b), p)),
                oracle::string_prefix(a, b, precision))
          << a << " vs " << b;
    }
  }
}

TEST(BaireDistance, NeverGrowsWithPrecision) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 5000; ++i) {
    const double a = std::stod(oracle::random_decimal(rng, 8, 4));
    const double b = std::stod(oracle::random_decimal(rng, 8, 4));
    double previous = 2.0;
    for (std::uint32_t k = 1; k <= 8; ++k) {
      const auto p = decimal(k);
      const double d = baire_distance(encode(a, p), encode(b, p), p);
      ASSERT_LE(d, previous);
      previous = d;
    }
  }
}

}  // namespace
}  // namespace baire
