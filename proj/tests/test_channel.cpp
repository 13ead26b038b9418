#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "ncsat/channel.hpp"

using namespace ncsat;

TEST(Gilbert, DeriveParamsClosedForm)
{
  auto p = derive_params(0.05, 1.0);
  EXPECT_DOUBLE_EQ(p.beta, 1.0);
  EXPECT_NEAR(p.gamma, 1.0 / 19.0, 1e-15);

  p = derive_params(0.05, 8.0);
  EXPECT_DOUBLE_EQ(p.beta, 0.125);
  EXPECT_NEAR(p.gamma, 0.125 * 0.05 / 0.95, 1e-15);

  p = derive_params(0.5, 2.0);
  EXPECT_DOUBLE_EQ(p.beta, 0.5);
  EXPECT_DOUBLE_EQ(p.gamma, 0.5);
}

TEST(Gilbert, SteadyStateInvertsDerivation)
{
  EXPECT_DOUBLE_EQ(steady_state({0.05, 0.95}), 0.05);
  EXPECT_NEAR(steady_state({1.0 / 19.0, 1.0}), 0.05, 1e-15);
  EXPECT_DOUBLE_EQ(steady_state({0.5, 0.5}), 0.5);
  for (double pi : {0.01, 0.05, 0.2, 0.5})
    for (double l : {1.0, 2.0, 4.0, 8.0})
      if (pi / (1 - pi) / l <= 1.0) {
        EXPECT_NEAR(steady_state(derive_params(pi, l)), pi, 1e-12);
      }
}

TEST(Gilbert, InvalidInputsRaiseDomainErrors)
{
  EXPECT_THROW(derive_params(0.0, 1.0), std::domain_error);
  EXPECT_THROW(derive_params(1.0, 1.0), std::domain_error);
  EXPECT_THROW(derive_params(0.05, 0.5), std::domain_error);
  EXPECT_THROW(derive_params(0.9, 1.0), std::domain_error);  // gamma would exceed 1
  EXPECT_THROW(steady_state({0.0, 0.0}), std::domain_error);
  EXPECT_THROW(validate({0.1, 0.0}), std::domain_error);
  EXPECT_THROW(validate({1.5, 0.5}), std::domain_error);
}

TEST(Gilbert, AbsorbingGoodStateNeverErases)
{
  GilbertChannel ch{{0.0, 1.0}, 3, ChannelCondition::good};
  for (int i = 0; i < 100000; ++i)
    ASSERT_FALSE(ch.step());
}

TEST(Gilbert, UnitBetaGivesSingleSlotBursts)
{
  GilbertChannel ch{derive_params(0.05, 1.0), 5};
  bool prev = false;
  for (int i = 0; i < 200000; ++i) {
    const bool e = ch.step();
    ASSERT_FALSE(prev && e);
    prev = e;
  }
}

TEST(Gilbert, SameSeedSameSequence)
{
  GilbertChannel a{derive_params(0.05, 4.0), 11}, b{derive_params(0.05, 4.0), 11};
  for (int i = 0; i < 10000; ++i)
    ASSERT_EQ(a.step(), b.step());
}

TEST(Gilbert, BurstLengthsAreGeometric)
{
  const auto params = derive_params(0.05, 4.0);
  GilbertChannel ch{params, 21};
  std::map<int, int> lengths;
  int run = 0, bursts = 0;
  for (int i = 0; i < 2000000; ++i) {
    if (ch.step()) {
      ++run;
    } else if (run > 0) {
      ++lengths[run];
      ++bursts;
      run = 0;
    }
  }
  // P(L > l) = (1 - beta)^l
  for (int l = 1; l <= 6; ++l) {
    int longer = 0;
    for (const auto& [len, n] : lengths)
      if (len > l)
        longer += n;
    const double expect = std::pow(1.0 - params.beta, l);
    const double got = static_cast<double>(longer) / bursts;
    EXPECT_NEAR(got, expect, 4.0 * std::sqrt(expect * (1 - expect) / bursts) + 1e-3) << "l=" << l;
  }
}
