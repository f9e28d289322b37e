#include <gtest/gtest.h>

#include <random>

#include "evac/rnn.hpp"
#include "oracles.hpp"

using evac::cpn::Matrix;
using evac::cpn::RnnDecider;
using evac::testing::rnn_fixed_point_newton;

namespace {

RnnDecider hand_set_decider() {
  Matrix wp(2), wm(2);
  wp(1, 0) = 1.0;
  wm(0, 1) = 1.0;
  return RnnDecider(wp, wm, {0.5, 0.34}, {0.0, 0.0}, 0.0);
}

void expect_matches_oracle(const RnnDecider& d, double tol) {
  const auto oracle = rnn_fixed_point_newton(d);
  ASSERT_EQ(oracle.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(d.excitation()[i], oracle[i], tol) << i;
}

}  // namespace

TEST(Rnn, HandSetWeightsGiveKnownExcitation) {
  const RnnDecider d = hand_set_decider();
  const auto oracle = rnn_fixed_point_newton(d);
  EXPECT_NEAR(oracle[0], 0.7, 1e-12);
  EXPECT_NEAR(oracle[1], 0.2, 1e-12);
  expect_matches_oracle(d, 1e-6);
  const char both[] = {1, 1};
  EXPECT_EQ(d.best(both), 0u);
  const char second_only[] = {0, 1};
  EXPECT_EQ(d.best(second_only), 1u);
  const char none[] = {0, 0};
  EXPECT_EQ(d.best(none), RnnDecider::npos);
}

TEST(Rnn, SymmetricStartIsTied) {
  const RnnDecider d(3);
  EXPECT_EQ(d.excitation()[0], d.excitation()[1]);
  EXPECT_EQ(d.excitation()[1], d.excitation()[2]);
  const char all[] = {1, 1, 1};
  EXPECT_EQ(d.best(all), 0u);
  expect_matches_oracle(d, 1e-6);
}

TEST(Rnn, SingleNeuron) {
  RnnDecider d(1);
  EXPECT_EQ(d.excitation()[0], 0.5);
  d.reward(0, 2.0);
  EXPECT_EQ(d.excitation()[0], 0.5);
  EXPECT_NEAR(d.threshold(), 0.4, 1e-15);
}

TEST(Rnn, ThresholdRecurrence) {
  RnnDecider d(2);
  d.reward(0, 0.5);
  EXPECT_NEAR(d.threshold(), 0.1, 1e-15);
  d.reward(0, 0.5);
  EXPECT_NEAR(d.threshold(), 0.18, 1e-15);
}

TEST(Rnn, RepeatedRewardsFavourChosenNeuron) {
  RnnDecider d(2);
  for (int i = 0; i < 10; ++i) d.reward(1, 0.5);
  EXPECT_GT(d.excitation()[1], d.excitation()[0]);
  expect_matches_oracle(d, 1e-6);
}

TEST(Rnn, PenaltyShiftsPreferenceAway) {
  RnnDecider d(3);
  d.reward(0, 1.0);   // threshold 0.2
  d.reward(0, 1.0);   // threshold 0.36
  const double before = d.excitation()[0];
  d.reward(0, 0.01);  // well below threshold
  EXPECT_LT(d.excitation()[0], before);
  expect_matches_oracle(d, 1e-6);
}

TEST(Rnn, RewardAtThresholdCountsAsReward) {
  RnnDecider d(2);
  d.reward(0, 1.0);  // threshold 0.2
  RnnDecider at = d;
  at.reward(1, 0.2);
  EXPECT_GT(at.excitation()[1], d.excitation()[1]);
  RnnDecider below = d;
  below.reward(1, 0.2 - 1e-9);
  EXPECT_LT(below.excitation()[1], d.excitation()[1]);
}

TEST(Rnn, FiringRatesPreservedAndDiagonalsZero) {
  RnnDecider d(4);
  d.reward(2, 3.0);
  std::vector<double> rates;
  for (std::size_t i = 0; i < 4; ++i) rates.push_back(d.firing_rate(i));
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    d.reward(rng() % 4, 0.1 + static_cast<double>(rng() % 100) / 10.0);
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_NEAR(d.firing_rate(i), rates[i], 1e-9 * rates[i]);
      EXPECT_EQ(d.excitatory()(i, i), 0.0);
      EXPECT_EQ(d.inhibitory()(i, i), 0.0);
    }
  }
}

TEST(Rnn, RejectsBadRewards) {
  RnnDecider d(2);
  EXPECT_THROW(d.reward(0, 0.0), std::invalid_argument);
  EXPECT_THROW(d.reward(0, -1.0), std::invalid_argument);
  EXPECT_THROW(d.reward(0, INFINITY), std::invalid_argument);
  EXPECT_THROW(d.reward(5, 1.0), std::out_of_range);
}

TEST(Rnn, RejectsNegativeWeights) {
  Matrix wp(2), wm(2);
  wp(0, 1) = -1.0;
  EXPECT_THROW(RnnDecider(wp, wm, {1, 1}, {0, 0}, 0.0), std::invalid_argument);
  EXPECT_THROW(RnnDecider(0), std::invalid_argument);
}
