#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "evac/metrics.hpp"
#include "evac/rnn.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace evac;
using evac::testing::PropertyOutcome;

TEST(Properties, HazardMonotoneOverRandomScenarios) {
  const PropertyOutcome out = evac::testing::hazard_monotonicity(11, 40);
  EXPECT_TRUE(out.ok) << out.detail;
  EXPECT_GT(out.checks, 10000);
}

TEST(Properties, MailboxInvariantsUnderRandomOperations) {
  const PropertyOutcome out = evac::testing::mailbox_random_operations(5, 10000);
  EXPECT_TRUE(out.ok) << out.detail;
  EXPECT_EQ(out.checks, 10000);
}

TEST(Properties, RnnInvariantsUnderRandomRewards) {
  const PropertyOutcome out = evac::testing::rnn_random_updates(3, 200);
  EXPECT_TRUE(out.ok) << out.detail;
}

TEST(Properties, EqualRewardsKeepTheRewardedNeuronAhead) {
  for (std::size_t n : {2u, 3u, 6u}) {
    for (std::size_t chosen = 0; chosen < n; ++chosen) {
      cpn::RnnDecider d(n);
      const std::vector<char> all(n, 1);
      for (int k = 0; k < 50; ++k) {
        d.reward(chosen, 0.25);
        ASSERT_EQ(d.best(all), chosen);
        const auto q = d.excitation();
        for (std::size_t i = 0; i < n; ++i) {
          if (i == chosen) continue;
          for (std::size_t j = 0; j < n; ++j) {
            if (j != chosen) {
              EXPECT_NEAR(q[i], q[j], 1e-9);
            }
          }
        }
      }
    }
  }
}

TEST(Properties, EqualRewardsAreLabelBlind) {
  // Rewarding a permuted sequence of neurons gives the permuted network.
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 5;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    cpn::RnnDecider a(n), b(n);
    for (int k = 0; k < 40; ++k) {
      const std::size_t i = rng() % n;
      a.reward(i, 0.4);
      b.reward(perm[i], 0.4);
      for (std::size_t j = 0; j < n; ++j) {
        ASSERT_NEAR(a.excitation()[j], b.excitation()[perm[j]], 1e-9);
      }
      const std::vector<char> all(n, 1);
      ASSERT_EQ(perm[a.best(all)], b.best(all));
    }
  }
}

TEST(Properties, MetricsPositiveAndEqualToTheirBreakdown) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const BuildingGraph g =
        load_graph_text(evac::testing::random_graph_text(rng(), 4 + static_cast<int>(rng() % 10), 3));
    const auto paths = static_exit_paths(g);
    for (const auto& vp : paths) {
      if (vp.size() < 2) continue;
      PathObservation obs;
      for (std::size_t i = 0; i < vp.size(); ++i) {
        obs.path.push_back(g.vertex(vp[i]).id);
        if (i + 1 == vp.size()) break;
        HopObservation h;
        const double l = g.edge(g.edge_between(vp[i], vp[i + 1])).length;
        h.effective_length = l * (u(rng) < 0.3 ? 1000.0 * (1 + rng() % 8) : 1.0);
        h.stats.queue_length = static_cast<double>(rng() % 6);
        h.stats.arrival_rate = u(rng);
        h.hazard_time = u(rng) < 0.5 ? 1e9 : 100.0 * u(rng);
        h.growth_rate = u(rng) < 0.5 ? 0.0 : 1000.0 / 30.0;
        obs.hops.push_back(h);
      }
      for (double speed : {65.0, 130.0}) {
        for (const PathEvaluation& e : {time_metric(g, obs, speed), safety_metric(g, obs, speed)}) {
          EXPECT_GT(e.value, 0.0);
          double sum = 0.0;
          for (const HopTerms& t : e.terms) {
            EXPECT_GE(t.first, 0.0);
            EXPECT_GE(t.second, 0.0);
            sum += t.first + t.second;
          }
          EXPECT_NEAR(e.value, sum, 1e-9 * std::max(1.0, sum));
          EXPECT_GE(e.congestion, 0.0);
        }
      }
    }
  }
}
