#include <acide/admission.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_support.hpp"

namespace acide {
namespace {

using testing::make_peers;
using testing::rel_close;

const StreamParams kStream(2000.0, 0.2);  // S/T = 10000 bps

std::vector<PeerProfile> three_candidates() { return make_peers({10000, 15000, 20000}, 20000); }

TEST(JoinCluster, DropsLowestUploadUntilBudgetFits) {
  const auto outcome = join_cluster(AdmissionBudget(15000, three_candidates(), kStream));
  ASSERT_EQ(outcome.size(), 2u);
  EXPECT_EQ(outcome.admitted[0].upload, 15000);
  EXPECT_EQ(outcome.admitted[1].upload, 20000);
  ASSERT_EQ(outcome.rejected.size(), 1u);
  EXPECT_EQ(outcome.rejected[0].upload, 10000);
  EXPECT_TRUE(rel_close(outcome.plan.total_bandwidth, 14000.0));
  EXPECT_TRUE(rel_close(outcome.efficiency, 14000.0 / 15000.0));
  EXPECT_NEAR(100.0 * outcome.efficiency, 93.33, 0.005);
  EXPECT_EQ(outcome.removals, 1u);
}

TEST(JoinCluster, BudgetAtLivestreamAdmitsOne) {
  const auto outcome = join_cluster(AdmissionBudget(10000, three_candidates(), kStream));
  ASSERT_EQ(outcome.size(), 1u);
  EXPECT_EQ(outcome.admitted[0].upload, 20000);
  EXPECT_DOUBLE_EQ(outcome.efficiency, 1.0);
  EXPECT_EQ(outcome.removals, 2u);
}

TEST(JoinCluster, BudgetBelowLivestreamIsInsufficient) {
  EXPECT_THROW(join_cluster(AdmissionBudget(9000, three_candidates(), kStream)),
               InsufficientBudget);
}

TEST(JoinCluster, FullSetBandwidthAdmitsEveryone) {
  const auto pool = three_candidates();
  const double full = *allocated_bandwidth(pool, kStream);
  const auto outcome = join_cluster(AdmissionBudget(full, pool, kStream));
  EXPECT_EQ(outcome.size(), 3u);
  EXPECT_DOUBLE_EQ(outcome.efficiency, 1.0);
  EXPECT_EQ(outcome.removals, 0u);
}

TEST(JoinCluster, InfeasibleSuffixCountsAsInfiniteBandwidth) {
  // Full set: 0.2 * 30000 - 2 * 3000 = 0, infeasible at any budget.
  const auto pool = make_peers({10000, 10000, 10000});
  const StreamParams stream(3000.0, 0.2);
  const auto outcome = join_cluster(AdmissionBudget(1e9, pool, stream));
  EXPECT_EQ(outcome.size(), 2u);
}

TEST(AdmissionBudget, RejectsBadInput) {
  EXPECT_THROW(AdmissionBudget(0.0, three_candidates(), kStream), DomainError);
  EXPECT_THROW(AdmissionBudget(1000.0, {}, kStream), DomainError);
}

TEST(AdmittedUpperBound, HandExample) {
  const double bound = admitted_upper_bound(three_candidates(), kStream, 14000.0);
  EXPECT_TRUE(rel_close(bound, 1.0 + 4.5 - 45000.0 / 14000.0));
  EXPECT_NEAR(bound, 2.286, 5e-4);
  EXPECT_EQ(admitted_upper_bound_floor(three_candidates(), kStream, 14000.0), 2u);
}

TEST(AdmittedUpperBound, LivestreamGivesOne) {
  EXPECT_DOUBLE_EQ(admitted_upper_bound(three_candidates(), kStream, 10000.0), 1.0);
}

TEST(AdmittedUpperBound, MeanUploadLimitAdmitsAll) {
  // S/T = sum(u)/N = 15000, bw = N * S/T = 45000.
  const auto pool = three_candidates();
  const auto stream = StreamParams::from_livestream(15000.0, 0.2);
  EXPECT_TRUE(rel_close(admitted_upper_bound(pool, stream, 45000.0), 3.0));
  EXPECT_EQ(admitted_upper_bound_floor(pool, stream, 45000.0), 3u);
}

TEST(AdmittedUpperBound, BelowLivestreamIsDomainError) {
  EXPECT_THROW(admitted_upper_bound(three_candidates(), kStream, 9000.0), DomainError);
}

TEST(BruteForceAdmission, HandExample) {
  const auto outcome = brute_force_admission(AdmissionBudget(15000, three_candidates(), kStream));
  ASSERT_EQ(outcome.size(), 2u);
  EXPECT_EQ(outcome.admitted[0].upload, 15000);
  EXPECT_EQ(outcome.admitted[1].upload, 20000);
  EXPECT_TRUE(rel_close(outcome.plan.total_bandwidth, 14000.0));
}

TEST(BruteForceAdmission, UnconstrainedAdmitsAll) {
  const auto outcome = brute_force_admission(AdmissionBudget(1e9, three_candidates(), kStream));
  EXPECT_EQ(outcome.size(), 3u);
  EXPECT_TRUE(outcome.rejected.empty());
}

TEST(BruteForceAdmission, LivestreamBudgetGivesSingleton) {
  const auto outcome =
      brute_force_admission(AdmissionBudget(10000, three_candidates(), kStream));
  EXPECT_EQ(outcome.size(), 1u);
  // All singletons cost S/T; the id tie-break picks p1.
  EXPECT_EQ(outcome.admitted[0].id, "p1");
}

TEST(BruteForceAdmission, Errors) {
  EXPECT_THROW(brute_force_admission(AdmissionBudget(9000, three_candidates(), kStream)),
               InsufficientBudget);
  std::vector<double> many(17, 20000.0);
  EXPECT_THROW(brute_force_admission(AdmissionBudget(1e9, make_peers(many), kStream)),
               TooManyCandidates);
}

TEST(BruteForceAdmission, IndependentOfInputOrder) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    auto pool = testing::random_cluster(rng, 8);
    const auto a = brute_force_admission(AdmissionBudget(13000, pool, kStream));
    std::shuffle(pool.begin(), pool.end(), rng);
    const auto b = brute_force_admission(AdmissionBudget(13000, pool, kStream));
    EXPECT_EQ(a.admitted, b.admitted);
  }
}

// Greedy cardinality equals the exhaustive optimum; the admitted-count bound holds;
// admitted peers are the top uploads; iterations stay below N.
TEST(JoinCluster, AgreesWithBruteForce) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + trial % 12;
    const auto pool = testing::random_cluster(rng, n);
    const double livestream = std::uniform_real_distribution<double>(8000.0, 16000.0)(rng);
    const auto stream = StreamParams::from_livestream(livestream, 0.2);
    const double full = allocated_bandwidth(pool, stream).value_or(4.0 * livestream * n);
    const double budget =
        std::uniform_real_distribution<double>(livestream, std::max(livestream, full))(rng);

    const AdmissionBudget b(budget, pool, stream);
    const auto greedy = join_cluster(b);
    const auto exact = brute_force_admission(b);
    EXPECT_EQ(greedy.size(), exact.size()) << "trial " << trial;
    EXPECT_LE(greedy.plan.total_bandwidth, budget * (1 + 1e-9));
    EXPECT_LE(greedy.size(), admitted_upper_bound_floor(pool, stream, greedy.plan.total_bandwidth));
    EXPECT_LE(greedy.removals, n - 1);
    EXPECT_GT(greedy.efficiency, 0.0);
    EXPECT_LE(greedy.efficiency, 1.0);

    const auto sorted = sort_peers(pool);
    for (std::size_t i = 0; i < greedy.size(); ++i) {
      EXPECT_EQ(greedy.admitted[i], sorted[n - greedy.size() + i]);
    }
  }
}

TEST(JoinCluster, MonotoneInBudgetAndLivestream) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const auto pool = testing::random_cluster(rng, 5 + trial % 40);
    std::size_t previous = 0;
    for (double budget = 16000; budget <= 60000; budget += 2000) {
      const auto n = join_cluster(AdmissionBudget(budget, pool, kStream)).size();
      EXPECT_GE(n, previous);
      previous = n;
    }
    previous = pool.size() + 1;
    for (double v = 8000; v <= 16000; v += 1000) {
      const auto n =
          join_cluster(AdmissionBudget(20000, pool, StreamParams::from_livestream(v, 0.2))).size();
      EXPECT_LE(n, previous);
      previous = n;
    }
  }
}

}  // namespace
}  // namespace acide
