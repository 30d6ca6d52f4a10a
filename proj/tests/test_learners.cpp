#include <gtest/gtest.h>

#include "replay/adversaries.hpp"
#include "replay/generators.hpp"
#include "replay/learners.hpp"

using namespace replay;

namespace {

PointSet one_based(std::initializer_list<Point> pts) {
  PointSet s;
  for (Point p : pts) s = s.with(p - 1);
  return s;
}

}  // namespace

TEST(ClosureLearner, ThresholdTrace) {
  ClosureLearner learner(generators::thresholds(5));
  EXPECT_EQ(learner.hypothesis(), PointSet{});
  learner.observe(2, true);  // (3, 1)
  EXPECT_EQ(learner.hypothesis(), one_based({3, 4, 5}));
  learner.observe(1, false);  // (2, 0)
  EXPECT_EQ(learner.hypothesis(), one_based({3, 4, 5}));
  EXPECT_EQ(learner.updates(), 1U);
}

TEST(ClosureLearner, StartsAtLeastElement) {
  const auto H = generators::two_intervals(5);
  ClosureLearner learner(H);
  EXPECT_EQ(learner.hypothesis(), H.intersection_of_all());
}

TEST(ClosureLearner, RepresentationFlipsOutput) {
  const auto H = generators::reverse_singletons(4);
  const Representation f{Domain(4).full()};
  ClosureLearner learner(H, f);
  // In the flipped class the least element is empty, so the output is all ones.
  EXPECT_EQ(learner.internal_state(), PointSet{});
  EXPECT_EQ(learner.hypothesis(), Domain(4).full());
  learner.observe(1, false);  // flipped label 1 at point 1
  EXPECT_EQ(learner.internal_state(), PointSet::of({1}));
  EXPECT_EQ(learner.hypothesis(), Domain(4).full().without(1));
}

TEST(ConservativeThreshold, MatchesClosureOnThresholds) {
  const auto H = generators::thresholds(10);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    ClosureLearner closure(H);
    ConservativeThresholdLearner conservative(H.domain());
    RandomReplayAdversary a1(H, make_stream(seed, 11), 0.4, 0.6);
    RandomReplayAdversary a2(H, make_stream(seed, 11), 0.4, 0.6);
    const auto t1 = run_game(closure, a1, H, {40, CommitMode::WorstCase});
    const auto t2 = run_game(conservative, a2, H, {40, CommitMode::WorstCase});
    ASSERT_TRUE(t1.valid);
    ASSERT_TRUE(t2.valid);
    for (std::size_t i = 0; i < t1.rounds.size(); ++i) {
      ASSERT_EQ(t1.rounds[i].hypothesis, t2.rounds[i].hypothesis) << "seed " << seed << " round " << i + 1;
    }
  }
}

TEST(Halving, LogarithmicMistakesUnderTruth) {
  const auto H = generators::thresholds(15);  // 16 members
  for (std::size_t k = 0; k < H.size(); ++k) {
    HalvingLearner learner(H);
    std::vector<Point> seq;
    for (Point x = 0; x < 15; ++x) seq.push_back((x * 7) % 15);
    TruthAdversary adversary(H[k], seq);
    const auto tr = run_game(learner, adversary, H, {15, CommitMode::Fixed});
    ASSERT_TRUE(tr.valid);
    EXPECT_LE(tr.mistakes, 4U) << "target " << k;
    EXPECT_TRUE(learner.version_space_contains(H[k]));
  }
}

TEST(Halving, ReplayEjectsTarget) {
  const auto H = generators::thresholds(8);
  const Hypothesis target = Domain(8).full();
  HalvingLearner learner(H);
  ReplayFirstAdversary adversary(target);
  const auto tr = run_game(learner, adversary, H, {8, CommitMode::Fixed});
  ASSERT_TRUE(tr.valid);
  EXPECT_FALSE(learner.version_space_contains(target));
}

TEST(Halving, EmptyVersionSpacePredictsZero) {
  HalvingLearner learner(HypothesisClass(Domain(3), {PointSet::of({0})}));
  learner.observe(0, false);
  EXPECT_TRUE(learner.exhausted());
  EXPECT_EQ(learner.hypothesis(), PointSet{});
}

TEST(GreedyProper, FirstOutputIsSmallestMember) {
  GreedyProperLearner learner(generators::two_intervals(6));
  EXPECT_EQ(learner.hypothesis(), PointSet{});
  EXPECT_FALSE(learner.fell_back());
}

TEST(GreedyProper, IgnoresLabelsMatchingPastOutputs) {
  GreedyProperLearner learner(generators::thresholds(4));
  learner.observe(2, true);
  EXPECT_EQ(learner.hypothesis(), one_based({3, 4}));
  learner.observe(0, false);  // h_1 = empty already says 0: not recorded
  EXPECT_EQ(learner.record().size(), 1U);
}

TEST(GreedyProper, FallsBackWithoutConsistentMember) {
  GreedyProperLearner learner(HypothesisClass(Domain(2), {PointSet{}, PointSet::of({0})}));
  learner.observe(0, true);
  EXPECT_EQ(learner.hypothesis(), PointSet::of({0}));
  learner.observe(1, true);
  EXPECT_TRUE(learner.fell_back());
  EXPECT_EQ(learner.hypothesis(), PointSet{});
}

TEST(GreedyProper, TrappedOnTwoIntervals) {
  const auto H = generators::two_intervals(12);
  GreedyProperLearner learner(H);
  WitnessChainAdversary adversary;
  const std::size_t T = 200;
  const auto tr = run_game(learner, adversary, H, {T, CommitMode::WorstCase});
  ASSERT_TRUE(tr.valid);
  ASSERT_TRUE(adversary.trap_round().has_value());
  EXPECT_GE(static_cast<double>(tr.mistakes), T / 4.0 - 3.0);
}

TEST(ClosureVcd1, BuildsOnlyWithRepresentation) {
  const auto H = generators::reverse_singletons(5);
  const auto f = find_vcd1_representation(H).f;
  ASSERT_TRUE(f.has_value());
  const std::size_t bound = threshold_dimension(intersection_closure(apply_representation(H, *f))).value;
  auto learner = make_learner("closure_vcd1", H);
  WitnessChainAdversary adversary;
  const auto tr = run_game(*learner, adversary, H, {30, CommitMode::WorstCase});
  ASSERT_TRUE(tr.valid);
  EXPECT_LE(tr.mistakes, bound);
  EXPECT_THROW(make_learner("closure_vcd1", generators::power_set(2)), Error);
}

TEST(Registry, KnowsEveryName) {
  const auto H = generators::thresholds(4);
  for (const auto& name : learner_names()) EXPECT_NO_THROW(make_learner(name, H)) << name;
  EXPECT_THROW(make_learner("nope", H), Error);
}
