#include <gtest/gtest.h>

#include "replay/adversaries.hpp"
#include "replay/experiments.hpp"
#include "replay/generators.hpp"
#include "replay/learners.hpp"
#include "replay/replay_engine.hpp"

using namespace replay;

namespace {

PointSet one_based(std::initializer_list<Point> pts) {
  PointSet s;
  for (Point p : pts) s = s.with(p - 1);
  return s;
}

/// Emits a fixed list of (x, y, origin) and commits a fixed target, if any.
class ListAdversary final : public Adversary {
 public:
  ListAdversary(std::vector<Emission> e, std::optional<Hypothesis> target = std::nullopt)
      : e_(std::move(e)), target_(target) {}
  Emission next(const GameView& view) override { return e_[(view.t - 1) % e_.size()]; }
  std::optional<Hypothesis> commit(const GameView&) override { return target_; }

 private:
  std::vector<Emission> e_;
  std::optional<Hypothesis> target_;
};

/// A learner that emits a fixed sequence of hypotheses, cycling.
class ScriptLearner final : public Learner {
 public:
  explicit ScriptLearner(std::vector<Hypothesis> hs) : hs_(std::move(hs)) {}
  Hypothesis hypothesis() override { return hs_[i_ % hs_.size()]; }
  void observe(Point, bool) override { ++i_; }

 private:
  std::vector<Hypothesis> hs_;
  std::size_t i_ = 0;
};

}  // namespace

TEST(RunGame, ClosureOnThresholdsTwoTrueLabels) {
  const auto H = generators::thresholds(4);
  ClosureLearner learner(H);
  ListAdversary adversary({{3, true, LabelOrigin::truth()}, {2, true, LabelOrigin::truth()}});
  const auto tr = run_game(learner, adversary, H, {2, CommitMode::WorstCase});
  ASSERT_TRUE(tr.valid);
  EXPECT_EQ(tr.mistakes, 2U);
  const auto I = tr.final_state.reliable_indices();
  EXPECT_EQ(std::vector<std::size_t>(I.begin(), I.end()), (std::vector<std::size_t>{1, 2}));
}

TEST(RunGame, ReplayingFirstHypothesisKeepsEverythingOpen) {
  const auto H = generators::thresholds(5);
  ClosureLearner learner(H);
  // Round 1 is truth; afterwards replay round 1 (which predicted 0 everywhere).
  std::vector<Emission> script{{2, false, LabelOrigin::truth()}};
  for (Point x = 0; x < 5; ++x) script.push_back({x, false, LabelOrigin::replay(1)});
  ListAdversary replay(script);
  const auto tr = run_game(learner, replay, H, {6, CommitMode::WorstCase});
  ASSERT_TRUE(tr.valid);
  // Only round 1 is reliable (nothing was output before it).
  EXPECT_EQ(tr.final_state.reliable_indices().size(), 1U);
  EXPECT_EQ(tr.mistakes, 0U);
  for (const auto& r : tr.rounds) EXPECT_EQ(r.hypothesis, PointSet{});
}

TEST(RunGame, SingleRoundScoresOneComparison) {
  const auto H = generators::thresholds(4);
  ClosureLearner learner(H);
  ListAdversary adversary({{1, true, LabelOrigin::truth()}}, one_based({1, 2, 3, 4}));
  const auto tr = run_game(learner, adversary, H, {1, CommitMode::Fixed});
  ASSERT_TRUE(tr.valid);
  EXPECT_EQ(tr.mistakes, 1U);
}

TEST(RunGame, IllegalReplayIsReported) {
  const auto H = generators::thresholds(4);
  ClosureLearner learner(H);
  // Round 2 claims a replay of round 1 with label 1, but h_1 = empty says 0.
  ListAdversary adversary({{3, false, LabelOrigin::truth()}, {2, true, LabelOrigin::replay(1)}});
  const auto tr = run_game(learner, adversary, H, {3, CommitMode::WorstCase});
  EXPECT_FALSE(tr.valid);
  EXPECT_EQ(tr.violation_round, 2U);

  ClosureLearner again(H);
  ListAdversary self_replay({{3, false, LabelOrigin::replay(1)}});
  const auto tr2 = run_game(again, self_replay, H, {1, CommitMode::WorstCase});
  EXPECT_FALSE(tr2.valid);
  EXPECT_EQ(tr2.violation_round, 1U);
}

TEST(RunGame, InconsistentCommitmentIsReported) {
  const auto H = generators::thresholds(4);
  ClosureLearner learner(H);
  ListAdversary adversary({{0, true, LabelOrigin::truth()}}, PointSet{});
  const auto tr = run_game(learner, adversary, H, {2, CommitMode::Fixed});
  EXPECT_FALSE(tr.valid);

  ScriptLearner l2({PointSet::of({3})});
  ListAdversary contradiction({{2, true, LabelOrigin::truth()}, {3, false, LabelOrigin::truth()}});
  // Round 2 disagrees with h_1 = {3} at 3, so it is reliable, and no threshold
  // is 1 at 2 but 0 at 3: VS* becomes empty.
  const auto tr2 = run_game(l2, contradiction, H, {2, CommitMode::WorstCase});
  EXPECT_FALSE(tr2.valid);
}

TEST(RunGame, SampleOutsideDomainIsReported) {
  const auto H = generators::thresholds(4);
  ClosureLearner learner(H);
  ListAdversary adversary({{9, true, LabelOrigin::truth()}});
  EXPECT_FALSE(run_game(learner, adversary, H, {1, CommitMode::WorstCase}).valid);
}

TEST(RunGame, RejectsZeroRounds) {
  const auto H = generators::thresholds(4);
  ClosureLearner learner(H);
  ListAdversary adversary({{0, true, LabelOrigin::truth()}});
  EXPECT_THROW(run_game(learner, adversary, H, {0, CommitMode::WorstCase}), Error);
}

TEST(ReliableState, ThresholdUpdate) {
  const auto H = generators::thresholds(4);
  ReliableState s(H);
  RoundRecord r{1, PointSet{}, 2, true, LabelOrigin::truth()};
  s = update_reliable_state(s, r);
  ASSERT_EQ(s.reliable_indices().size(), 1U);
  EXPECT_EQ(s.reliable_indices()[0], 1U);
  ASSERT_EQ(s.version_space().size(), 3U);
  EXPECT_EQ(s.version_space()[0], one_based({1, 2, 3, 4}));
  EXPECT_EQ(s.version_space()[2], one_based({3, 4}));

  // (x, y) now matches h_1 = empty at x = 0: not reliable.
  const auto before = s.version_space().size();
  EXPECT_FALSE(s.absorb_sample(2, 0, false));
  EXPECT_EQ(s.version_space().size(), before);
  EXPECT_EQ(s.reliable_indices().size(), 1U);
}

TEST(ReliableState, RoundOneIsAlwaysReliable) {
  const auto H = generators::thresholds(4);
  ReliableState s(H);
  EXPECT_TRUE(s.absorb_sample(1, 0, false));
}

TEST(TrapRegion, HandExample) {
  // VS* = {f_1, f_3} on thresholds [4], past hypotheses {empty, {2,3,4}}.
  const HypothesisClass vs(Domain(4), {one_based({1, 2, 3, 4}), one_based({3, 4})});
  ReliableState s(vs);
  s.record_hypothesis(PointSet{});
  s.record_hypothesis(one_based({2, 3, 4}));
  EXPECT_EQ(trap_region(s), one_based({2}));
  const auto w = find_trap(s);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->x, 1U);
  EXPECT_FALSE(w->target_zero(w->x));
  EXPECT_TRUE(w->target_one(w->x));
  EXPECT_FALSE(w->past_zero(w->x));
  EXPECT_TRUE(w->past_one(w->x));
}

TEST(TrapRegion, SinglePastHypothesisHasNoTrap) {
  ReliableState s(generators::thresholds(4));
  s.record_hypothesis(one_based({2, 3, 4}));
  EXPECT_TRUE(trap_region(s).empty());
  EXPECT_FALSE(find_trap(s).has_value());
}

TEST(Score, DescendingGameOnFourPoints) {
  const auto H = generators::thresholds(4);
  ClosureLearner learner(H);
  DescendingAdversary adversary;
  const auto tr = run_game(learner, adversary, H, {4, CommitMode::WorstCase});
  ASSERT_TRUE(tr.valid);
  EXPECT_EQ(score(tr.rounds, Domain(4).full()), 4U);
  EXPECT_EQ(tr.mistakes, 4U);
}

TEST(Score, AllCorrectIsZero) {
  const auto H = generators::thresholds(4);
  const Hypothesis f = one_based({3, 4});
  ScriptLearner learner({f});
  ListAdversary adversary({{0, false, LabelOrigin::truth()}, {3, true, LabelOrigin::truth()}}, f);
  const auto tr = run_game(learner, adversary, H, {6, CommitMode::Fixed});
  ASSERT_TRUE(tr.valid);
  EXPECT_EQ(tr.mistakes, 0U);
}

TEST(Score, AlternatingTrapLabelsGiveHalfTheRounds) {
  // A learner flipping between two hypotheses that split at x = 1 traps itself.
  const auto H = generators::thresholds(4);
  ScriptLearner learner({PointSet{}, one_based({2, 3, 4})});
  std::vector<Emission> first{{3, true, LabelOrigin::truth()}, {3, true, LabelOrigin::truth()}};
  auto exploit = std::make_unique<TrapExploitAdversary>();
  ScriptedAdversary adversary(first, std::move(exploit));
  const std::size_t T = 41;
  const auto tr = run_game(learner, adversary, H, {T, CommitMode::WorstCase});
  ASSERT_TRUE(tr.valid);
  EXPECT_GE(tr.mistakes, (T - 1) / 2);
  EXPECT_EQ(tr.final_state.reliable_indices().size(), 2U);
}

TEST(Transcript, MistakesMatchRecomputation) {
  const auto H = generators::two_intervals(6);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    HalvingLearner learner(H);
    RandomReplayAdversary adversary(H, make_stream(seed, 3));
    const auto tr = run_game(learner, adversary, H, {30, CommitMode::WorstCase});
    ASSERT_TRUE(tr.valid);
    ASSERT_TRUE(tr.target.has_value());
    EXPECT_EQ(tr.mistakes, score(tr.rounds, *tr.target));
    EXPECT_TRUE(tr.final_state.version_space().contains(*tr.target));
    for (const auto& r : tr.rounds) {
      if (r.origin.kind == LabelSource::Replay) {
        ASSERT_LT(r.origin.replay_round, r.t);
        EXPECT_EQ(tr.rounds[r.origin.replay_round - 1].hypothesis(r.x), r.y);
      }
    }
  }
}

TEST(Transcript, JsonHasAuditFields) {
  const auto H = generators::thresholds(4);
  ClosureLearner learner(H);
  DescendingAdversary adversary;
  const auto tr = run_game(learner, adversary, H, {4, CommitMode::WorstCase});
  const auto j = transcript_to_json(tr, H);
  EXPECT_EQ(j["mistakes"], 4);
  EXPECT_EQ(j["rounds"].size(), 4U);
  EXPECT_EQ(j["rounds"][0]["source"], "truth");
  EXPECT_EQ(j["target"], "1111");
  EXPECT_EQ(j["reliable_indices"].size(), 4U);
}
