#include <gtest/gtest.h>

#include "fuzz_suite.hpp"
#include "replay/learners.hpp"

using namespace replay;

namespace {

/// Checks the closure learner's invariants after every round of one game.
class ObservedClosure final : public Learner {
 public:
  ObservedClosure(const HypothesisClass& H, Representation f) : inner_(H, f), f_(f) {}

  Hypothesis hypothesis() override { return inner_.hypothesis(); }

  void observe(Point x, bool y) override {
    const Hypothesis before = inner_.internal_state();
    inner_.observe(x, y);
    const Hypothesis after = inner_.internal_state();
    // Only a flipped 1 outside the state moves it, and then only upwards.
    if (before != after) {
      EXPECT_NE(y, f_.mask(x));
      EXPECT_FALSE(before(x));
      EXPECT_TRUE(before.is_strict_subset_of(after));
    }
    states_.push_back(after);
  }

  const std::vector<Hypothesis>& states() const { return states_; }

 private:
  ClosureLearner inner_;
  Representation f_;
  std::vector<Hypothesis> states_;
};

}  // namespace

TEST(ClosureProperties, FuzzSuite) {
  const auto advs = fuzz::adversaries();
  for (std::uint64_t c = 0; c < 60; ++c) {
    const auto H = fuzz::corpus_class(c);
    const auto ext = extended_threshold_dimension(H);
    for (std::size_t a = 0; a < advs.size(); ++a) {
      ObservedClosure learner(H, ext.f);
      auto adversary = advs[a].make(H, c * 31 + a);
      const auto tr = run_game(learner, *adversary, H, {50, CommitMode::WorstCase});
      ASSERT_TRUE(tr.valid) << "class " << c << ' ' << advs[a].name << ": " << tr.violation;
      EXPECT_EQ(false_positive_mistakes(tr.rounds, *tr.target, ext.f), 0U);
      EXPECT_LE(tr.mistakes, ext.value);
      EXPECT_FALSE(tr.first_trap_round().has_value());
      // The state sits below every reliable-consistent member in the f-representation.
      for (Hypothesis h : tr.final_state.version_space()) {
        EXPECT_TRUE(learner.states().back().is_subset_of(ext.f.apply(h)));
      }
      // Outputs form a chain in the f-representation.
      for (std::size_t i = 1; i < learner.states().size(); ++i) {
        EXPECT_TRUE(learner.states()[i - 1].is_subset_of(learner.states()[i]));
      }
    }
  }
}

TEST(ClosureProperties, PlainClosureHasNoFalsePositives) {
  const auto advs = fuzz::adversaries();
  for (std::uint64_t c = 0; c < 60; ++c) {
    const auto H = fuzz::corpus_class(c);
    for (std::size_t a = 0; a < advs.size(); ++a) {
      ClosureLearner learner(H);
      auto adversary = advs[a].make(H, c * 17 + a);
      const auto tr = run_game(learner, *adversary, H, {50, CommitMode::WorstCase});
      ASSERT_TRUE(tr.valid);
      EXPECT_EQ(tr.false_positives, 0U);
      EXPECT_FALSE(tr.first_trap_round().has_value());
      EXPECT_LE(tr.mistakes, threshold_dimension(intersection_closure(H)).value);
    }
  }
}

TEST(ReliableState, VersionSpaceOnlyShrinks) {
  const auto advs = fuzz::adversaries();
  for (std::uint64_t c = 0; c < 40; ++c) {
    const auto H = fuzz::corpus_class(c);
    HalvingLearner learner(H);
    auto adversary = advs[c % 4].make(H, c);
    const auto tr = run_game(learner, *adversary, H, {30, CommitMode::WorstCase});
    ASSERT_TRUE(tr.valid);
    ReliableState s(H);
    std::size_t prev = H.size();
    for (const auto& r : tr.rounds) {
      s = update_reliable_state(s, r);
      EXPECT_LE(s.version_space().size(), prev);
      for (Hypothesis h : s.version_space()) EXPECT_TRUE(H.contains(h));
      prev = s.version_space().size();
    }
    EXPECT_EQ(s.version_space(), tr.final_state.version_space());
  }
}

TEST(Traps, ExploitationScoresHalfOfTheRemainingRounds) {
  const auto advs = fuzz::adversaries();
  const std::size_t T = 50;
  std::size_t traps_seen = 0;
  for (std::uint64_t c = 0; c < 60; ++c) {
    const auto H = fuzz::corpus_class(c);
    for (std::size_t a = 0; a < advs.size(); ++a) {
      GreedyProperLearner learner(H);
      auto adversary = advs[a].make(H, c * 7 + a);
      const auto tr = run_game(learner, *adversary, H, {T, CommitMode::WorstCase});
      ASSERT_TRUE(tr.valid);
      const auto t = tr.first_trap_round();
      if (!t || 2 * *t > T) continue;
      ++traps_seen;
      std::vector<Emission> prefix;
      for (std::size_t i = 0; i < *t; ++i) prefix.push_back({tr.rounds[i].x, tr.rounds[i].y, tr.rounds[i].origin});
      GreedyProperLearner again(H);
      ScriptedAdversary exploit(prefix, std::make_unique<TrapExploitAdversary>());
      const auto tr2 = run_game(again, exploit, H, {T, CommitMode::WorstCase});
      ASSERT_TRUE(tr2.valid);
      EXPECT_GE(static_cast<double>(tr2.mistakes), (static_cast<double>(T) - *t) / 2.0 - 1.0);
    }
  }
  EXPECT_GT(traps_seen, 0U);
}
