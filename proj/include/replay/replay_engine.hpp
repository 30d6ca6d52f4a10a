#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "replay/hypothesis_class.hpp"

namespace replay {

enum class LabelSource { Truth, Replay };

/// Where a label came from, as claimed by the adversary. Kept for audit only;
/// the learner never sees it.
struct LabelOrigin {
  LabelSource kind = LabelSource::Truth;
  std::size_t replay_round = 0;  // 1-based round whose hypothesis is replayed

  static LabelOrigin truth() { return {}; }
  static LabelOrigin replay(std::size_t round) { return {LabelSource::Replay, round}; }
  friend bool operator==(const LabelOrigin&, const LabelOrigin&) = default;
};

struct Emission {
  Point x;
  bool y;
  LabelOrigin origin;
};

struct RoundRecord {
  std::size_t t;          // 1-based
  Hypothesis hypothesis;  // learner output for this round, emitted before x arrives
  Point x;
  bool y;
  LabelOrigin origin;

  bool prediction() const { return hypothesis(x); }
};

/// Reliable index set I_t, reliable version space VS*_t and the distinct
/// hypotheses output so far.
///
/// A round is reliable iff its label disagrees with every hypothesis output in
/// earlier rounds; round 1 is therefore always reliable.
class ReliableState {
 public:
  explicit ReliableState(const HypothesisClass& H) : version_space_(H) {}

  std::span<const std::size_t> reliable_indices() const { return reliable_; }
  const HypothesisClass& version_space() const { return version_space_; }
  std::span<const Hypothesis> past_hypotheses() const { return past_; }

  bool is_reliable(Point x, bool y) const {
    return std::none_of(past_.begin(), past_.end(), [&](Hypothesis h) { return h(x) == y; });
  }

  /// Adds round t to I when reliable and refilters VS*. Returns whether it was.
  bool absorb_sample(std::size_t t, Point x, bool y) {
    if (!is_reliable(x, y)) return false;
    reliable_.push_back(t);
    std::vector<Hypothesis> kept;
    for (Hypothesis h : version_space_) {
      if (h(x) == y) kept.push_back(h);
    }
    version_space_ = HypothesisClass::subclass(version_space_, std::move(kept));
    return true;
  }

  void record_hypothesis(Hypothesis h) {
    if (std::find(past_.begin(), past_.end(), h) == past_.end()) past_.push_back(h);
  }

 private:
  std::vector<std::size_t> reliable_;
  HypothesisClass version_space_;
  std::vector<Hypothesis> past_;
};

inline ReliableState update_reliable_state(ReliableState state, const RoundRecord& round) {
  state.absorb_sample(round.t, round.x, round.y);
  state.record_hypothesis(round.hypothesis);
  return state;
}

namespace detail {

/// Points where some member of `family` is 1 and some member is 0.
template <typename Range>
PointSet split_points(const Range& family, PointSet full) {
  PointSet any_one;
  PointSet all_one = full;
  bool nonempty = false;
  for (Hypothesis h : family) {
    any_one |= h;
    all_one &= h;
    nonempty = true;
  }
  return nonempty ? any_one - all_one : PointSet{};
}

}  // namespace detail

/// Points where the version space realises both labels and the recorded past
/// hypotheses realise both labels. Evaluated on a state whose version space is
/// VS*_t and whose past hypotheses are H_{t-1}, this is Trap_t.
inline PointSet trap_region(const ReliableState& state) {
  const PointSet full = state.version_space().domain().full();
  return detail::split_points(state.version_space(), full) &
         detail::split_points(state.past_hypotheses(), full);
}

/// A trap point with the two version-space members and two past hypotheses
/// that realise both labels there.
struct TrapWitness {
  Point x;
  Hypothesis target_zero;  // in VS*, 0 at x
  Hypothesis target_one;   // in VS*, 1 at x
  Hypothesis past_zero;    // output earlier, 0 at x
  Hypothesis past_one;     // output earlier, 1 at x
};

inline std::optional<TrapWitness> find_trap(const ReliableState& state) {
  const PointSet region = trap_region(state);
  if (region.empty()) return std::nullopt;
  const Point x = region.first();
  auto pick = [x](auto&& family, bool label) {
    for (Hypothesis h : family) {
      if (h(x) == label) return h;
    }
    return Hypothesis{};
  };
  return TrapWitness{x, pick(state.version_space(), false), pick(state.version_space(), true),
                     pick(state.past_hypotheses(), false), pick(state.past_hypotheses(), true)};
}

/// Rounds with y_t != prediction and y_t = target(x_t).
inline std::size_t score(std::span<const RoundRecord> rounds, Hypothesis target) {
  return static_cast<std::size_t>(std::count_if(rounds.begin(), rounds.end(), [&](const RoundRecord& r) {
    return r.y != r.prediction() && r.y == target(r.x);
  }));
}

/// Counted mistakes where the learner predicted 1 on a true 0, with labels
/// read in the f-representation (f = 0 gives the plain count).
inline std::size_t false_positive_mistakes(std::span<const RoundRecord> rounds, Hypothesis target,
                                           const Representation& f = {}) {
  return static_cast<std::size_t>(std::count_if(rounds.begin(), rounds.end(), [&](const RoundRecord& r) {
    const bool flip = f.mask(r.x);
    return r.y == target(r.x) && r.y == flip && r.prediction() != flip;
  }));
}

struct Commitment {
  Hypothesis target;
  std::size_t mistakes;
};

/// The consistent target maximising the mistake count; first in class order on ties.
inline std::optional<Commitment> worst_case_score(std::span<const RoundRecord> rounds,
                                                  const HypothesisClass& consistent) {
  std::optional<Commitment> best;
  for (Hypothesis f : consistent) {
    const std::size_t m = score(rounds, f);
    if (!best || m > best->mistakes) best = Commitment{f, m};
  }
  return best;
}

/// The learner side of the protocol: emit a hypothesis, then observe (x, y).
/// No other information reaches the learner.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual Hypothesis hypothesis() = 0;
  virtual void observe(Point x, bool y) = 0;
};

/// Everything Nature may condition on at round t: the class, the history, the
/// learner's current hypothesis and the reliable state before this round.
struct GameView {
  const HypothesisClass& cls;
  std::size_t t;
  std::size_t rounds;
  std::span<const RoundRecord> history;
  Hypothesis current;
  const ReliableState& state;

  /// Hypothesis output at round i (1-based, i < t).
  Hypothesis hypothesis_at(std::size_t i) const { return history[i - 1].hypothesis; }

  /// Latest earlier round whose hypothesis labels x with y, if any.
  std::optional<std::size_t> replay_source(Point x, bool y) const {
    for (std::size_t i = history.size(); i > 0; --i) {
      if (history[i - 1].hypothesis(x) == y) return i;
    }
    return std::nullopt;
  }
};

class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual Emission next(const GameView& view) = 0;
  /// Target for fixed-target scoring; nullopt defers to the worst case.
  virtual std::optional<Hypothesis> commit(const GameView&) { return std::nullopt; }
};

enum class CommitMode {
  WorstCase,  // Nature picks the consistent target maximising mistakes
  Fixed,      // the adversary names its target
};

struct GameOptions {
  std::size_t rounds = 1;
  CommitMode commit = CommitMode::WorstCase;
};

struct GameTranscript {
  std::vector<RoundRecord> rounds;
  ReliableState final_state;
  std::vector<PointSet> traps;  // Trap_t for t = 1..T
  std::optional<Hypothesis> target;
  std::size_t mistakes = 0;
  std::size_t false_positives = 0;
  bool valid = true;
  std::optional<std::size_t> violation_round;
  std::string violation;

  /// First round with a nonempty trap region.
  std::optional<std::size_t> first_trap_round() const {
    for (std::size_t t = 0; t < traps.size(); ++t) {
      if (!traps[t].empty()) return t + 1;
    }
    return std::nullopt;
  }
};

/// Plays T rounds of the replay game and scores the result.
///
/// Per round: the learner emits its hypothesis, the adversary emits (x, y,
/// origin), the reliable state is updated and Trap_t recorded, then the
/// learner observes (x, y). After round T a target is committed and the
/// transcript is scored. An illegal replay or an impossible commitment marks
/// the transcript invalid and stops the game.
inline GameTranscript run_game(Learner& learner, Adversary& adversary, const HypothesisClass& H,
                               const GameOptions& options) {
  if (options.rounds == 0) throw Error("run_game needs at least one round");
  GameTranscript tr{{}, ReliableState(H), {}, std::nullopt, 0, 0, true, std::nullopt, {}};
  tr.rounds.reserve(options.rounds);
  auto fail = [&tr](std::size_t t, std::string why) {
    tr.valid = false;
    tr.violation_round = t;
    tr.violation = std::move(why);
  };

  for (std::size_t t = 1; t <= options.rounds; ++t) {
    const Hypothesis h = learner.hypothesis();
    if (!H.domain().contains(h)) throw DomainMismatch("learner emitted a hypothesis outside the domain");
    const GameView view{H, t, options.rounds, tr.rounds, h, tr.final_state};
    const Emission e = adversary.next(view);
    if (!H.domain().contains(e.x)) {
      fail(t, "sample outside the domain");
      return tr;
    }
    if (e.origin.kind == LabelSource::Replay) {
      const std::size_t i = e.origin.replay_round;
      if (i == 0 || i >= t || tr.rounds[i - 1].hypothesis(e.x) != e.y) {
        fail(t, "illegal replay of round " + std::to_string(i));
        return tr;
      }
    }
    tr.rounds.push_back(RoundRecord{t, h, e.x, e.y, e.origin});
    tr.final_state.absorb_sample(t, e.x, e.y);
    tr.traps.push_back(trap_region(tr.final_state));
    tr.final_state.record_hypothesis(h);
    learner.observe(e.x, e.y);
  }

  const HypothesisClass& consistent = tr.final_state.version_space();
  if (options.commit == CommitMode::Fixed) {
    const GameView view{H, options.rounds + 1, options.rounds, tr.rounds, Hypothesis{}, tr.final_state};
    const auto target = adversary.commit(view);
    if (!target) {
      fail(options.rounds, "adversary did not commit a target");
      return tr;
    }
    if (!consistent.contains(*target)) {
      fail(options.rounds, "committed target is not consistent with the reliable rounds");
      return tr;
    }
    tr.target = *target;
    tr.mistakes = score(tr.rounds, *target);
  } else {
    const auto best = worst_case_score(tr.rounds, consistent);
    if (!best) {
      fail(options.rounds, "no hypothesis is consistent with the reliable rounds");
      return tr;
    }
    tr.target = best->target;
    tr.mistakes = best->mistakes;
  }
  tr.false_positives = false_positive_mistakes(tr.rounds, *tr.target);
  return tr;
}

}  // namespace replay
