#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "replay/dimensions.hpp"
#include "replay/hypothesis_class.hpp"
#include "replay/replay_engine.hpp"

namespace replay {

/// The closure algorithm run in the f-representation of H.
///
/// Internally the learner keeps a set in the intersection closure of H^f,
/// starting from its least element. A flipped label of 1 at a point the state
/// excludes grows the state to the closure of state + {x}; every other
/// observation leaves it alone. The emitted hypothesis is the state flipped
/// back by f.
class ClosureLearner final : public Learner {
 public:
  explicit ClosureLearner(const HypothesisClass& H, Representation f = {})
      : flipped_(apply_representation(H, f)), f_(f), state_(flipped_.intersection_of_all()) {}

  Hypothesis hypothesis() override { return f_.apply(state_); }

  void observe(Point x, bool y) override {
    const bool flipped_label = y != f_.mask(x);
    if (flipped_label && !state_(x)) {
      state_ = closure_of(flipped_, state_.with(x));
      ++updates_;
    }
  }

  /// Current state in the f-representation.
  Hypothesis internal_state() const { return state_; }
  const Representation& representation() const { return f_; }
  std::size_t updates() const { return updates_; }

 private:
  HypothesisClass flipped_;
  Representation f_;
  Hypothesis state_;
  std::size_t updates_ = 0;
};

/// Starts at the all-zero hypothesis and moves to I{. >= x} on a false negative at x.
class ConservativeThresholdLearner final : public Learner {
 public:
  explicit ConservativeThresholdLearner(Domain domain) : domain_(domain), threshold_(domain.size()) {}

  Hypothesis hypothesis() override { return domain_.full() - PointSet::prefix(threshold_); }

  void observe(Point x, bool y) override {
    if (y && x < threshold_) threshold_ = x;
  }

  /// Smallest point predicted 1, if any.
  std::optional<Point> threshold() const {
    return threshold_ < domain_.size() ? std::optional<Point>(static_cast<Point>(threshold_)) : std::nullopt;
  }

 private:
  Domain domain_;
  std::size_t threshold_;  // domain size encodes the all-zero hypothesis
};

/// Majority vote of a version space that drops every hypothesis disagreeing
/// with any observed label, replayed or not. Ties predict 1; an empty version
/// space predicts 0 everywhere.
class HalvingLearner final : public Learner {
 public:
  explicit HalvingLearner(const HypothesisClass& H) : version_space_(H) {}

  Hypothesis hypothesis() override {
    Hypothesis out;
    if (version_space_.empty()) return out;
    for (Point x = 0; x < version_space_.domain().size(); ++x) {
      std::size_t ones = 0;
      for (Hypothesis h : version_space_) ones += h(x) ? 1 : 0;
      if (2 * ones >= version_space_.size()) out = out.with(x);
    }
    return out;
  }

  void observe(Point x, bool y) override {
    std::vector<Hypothesis> kept;
    for (Hypothesis h : version_space_) {
      if (h(x) == y) kept.push_back(h);
    }
    version_space_ = HypothesisClass::subclass(version_space_, std::move(kept));
    if (version_space_.empty()) exhausted_ = true;
  }

  const HypothesisClass& version_space() const { return version_space_; }
  bool version_space_contains(Hypothesis h) const { return version_space_.contains(h); }
  bool exhausted() const { return exhausted_; }

 private:
  HypothesisClass version_space_;
  bool exhausted_ = false;
};

/// A proper learner that tracks which labels disagreed with all of its own
/// past outputs and emits the smallest member of H consistent with those,
/// earliest in class order on ties. With no consistent member it falls back
/// to the first member of H.
class GreedyProperLearner final : public Learner {
 public:
  explicit GreedyProperLearner(const HypothesisClass& H) : H_(H), current_(pick()) {}

  Hypothesis hypothesis() override { return current_; }

  void observe(Point x, bool y) override {
    const bool reliable = std::none_of(past_.begin(), past_.end(), [&](Hypothesis h) { return h(x) == y; });
    if (std::find(past_.begin(), past_.end(), current_) == past_.end()) past_.push_back(current_);
    if (reliable) {
      record_.push_back({x, y});
      current_ = pick();
    }
  }

  std::span<const LabeledExample> record() const { return record_; }
  bool fell_back() const { return fell_back_; }

 private:
  Hypothesis pick() {
    std::optional<Hypothesis> best;
    for (Hypothesis h : H_) {
      if (!consistent_with(h, record_)) continue;
      if (!best || h.size() < best->size()) best = h;
    }
    if (!best) {
      fell_back_ = true;
      return H_[0];
    }
    return *best;
  }

  HypothesisClass H_;
  std::vector<LabeledExample> record_;
  std::vector<Hypothesis> past_;
  bool fell_back_ = false;
  Hypothesis current_;
};

inline const std::vector<std::string>& learner_names() {
  static const std::vector<std::string> names{"closure",  "closure_extdim", "closure_vcd1", "conservative_threshold",
                                              "halving",  "greedy_proper"};
  return names;
}

/// Builds a finite-class learner by registry name. The convex hull learner
/// works on points in R^d and is constructed separately.
inline std::unique_ptr<Learner> make_learner(std::string_view name, const HypothesisClass& H,
                                             unsigned workers = 1) {
  if (name == "closure") return std::make_unique<ClosureLearner>(H);
  if (name == "closure_extdim") {
    return std::make_unique<ClosureLearner>(H, extended_threshold_dimension(H, workers).f);
  }
  if (name == "closure_vcd1") {
    const Vcd1Result r = find_vcd1_representation(H);
    if (!r.f) throw Error("closure_vcd1: " + r.diagnostic);
    return std::make_unique<ClosureLearner>(H, *r.f);
  }
  if (name == "conservative_threshold") return std::make_unique<ConservativeThresholdLearner>(H.domain());
  if (name == "halving") return std::make_unique<HalvingLearner>(H);
  if (name == "greedy_proper") return std::make_unique<GreedyProperLearner>(H);
  throw Error("unknown learner: " + std::string(name));
}

}  // namespace replay
