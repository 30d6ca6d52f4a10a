#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "replay/dimensions.hpp"
#include "replay/distributions.hpp"
#include "replay/hypothesis_class.hpp"
#include "replay/replay_engine.hpp"
#include "replay/rng.hpp"

namespace replay {

/// Plays a fixed trap point x* with the label opposite to the learner's
/// current prediction, attributed to an earlier hypothesis carrying that label.
/// Those labels are never reliable, so VS* and I stay frozen while both
/// candidate targets in the witness remain consistent.
class TrapExploit {
 public:
  explicit TrapExploit(TrapWitness w) : w_(w) {}

  const TrapWitness& witness() const { return w_; }

  Emission next(const GameView& view) const {
    const bool y = !view.current(w_.x);
    const auto source = view.replay_source(w_.x, y);
    if (!source) throw Error("trap exploit: no past hypothesis carries the needed label");
    return {w_.x, y, LabelOrigin::replay(*source)};
  }

 private:
  TrapWitness w_;
};

/// Reveals f*(x) on a fixed sequence of points or on i.i.d. draws.
class TruthAdversary final : public Adversary {
 public:
  TruthAdversary(Hypothesis target, std::vector<Point> sequence)
      : target_(target), source_(std::move(sequence)) {}
  TruthAdversary(Hypothesis target, DiscreteDistribution dist, Rng rng)
      : target_(target), source_(Sampled{std::move(dist), rng}) {}

  Emission next(const GameView& view) override {
    Point x = 0;
    if (auto* seq = std::get_if<std::vector<Point>>(&source_)) {
      if (view.t > seq->size()) throw Error("truth adversary: sequence exhausted");
      x = (*seq)[view.t - 1];
    } else {
      auto& s = std::get<Sampled>(source_);
      x = s.dist.sample(s.rng);
    }
    return {x, target_(x), LabelOrigin::truth()};
  }

  std::optional<Hypothesis> commit(const GameView&) override { return target_; }

 private:
  struct Sampled {
    DiscreteDistribution dist;
    Rng rng;
  };
  Hypothesis target_;
  std::variant<std::vector<Point>, Sampled> source_;
};

/// The threshold lower-bound sequence. With P = h_1 the learner's first
/// output, it walks X \ P downwards with label 1 or P upwards with label 0,
/// whichever region is larger. Once the points run out it repeats the last
/// one. A trap in the reliable state switches it to exploitation.
class DescendingAdversary final : public Adversary {
 public:
  Emission next(const GameView& view) override {
    if (view.t == 1) plan(view);
    if (exploit_) return exploit_->next(view);
    if (view.t > 1) {
      if (auto trap = find_trap(view.state)) {
        exploit_.emplace(*trap);
        return exploit_->next(view);
      }
    }
    const std::size_t i = std::min(view.t - 1, order_.size() - 1);
    const Point x = order_[i];
    return {x, consistent_label(view, x, label_), LabelOrigin::truth()};
  }

  bool exploiting() const { return exploit_.has_value(); }

 private:
  // Outside thresholds the planned label can contradict every member still
  // consistent with the reliable rounds; then the other label is used.
  static bool consistent_label(const GameView& view, Point x, bool y) {
    if (!view.state.is_reliable(x, y)) return y;
    const auto& vs = view.state.version_space();
    return std::any_of(vs.begin(), vs.end(), [&](Hypothesis h) { return h(x) == y; }) ? y : !y;
  }

  void plan(const GameView& view) {
    const PointSet full = view.cls.domain().full();
    const PointSet positive = view.current;
    const PointSet negative = full - positive;
    order_.clear();
    if (negative.size() >= positive.size()) {
      label_ = true;
      for (Point x : negative) order_.push_back(x);
      std::reverse(order_.begin(), order_.end());
    } else {
      label_ = false;
      for (Point x : positive) order_.push_back(x);
    }
  }

  std::vector<Point> order_;
  bool label_ = true;
  std::optional<TrapExploit> exploit_;
};

namespace detail {

/// A maximum chain of an intersection-closed family, walked upward from its
/// least element. At each step the next element must keep the chain maximal;
/// among those, the one adding the point farthest from the points already
/// chosen wins, then the smallest point. Returns nullopt if the family is too
/// large for the quadratic walk.
inline std::optional<WitnessSet> spread_witness(const ClosureFamily& family, std::size_t max_elements = 4096) {
  const auto e = family.elements();
  const std::size_t m = e.size();
  if (m > max_elements) return std::nullopt;
  std::vector<std::size_t> height(m, 0);
  for (std::size_t i = m; i-- > 0;) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (e[i].is_strict_subset_of(e[j])) height[i] = std::max(height[i], height[j] + 1);
    }
  }
  WitnessSet w;
  std::size_t cur = 0;
  w.hypotheses.push_back(e[0]);
  while (height[cur] > 0) {
    std::optional<std::size_t> best;
    Point best_x = 0;
    std::int64_t best_score = -1;
    for (std::size_t j = cur + 1; j < m; ++j) {
      if (height[j] + 1 != height[cur] || !e[cur].is_strict_subset_of(e[j])) continue;
      for (Point x : e[j] - e[cur]) {
        std::int64_t score = 0;
        if (!w.points.empty()) {
          score = std::numeric_limits<std::int64_t>::max();
          for (Point p : w.points) {
            score = std::min<std::int64_t>(score, std::abs(static_cast<std::int64_t>(x) - static_cast<std::int64_t>(p)));
          }
        }
        if (score > best_score || (score == best_score && x < best_x)) {
          best = j;
          best_x = x;
          best_score = score;
        }
      }
    }
    cur = *best;
    w.points.push_back(best_x);
    w.hypotheses.push_back(e[cur]);
  }
  return w;
}

/// Witness of TDim(closure(H^f)) in the f-representation, preferring the
/// spread walk and falling back to the dimension search on large families.
inline WitnessSet adversary_witness(const HypothesisClass& H, Representation f) {
  const ClosureFamily family = intersection_closure(apply_representation(H, f));
  if (auto w = spread_witness(family)) return *std::move(w);
  return threshold_dimension(family).witness;
}

/// First member of H whose f-representation contains `top`, flipped back.
inline std::optional<Hypothesis> member_above(const HypothesisClass& H, Representation f, Hypothesis top) {
  for (Hypothesis h : H) {
    if (top.is_subset_of(f.apply(h))) return h;
  }
  return std::nullopt;
}

}  // namespace detail

/// Adaptive lower-bound adversary for a general class. From the learner's
/// first output f it takes a witness chain of closure(H^f) and plays its
/// points in order with flipped label 1. If the learner ever creates a trap
/// it switches to exploitation for the rest of the game. Labels are those of
/// a member whose f-representation contains the top of the chain; after the
/// witness points are used up it repeats the first one.
class WitnessChainAdversary final : public Adversary {
 public:
  Emission next(const GameView& view) override {
    if (view.t == 1) {
      f_ = Representation{view.current};
      witness_ = detail::adversary_witness(view.cls, f_);
      const Hypothesis top = witness_.hypotheses.empty() ? Hypothesis{} : witness_.hypotheses.back();
      target_ = detail::member_above(view.cls, f_, top).value_or(view.cls[0]);
    }
    if (exploit_) return exploit_->next(view);
    if (view.t > 1) {
      if (auto trap = find_trap(view.state)) {
        exploit_.emplace(*trap);
        trap_round_ = view.t;
        return exploit_->next(view);
      }
    }
    if (witness_.points.empty()) return {0, target_(0), LabelOrigin::truth()};
    const std::size_t i = view.t - 1 < witness_.points.size() ? view.t - 1 : 0;
    const Point x = witness_.points[i];
    return {x, target_(x), LabelOrigin::truth()};
  }

  const WitnessSet& witness() const { return witness_; }
  const Representation& representation() const { return f_; }
  std::optional<std::size_t> trap_round() const { return trap_round_; }

 private:
  Representation f_;
  WitnessSet witness_;
  Hypothesis target_;
  std::optional<TrapExploit> exploit_;
  std::optional<std::size_t> trap_round_;
};

/// Adaptive trap exploitation from whatever state the game is in when it
/// takes over; with a distribution it becomes the stochastic variant, which
/// only contests x* when x* is drawn and otherwise replays the most recent
/// hypothesis.
class TrapExploitAdversary final : public Adversary {
 public:
  TrapExploitAdversary() = default;
  TrapExploitAdversary(DiscreteDistribution dist, Rng rng) : sampled_(Sampled{std::move(dist), rng}) {}

  Emission next(const GameView& view) override {
    if (!exploit_) {
      auto trap = find_trap(view.state);
      if (!trap) throw Error("trap exploit: the reliable state has no trap");
      exploit_.emplace(*trap);
    }
    if (!sampled_) return exploit_->next(view);
    const Point x = sampled_->dist.sample(sampled_->rng);
    if (x == exploit_->witness().x) return exploit_->next(view);
    const std::size_t last = view.t - 1;
    return {x, view.hypothesis_at(last)(x), LabelOrigin::replay(last)};
  }

  std::optional<TrapWitness> witness() const {
    return exploit_ ? std::optional(exploit_->witness()) : std::nullopt;
  }

 private:
  struct Sampled {
    DiscreteDistribution dist;
    Rng rng;
  };
  std::optional<Sampled> sampled_;
  std::optional<TrapExploit> exploit_;
};

/// Stochastic lower-bound adversary. From the learner's first output f it
/// takes the witness points of closure(H^f), draws i.i.d. from the geometric
/// law over them and reveals the labels of a target containing the top of the
/// chain, so every draw carries flipped label 1. A trap on a supported point
/// during the first half switches to the stochastic trap exploit.
class GeometricStochasticAdversary final : public Adversary {
 public:
  explicit GeometricStochasticAdversary(Rng rng) : rng_(rng) {}

  Emission next(const GameView& view) override {
    if (view.t == 1) plan(view);
    if (exploit_) return contest(view);
    if (view.t > 1 && 2 * view.t <= view.rounds + 1) {
      if (auto trap = find_trap(view.state); trap && dist_->support().contains(trap->x)) {
        exploit_.emplace(*trap);
        trap_round_ = view.t;
        return contest(view);
      }
    }
    const Point x = dist_->sample(rng_);
    return {x, target_(x), LabelOrigin::truth()};
  }

  std::optional<Hypothesis> commit(const GameView&) override { return target_; }

  const DiscreteDistribution& distribution() const { return *dist_; }
  Hypothesis target() const { return target_; }
  std::optional<std::size_t> trap_round() const { return trap_round_; }

 private:
  void plan(const GameView& view) {
    const Representation f{view.current};
    const WitnessSet w = detail::adversary_witness(view.cls, f);
    const Hypothesis top = w.hypotheses.empty() ? Hypothesis{} : w.hypotheses.back();
    target_ = detail::member_above(view.cls, f, top).value_or(view.cls[0]);
    std::vector<Point> pts = w.points;
    if (pts.empty()) pts.push_back(0);
    dist_.emplace(geometric_witness(std::move(pts)));
  }

  Emission contest(const GameView& view) {
    const Point x = dist_->sample(rng_);
    if (x == exploit_->witness().x) return exploit_->next(view);
    const std::size_t last = view.t - 1;
    return {x, view.hypothesis_at(last)(x), LabelOrigin::replay(last)};
  }

  Rng rng_;
  std::optional<DiscreteDistribution> dist_;
  Hypothesis target_;
  std::optional<TrapExploit> exploit_;
  std::optional<std::size_t> trap_round_;
};

/// Fuzzing adversary: a hidden target drawn from H, uniform points (biased
/// towards the learner's disagreements with the target), and with probability
/// `replay_prob` a replay of a random earlier hypothesis.
class RandomReplayAdversary final : public Adversary {
 public:
  RandomReplayAdversary(const HypothesisClass& H, Rng rng, double replay_prob = 0.5, double bias = 0.5)
      : rng_(rng), replay_prob_(replay_prob), bias_(bias) {
    target_ = H[uniform_index(rng_, H.size())];
  }

  Emission next(const GameView& view) override {
    const std::size_t n = view.cls.domain().size();
    const PointSet disagreement = view.current ^ target_;
    Point x = static_cast<Point>(uniform_index(rng_, n));
    if (!disagreement.empty() && bernoulli(rng_, bias_)) {
      const auto pts = disagreement.points();
      x = pts[uniform_index(rng_, pts.size())];
    }
    if (view.t > 1 && bernoulli(rng_, replay_prob_)) {
      const std::size_t i = 1 + uniform_index(rng_, view.t - 1);
      return {x, view.hypothesis_at(i)(x), LabelOrigin::replay(i)};
    }
    return {x, target_(x), LabelOrigin::truth()};
  }

  Hypothesis target() const { return target_; }

 private:
  Rng rng_;
  double replay_prob_;
  double bias_;
  Hypothesis target_;
};

/// Reveals one true label, then replays the first hypothesis wherever it
/// disagrees with the target. A learner that trusts every label is steered
/// away from the target.
class ReplayFirstAdversary final : public Adversary {
 public:
  explicit ReplayFirstAdversary(Hypothesis target) : target_(target) {}

  Emission next(const GameView& view) override {
    const PointSet full = view.cls.domain().full();
    if (view.t == 1) {
      const PointSet agree = full - (view.current ^ target_);
      const Point x = agree.empty() ? 0 : agree.first();
      return {x, target_(x), LabelOrigin::truth()};
    }
    const Hypothesis first = view.hypothesis_at(1);
    const PointSet disagree = first ^ target_;
    if (disagree.empty()) return {0, target_(0), LabelOrigin::truth()};
    const auto pts = disagree.points();
    const Point x = pts[(view.t - 2) % pts.size()];
    return {x, first(x), LabelOrigin::replay(1)};
  }

  std::optional<Hypothesis> commit(const GameView&) override { return target_; }

 private:
  Hypothesis target_;
};

/// Plays recorded emissions for the first rounds, then hands over.
class ScriptedAdversary final : public Adversary {
 public:
  ScriptedAdversary(std::vector<Emission> prefix, std::unique_ptr<Adversary> then)
      : prefix_(std::move(prefix)), then_(std::move(then)) {}

  Emission next(const GameView& view) override {
    if (view.t <= prefix_.size()) return prefix_[view.t - 1];
    return then_->next(view);
  }

  std::optional<Hypothesis> commit(const GameView& view) override { return then_->commit(view); }

 private:
  std::vector<Emission> prefix_;
  std::unique_ptr<Adversary> then_;
};

struct AdversaryOptions {
  std::uint64_t seed = 0;
  std::size_t rounds = 1;
  std::optional<Hypothesis> target;
  double replay_prob = 0.5;
  double bias = 0.5;
};

inline const std::vector<std::string>& adversary_names() {
  static const std::vector<std::string> names{"truth",          "descending",           "witness_chain",
                                              "trap_exploit",   "geometric_stochastic", "uniform_stochastic",
                                              "random_replay",  "replay_first"};
  return names;
}

/// The member of largest cardinality, earliest in class order on ties.
inline Hypothesis largest_member(const HypothesisClass& H) {
  Hypothesis best = H[0];
  for (Hypothesis h : H) {
    if (h.size() > best.size()) best = h;
  }
  return best;
}

/// Builds a finite-class adversary by registry name. The convex sampler is
/// separate since it works on points in R^d.
inline std::unique_ptr<Adversary> make_adversary(std::string_view name, const HypothesisClass& H,
                                                 const AdversaryOptions& opt = {}) {
  Rng rng = make_stream(opt.seed, 0);
  const Hypothesis target = opt.target.value_or(largest_member(H));
  if (opt.target && !H.contains(*opt.target)) throw Error("adversary target is not a member of the class");
  if (name == "truth") {
    // Sweeps the domain in order, cycling as needed.
    std::vector<Point> seq(opt.rounds);
    for (std::size_t i = 0; i < seq.size(); ++i) seq[i] = static_cast<Point>(i % H.domain().size());
    return std::make_unique<TruthAdversary>(target, std::move(seq));
  }
  if (name == "uniform_stochastic") return std::make_unique<TruthAdversary>(target, uniform_distribution(H.domain()), rng);
  if (name == "descending") return std::make_unique<DescendingAdversary>();
  if (name == "witness_chain") return std::make_unique<WitnessChainAdversary>();
  if (name == "trap_exploit") return std::make_unique<TrapExploitAdversary>();
  if (name == "geometric_stochastic") return std::make_unique<GeometricStochasticAdversary>(rng);
  if (name == "random_replay") return std::make_unique<RandomReplayAdversary>(H, rng, opt.replay_prob, opt.bias);
  if (name == "replay_first") return std::make_unique<ReplayFirstAdversary>(target);
  throw Error("unknown adversary: " + std::string(name));
}

}  // namespace replay
