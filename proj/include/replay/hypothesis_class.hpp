#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "replay/point_set.hpp"

namespace replay {

struct LabeledExample {
  Point x;
  bool y;
};

/// A mask f over the domain. The f-representation of h is the set of points
/// where h and f disagree, i.e. the symmetric difference h ^ f.
struct Representation {
  PointSet mask;

  Hypothesis apply(Hypothesis h) const { return h ^ mask; }
  friend bool operator==(const Representation&, const Representation&) = default;
};

/// An ordered, duplicate-free family of hypotheses over a shared domain.
class HypothesisClass {
 public:
  HypothesisClass(Domain domain, std::vector<Hypothesis> hypotheses)
      : domain_(domain), hypotheses_(std::move(hypotheses)) {
    if (hypotheses_.empty()) throw Error("hypothesis class must be nonempty");
    validate();
  }

  /// A restriction of `parent`; unlike the public constructor this may be empty.
  static HypothesisClass subclass(const HypothesisClass& parent, std::vector<Hypothesis> members) {
    return HypothesisClass(parent.domain_, std::move(members), Unchecked{});
  }

  const Domain& domain() const { return domain_; }
  std::size_t size() const { return hypotheses_.size(); }
  bool empty() const { return hypotheses_.empty(); }
  const Hypothesis& operator[](std::size_t i) const { return hypotheses_[i]; }
  std::span<const Hypothesis> hypotheses() const { return hypotheses_; }
  auto begin() const { return hypotheses_.begin(); }
  auto end() const { return hypotheses_.end(); }

  bool contains(Hypothesis h) const {
    return std::find(hypotheses_.begin(), hypotheses_.end(), h) != hypotheses_.end();
  }

  /// Intersection of every member; the full domain for an empty class.
  Hypothesis intersection_of_all() const {
    Hypothesis acc = domain_.full();
    for (Hypothesis h : hypotheses_) acc &= h;
    return acc;
  }

  friend bool operator==(const HypothesisClass& a, const HypothesisClass& b) {
    return a.domain_ == b.domain_ && a.hypotheses_ == b.hypotheses_;
  }

 private:
  struct Unchecked {};
  HypothesisClass(Domain domain, std::vector<Hypothesis> hypotheses, Unchecked)
      : domain_(domain), hypotheses_(std::move(hypotheses)) {}

  void validate() const {
    std::unordered_set<Hypothesis, PointSetHash> seen;
    for (Hypothesis h : hypotheses_) {
      if (!domain_.contains(h)) throw DomainMismatch("hypothesis has points outside the domain");
      if (!seen.insert(h).second) throw Error("hypothesis class contains a duplicate");
    }
  }

  Domain domain_;
  std::vector<Hypothesis> hypotheses_;
};

/// H^f: every hypothesis replaced by its symmetric difference with f.
inline HypothesisClass apply_representation(const HypothesisClass& H, const Representation& f) {
  if (!H.domain().contains(f.mask)) throw DomainMismatch("representation mask exceeds the domain");
  std::vector<Hypothesis> out;
  out.reserve(H.size());
  for (Hypothesis h : H) out.push_back(f.apply(h));
  return HypothesisClass::subclass(H, std::move(out));
}

/// Intersection of all members of H containing Y. When no member contains Y
/// the intersection is over an empty family and the full domain is returned.
inline PointSet closure_of(const HypothesisClass& H, PointSet Y) {
  PointSet acc = H.domain().full();
  for (Hypothesis h : H) {
    if (Y.is_subset_of(h)) acc &= h;
  }
  return acc;
}

inline bool is_intersection_closed(const HypothesisClass& H) {
  std::unordered_set<Hypothesis, PointSetHash> members(H.begin(), H.end());
  for (std::size_t i = 0; i < H.size(); ++i) {
    for (std::size_t j = i + 1; j < H.size(); ++j) {
      if (!members.contains(H[i] & H[j])) return false;
    }
  }
  return true;
}

inline bool consistent_with(Hypothesis h, std::span<const LabeledExample> examples) {
  return std::all_of(examples.begin(), examples.end(),
                     [h](const LabeledExample& e) { return h(e.x) == e.y; });
}

/// All members agreeing with every example, in class order. May be empty.
inline HypothesisClass consistent_subclass(const HypothesisClass& H,
                                           std::span<const LabeledExample> examples) {
  for (const auto& e : examples) {
    if (!H.domain().contains(e.x)) throw DomainMismatch("example point outside the domain");
  }
  std::vector<Hypothesis> out;
  for (Hypothesis h : H) {
    if (consistent_with(h, examples)) out.push_back(h);
  }
  return HypothesisClass::subclass(H, std::move(out));
}

/// Sort key used for every family stored by cardinality: (|h|, bits).
inline bool by_size_then_bits(PointSet a, PointSet b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.bits() < b.bits();
}

/// The family of all nonempty intersections of members of a base class.
///
/// Elements are kept sorted by (cardinality, encoding), so every strict
/// subset of an element appears before it; the containment order is the
/// DAG induced on that sequence by `is_strict_subset_of`.
class ClosureFamily {
 public:
  ClosureFamily(HypothesisClass base, std::vector<Hypothesis> elements)
      : base_(std::move(base)), elements_(std::move(elements)) {}

  const HypothesisClass& base() const { return base_; }
  const Domain& domain() const { return base_.domain(); }
  std::span<const Hypothesis> elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }

  /// The least element: the intersection of every base hypothesis.
  Hypothesis h_min() const { return elements_.front(); }

  bool contains(Hypothesis h) const {
    return std::binary_search(elements_.begin(), elements_.end(), h, by_size_then_bits);
  }

  /// Smallest element containing Y, or the full domain if none does.
  PointSet closure_of(PointSet Y) const {
    for (Hypothesis e : elements_) {
      if (Y.is_subset_of(e)) return e;
    }
    return domain().full();
  }

  HypothesisClass as_class() const { return HypothesisClass(domain(), elements_); }

 private:
  HypothesisClass base_;
  std::vector<Hypothesis> elements_;
};

/// Fixpoint of H under pairwise intersection. Built incrementally: after the
/// j-th base hypothesis is folded in, the family holds every intersection of a
/// nonempty subset of the first j hypotheses.
inline std::vector<Hypothesis> intersection_closure_elements(std::span<const Hypothesis> base,
                                                             std::size_t domain_size) {
  if (domain_size > kEnumerationCap && base.size() > kEnumerationCap) {
    throw CapExceeded("intersection_closure: both domain and class exceed the enumeration cap");
  }
  std::unordered_set<Hypothesis, PointSetHash> seen;
  std::vector<Hypothesis> family;
  for (Hypothesis h : base) {
    const std::size_t existing = family.size();
    if (seen.insert(h).second) family.push_back(h);
    for (std::size_t i = 0; i < existing; ++i) {
      Hypothesis meet = family[i] & h;
      if (seen.insert(meet).second) family.push_back(meet);
    }
  }
  std::sort(family.begin(), family.end(), by_size_then_bits);
  return family;
}

inline ClosureFamily intersection_closure(const HypothesisClass& H) {
  if (H.empty()) throw Error("intersection_closure of an empty class");
  return ClosureFamily(H, intersection_closure_elements(H.hypotheses(), H.domain().size()));
}

}  // namespace replay
