#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <future>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "replay/hypothesis_class.hpp"
#include "replay/index_set.hpp"

namespace replay {

/// Certificate for a Threshold dimension value k: points x_1..x_k and
/// hypotheses h_0..h_k with h_i(x_j) = 1 iff j <= i.
struct WitnessSet {
  std::vector<Point> points;
  std::vector<Hypothesis> hypotheses;

  std::size_t size() const { return points.size(); }
};

inline bool verify_witness(const WitnessSet& w) {
  if (w.hypotheses.size() != w.points.size() + 1) return false;
  for (std::size_t i = 0; i < w.hypotheses.size(); ++i) {
    for (std::size_t j = 1; j <= w.points.size(); ++j) {
      if (w.hypotheses[i](w.points[j - 1]) != (j <= i)) return false;
    }
  }
  return true;
}

/// Witness whose hypotheses are additionally drawn from `family`.
template <typename Family>
bool verify_witness_in(const WitnessSet& w, const Family& family) {
  return verify_witness(w) && std::all_of(w.hypotheses.begin(), w.hypotheses.end(),
                                          [&](Hypothesis h) { return family.contains(h); });
}

/// Longest strict chain, listed from largest to smallest: h_0 ⊋ h_1 ⊋ ... ⊋ h_L.
struct ChainResult {
  std::size_t depth = 0;
  std::vector<Hypothesis> chain;
};

struct ThresholdResult {
  std::size_t value = 0;
  WitnessSet witness;
};

struct ExtendedThresholdResult {
  std::size_t value = 0;
  Representation f;
  WitnessSet witness;  // hypotheses lie in the closure of H^f
};

namespace detail {

inline std::uint64_t subset_enumeration_cost(std::span<const Hypothesis> family) {
  std::uint64_t total = 0;
  for (Hypothesis h : family) total += std::uint64_t{1} << std::min<std::size_t>(h.size(), 40);
  return total;
}

/// Longest strict chain in a family sorted by (cardinality, encoding).
/// Ties are broken towards the smallest sorted index, both for the chain's
/// top element and for every predecessor, so the certificate is deterministic.
inline ChainResult longest_chain(std::span<const Hypothesis> sorted, std::size_t domain_size,
                                 bool want_chain = true) {
  ChainResult result;
  if (sorted.empty()) return result;
  const std::size_t m = sorted.size();
  std::vector<std::uint32_t> best(m, 0);
  std::vector<std::int32_t> pred(m, -1);
  const std::uint64_t pairwise_cost = static_cast<std::uint64_t>(m) * m / 2;

  if (domain_size <= 20 && subset_enumeration_cost(sorted) < pairwise_cost) {
    std::vector<std::int32_t> index(std::size_t{1} << domain_size, -1);
    for (std::size_t i = 0; i < m; ++i) index[sorted[i].bits()] = static_cast<std::int32_t>(i);
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint64_t e = sorted[i].bits();
      if (e == 0) continue;
      for (std::uint64_t s = (e - 1) & e;; s = (s - 1) & e) {
        const std::int32_t j = index[s];
        if (j >= 0) {
          const std::uint32_t cand = best[j] + 1;
          if (cand > best[i] || (cand == best[i] && pred[i] >= 0 && j < pred[i])) {
            best[i] = cand;
            pred[i] = j;
          }
        }
        if (s == 0) break;
      }
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (best[j] + 1 > best[i] && sorted[j].is_strict_subset_of(sorted[i])) {
          best[i] = best[j] + 1;
          pred[i] = static_cast<std::int32_t>(j);
        }
      }
    }
  }

  std::size_t top = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (best[i] > best[top]) top = i;
  }
  result.depth = best[top];
  if (want_chain) {
    for (std::int32_t i = static_cast<std::int32_t>(top); i >= 0; i = pred[i]) {
      result.chain.push_back(sorted[i]);
    }
  }
  return result;
}

/// Witness from a chain (largest first): x_t is the smallest point of h_t \ h_{t-1}
/// in the ascending order of the chain.
inline WitnessSet witness_from_chain(const std::vector<Hypothesis>& descending) {
  WitnessSet w;
  w.hypotheses.assign(descending.rbegin(), descending.rend());
  for (std::size_t t = 1; t < w.hypotheses.size(); ++t) {
    w.points.push_back((w.hypotheses[t] - w.hypotheses[t - 1]).first());
  }
  return w;
}

/// Depth-first search over ordered witness sequences for classes that are not
/// intersection-closed.
///
/// levels[i] holds the members that are 1 on x_1..x_i and 0 on x_{i+1}..x_k.
/// Appending x splits the last level into its 0 and 1 parts and restricts every
/// earlier level to members that are 0 on x.
class ThresholdSearch {
 public:
  explicit ThresholdSearch(const HypothesisClass& H) : H_(H), n_(H.domain().size()) {
    const std::size_t m = H.size();
    ones_.assign(n_, IndexSet(m));
    zeros_.assign(n_, IndexSet(m));
    for (std::size_t i = 0; i < m; ++i) {
      for (Point x = 0; x < n_; ++x) (H[i](x) ? ones_[x] : zeros_[x]).set(i);
    }
    ceiling_ = std::min(n_, m - 1);
  }

  ThresholdResult run() {
    std::vector<IndexSet> levels{IndexSet(H_.size(), true)};
    std::vector<Point> points;
    record(levels, points);
    search(levels, points, PointSet{});
    return best_;
  }

 private:
  void record(const std::vector<IndexSet>& levels, const std::vector<Point>& points) {
    best_.value = points.size();
    best_.witness.points = points;
    best_.witness.hypotheses.clear();
    for (const auto& level : levels) best_.witness.hypotheses.push_back(H_[level.first()]);
  }

  void search(const std::vector<IndexSet>& levels, std::vector<Point>& points, PointSet used) {
    if (best_.value >= ceiling_) return;
    const std::size_t k = points.size();
    const IndexSet& last = levels.back();

    std::vector<Point> candidates;
    for (Point x = 0; x < n_; ++x) {
      if (used.contains(x)) continue;
      if (!last.intersects(ones_[x]) || !last.intersects(zeros_[x])) continue;
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) ok = levels[i].intersects(zeros_[x]);
      if (ok) candidates.push_back(x);
    }
    const std::size_t bound = k + std::min(candidates.size(), last.count() - 1);
    if (bound <= best_.value) return;

    for (Point x : candidates) {
      std::vector<IndexSet> next;
      next.reserve(k + 2);
      for (std::size_t i = 0; i < k; ++i) next.push_back(levels[i] & zeros_[x]);
      next.push_back(last & zeros_[x]);
      next.push_back(last & ones_[x]);
      points.push_back(x);
      if (points.size() > best_.value) record(next, points);
      search(next, points, used.with(x));
      points.pop_back();
      if (best_.value >= ceiling_) return;
    }
  }

  const HypothesisClass& H_;
  std::size_t n_;
  std::size_t ceiling_;
  std::vector<IndexSet> ones_;
  std::vector<IndexSet> zeros_;
  ThresholdResult best_;
};

class LittlestoneSolver {
 public:
  explicit LittlestoneSolver(const HypothesisClass& H) : n_(H.domain().size()) {
    ones_.assign(n_, IndexSet(H.size()));
    for (std::size_t i = 0; i < H.size(); ++i) {
      for (Point x = 0; x < n_; ++x) {
        if (H[i](x)) ones_[x].set(i);
      }
    }
  }

  std::size_t solve(const IndexSet& members) {
    const std::size_t count = members.count();
    if (count <= 1) return 0;
    if (auto it = memo_.find(members); it != memo_.end()) return it->second;
    const std::size_t ceiling = floor_log2(count);
    std::size_t best = 0;
    for (Point x = 0; x < n_ && best < ceiling; ++x) {
      IndexSet one = members & ones_[x];
      const std::size_t c1 = one.count();
      if (c1 == 0 || c1 == count) continue;
      IndexSet zero = members - ones_[x];
      if (1 + std::min(floor_log2(c1), floor_log2(count - c1)) <= best) continue;
      // Solve the smaller side first; it usually decides the min.
      IndexSet& small = c1 <= count - c1 ? one : zero;
      IndexSet& large = c1 <= count - c1 ? zero : one;
      const std::size_t a = solve(small);
      if (1 + a <= best) continue;
      const std::size_t b = solve(large);
      best = std::max(best, 1 + std::min(a, b));
    }
    memo_.emplace(members, best);
    return best;
  }

 private:
  static std::size_t floor_log2(std::size_t v) { return static_cast<std::size_t>(std::bit_width(v)) - 1; }

  std::size_t n_;
  std::vector<IndexSet> ones_;
  std::unordered_map<IndexSet, std::size_t, IndexSetHash> memo_;
};

}  // namespace detail

/// Size of the largest shattered point set. Searches sizes upwards and stops
/// at the first size with no shattered set.
inline std::size_t vc_dimension(const HypothesisClass& H) {
  const std::size_t n = H.domain().size();
  require_within_cap(n, kEnumerationCap, "vc_dimension");
  if (H.empty()) return 0;

  auto shatters = [&](std::uint64_t subset, std::size_t k) {
    std::vector<bool> seen(std::size_t{1} << k, false);
    std::size_t distinct = 0;
    for (Hypothesis h : H) {
      std::size_t pattern = 0;
      std::size_t bit = 0;
      for (Point x : PointSet(subset)) {
        if (h(x)) pattern |= std::size_t{1} << bit;
        ++bit;
      }
      if (!seen[pattern]) {
        seen[pattern] = true;
        if (++distinct == seen.size()) return true;
      }
    }
    return false;
  };

  const std::size_t ceiling = std::min(n, static_cast<std::size_t>(std::bit_width(H.size())) - 1);
  std::size_t vc = 0;
  for (std::size_t k = 1; k <= ceiling; ++k) {
    bool found = false;
    // Gosper's hack: all k-subsets of n bits in increasing order.
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t s = (std::uint64_t{1} << k) - 1; s < limit;) {
      if (shatters(s, k)) {
        found = true;
        break;
      }
      const std::uint64_t c = s & (~s + 1);
      const std::uint64_t r = s + c;
      s = (((r ^ s) >> 2) / c) | r;
    }
    if (!found) break;
    vc = k;
  }
  return vc;
}

/// Mistake-tree recursion with memoisation on the member subset.
inline std::size_t littlestone_dimension(const HypothesisClass& H) {
  require_within_cap(H.domain().size(), kEnumerationCap, "littlestone_dimension");
  if (H.size() <= 1) return 0;
  detail::LittlestoneSolver solver(H);
  return solver.solve(IndexSet(H.size(), true));
}

/// Longest strict chain in an arbitrary class.
inline ChainResult chain_depth(const HypothesisClass& H) {
  require_within_cap(H.domain().size(), kEnumerationCap, "chain_depth");
  std::vector<Hypothesis> sorted(H.begin(), H.end());
  std::sort(sorted.begin(), sorted.end(), by_size_then_bits);
  return detail::longest_chain(sorted, H.domain().size());
}

inline ChainResult chain_depth(const ClosureFamily& F) {
  require_within_cap(F.domain().size(), kEnumerationCap, "chain_depth");
  return detail::longest_chain(F.elements(), F.domain().size());
}

/// Largest k admitting a witness set in H, with its certificate.
///
/// Intersection-closed classes use the longest chain (depth equals Threshold
/// dimension there); other classes use an exhaustive ordered search that tries
/// points in ascending index and keeps the first maximal witness found.
inline ThresholdResult threshold_dimension(const HypothesisClass& H) {
  require_within_cap(H.domain().size(), kEnumerationCap, "threshold_dimension");
  if (H.empty()) throw Error("threshold_dimension of an empty class");
  ThresholdResult result;
  if (is_intersection_closed(H)) {
    ChainResult chain = chain_depth(H);
    result.value = chain.depth;
    result.witness = detail::witness_from_chain(chain.chain);
  } else {
    result = detail::ThresholdSearch(H).run();
  }
  if (!verify_witness_in(result.witness, H) || result.witness.size() != result.value) {
    throw Error("threshold_dimension: certificate failed verification");
  }
  return result;
}

inline ThresholdResult threshold_dimension(const ClosureFamily& F) {
  ChainResult chain = chain_depth(F);
  ThresholdResult result{chain.depth, detail::witness_from_chain(chain.chain)};
  if (!verify_witness_in(result.witness, F)) {
    throw Error("threshold_dimension: certificate failed verification");
  }
  return result;
}

/// min over all masks f of TDim(closure(H^f)), with a minimising f (smallest
/// encoding among ties) and a witness inside closure(H^f).
///
/// Masks are visited in Gray-code order so consecutive representations differ
/// in one point. The range may be split across `workers` threads.
inline ExtendedThresholdResult extended_threshold_dimension(const HypothesisClass& H, unsigned workers = 1) {
  const std::size_t n = H.domain().size();
  require_within_cap(n, kExtendedThresholdCap, "extended_threshold_dimension");
  if (H.empty()) throw Error("extended_threshold_dimension of an empty class");

  struct Best {
    std::size_t value;
    std::uint64_t mask;
  };
  auto better = [](const Best& a, const Best& b) {
    return a.value < b.value || (a.value == b.value && a.mask < b.mask);
  };
  auto scan = [&H, n, &better](std::uint64_t lo, std::uint64_t hi) {
    Best best{~std::size_t{0}, ~std::uint64_t{0}};
    std::vector<Hypothesis> flipped(H.begin(), H.end());
    std::uint64_t current = 0;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const std::uint64_t gray = i ^ (i >> 1);
      const PointSet delta(gray ^ current);
      for (auto& h : flipped) h ^= delta;
      current = gray;
      const auto family = intersection_closure_elements(flipped, n);
      Best cand{detail::longest_chain(family, n, false).depth, gray};
      if (better(cand, best)) best = cand;
    }
    return best;
  };

  const std::uint64_t total = std::uint64_t{1} << n;
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(total, 64))));
  Best best{~std::size_t{0}, ~std::uint64_t{0}};
  if (workers == 1) {
    best = scan(0, total);
  } else {
    std::vector<std::future<Best>> parts;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t lo = total * w / workers;
      const std::uint64_t hi = total * (w + 1) / workers;
      parts.push_back(std::async(std::launch::async, scan, lo, hi));
    }
    for (auto& p : parts) {
      Best b = p.get();
      if (better(b, best)) best = b;
    }
  }

  ExtendedThresholdResult result;
  result.f = Representation{PointSet(best.mask)};
  const ClosureFamily family = intersection_closure(apply_representation(H, result.f));
  ThresholdResult inner = threshold_dimension(family);
  result.value = inner.value;
  result.witness = std::move(inner.witness);
  if (result.value != best.value) throw Error("extended_threshold_dimension: recomputation mismatch");
  return result;
}

struct Vcd1Result {
  std::optional<Representation> f;
  std::string diagnostic;
};

/// For a class of VC dimension 1, a member f of H such that H^f is a family of
/// initial segments of a tree order. Verified by checking that the closure of
/// H^f keeps VC dimension 1 and the Threshold dimension of H^f.
inline Vcd1Result find_vcd1_representation(const HypothesisClass& H) {
  const std::size_t vc = vc_dimension(H);
  if (vc != 1) return {std::nullopt, "VC dimension is " + std::to_string(vc) + ", expected 1"};
  for (Hypothesis candidate : H) {
    const Representation f{candidate};
    const HypothesisClass flipped = apply_representation(H, f);
    const ClosureFamily family = intersection_closure(flipped);
    if (vc_dimension(family.as_class()) != 1) continue;
    if (threshold_dimension(flipped).value != threshold_dimension(family).value) continue;
    return {f, "ok"};
  }
  return {std::nullopt, "no member of the class yields an initial-segment representation"};
}

struct DimensionSelection {
  bool vc = true;
  bool littlestone = true;
  bool threshold = true;
  bool depth = true;
  bool extended = true;
};

struct DimensionReport {
  std::optional<std::size_t> vc;
  std::optional<std::size_t> littlestone;
  std::optional<ThresholdResult> threshold;
  std::optional<ChainResult> depth;
  std::optional<ThresholdResult> threshold_of_closure;
  std::optional<ExtendedThresholdResult> extended;
};

inline DimensionReport dimension_report(const HypothesisClass& H, const DimensionSelection& which,
                                        unsigned workers = 1) {
  DimensionReport r;
  if (which.vc) r.vc = vc_dimension(H);
  if (which.littlestone) r.littlestone = littlestone_dimension(H);
  if (which.threshold) r.threshold = threshold_dimension(H);
  if (which.depth) r.depth = chain_depth(H);
  if (which.threshold || which.extended) r.threshold_of_closure = threshold_dimension(intersection_closure(H));
  if (which.extended) r.extended = extended_threshold_dimension(H, workers);
  return r;
}

}  // namespace replay
