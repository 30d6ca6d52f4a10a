#pragma once

#include <algorithm>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "replay/hypothesis_class.hpp"
#include "replay/rng.hpp"

namespace replay::generators {

/// f_0 = empty, f_k = {x : x >= k} in 1-based terms; in class order f_0, f_1, ..., f_N.
inline HypothesisClass thresholds(std::size_t n) {
  Domain domain(n);
  std::vector<Hypothesis> hs{Hypothesis{}};
  for (std::size_t k = 1; k <= n; ++k) hs.push_back(domain.full() - PointSet::prefix(k - 1));
  return HypothesisClass(domain, std::move(hs));
}

/// Empty set followed by every singleton.
inline HypothesisClass singletons(std::size_t n) {
  Domain domain(n);
  std::vector<Hypothesis> hs{Hypothesis{}};
  for (Point i = 0; i < n; ++i) hs.push_back(PointSet::of({i}));
  return HypothesisClass(domain, std::move(hs));
}

/// Every co-singleton {x : x != i} followed by the full domain.
inline HypothesisClass reverse_singletons(std::size_t n) {
  Domain domain(n);
  std::vector<Hypothesis> hs;
  for (Point i = 0; i < n; ++i) hs.push_back(domain.full().without(i));
  hs.push_back(domain.full());
  return HypothesisClass(domain, std::move(hs));
}

/// Singletons and reverse singletons (each with their constant function) on 2n points.
inline HypothesisClass blowup(std::size_t n) {
  if (n < 2) throw Error("blowup requires n >= 2");
  const std::size_t size = 2 * n;
  Domain domain(size);
  std::vector<Hypothesis> hs;
  for (Hypothesis h : singletons(size)) hs.push_back(h);
  for (Hypothesis h : reverse_singletons(size)) hs.push_back(h);
  return HypothesisClass(domain, std::move(hs));
}

/// Unions of at most two discrete intervals on an n-point grid (the empty set
/// included), sorted by (cardinality, encoding).
inline HypothesisClass two_intervals(std::size_t n) {
  Domain domain(n);
  auto interval = [](std::size_t a, std::size_t b) {
    return PointSet::prefix(b + 1) - PointSet::prefix(a);
  };
  std::vector<Hypothesis> hs{Hypothesis{}};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      hs.push_back(interval(a, b));
      for (std::size_t c = b + 2; c < n; ++c) {
        for (std::size_t d = c; d < n; ++d) hs.push_back(interval(a, b) | interval(c, d));
      }
    }
  }
  std::sort(hs.begin(), hs.end(), by_size_then_bits);
  return HypothesisClass(domain, std::move(hs));
}

inline HypothesisClass power_set(std::size_t n) {
  require_within_cap(n, 16, "power_set");
  Domain domain(n);
  std::vector<Hypothesis> hs;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) hs.emplace_back(bits);
  return HypothesisClass(domain, std::move(hs));
}

/// `size` distinct uniformly random subsets of an n-point domain.
inline HypothesisClass random_class(Rng& rng, std::size_t n, std::size_t size) {
  Domain domain(n);
  require_within_cap(n, kEnumerationCap, "random_class");
  const std::uint64_t universe = std::uint64_t{1} << n;
  if (size == 0 || size > universe) throw Error("random_class: size out of range");
  std::unordered_set<Hypothesis, PointSetHash> seen;
  std::vector<Hypothesis> hs;
  while (hs.size() < size) {
    Hypothesis h(uniform_index(rng, universe));
    if (seen.insert(h).second) hs.push_back(h);
  }
  return HypothesisClass(domain, std::move(hs));
}

/// Resolves "name:N" for the named generators; nullopt if `spec` is not one.
inline std::optional<HypothesisClass> from_name(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  const std::string_view name = spec.substr(0, colon);
  const std::string_view arg = spec.substr(colon + 1);
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
  if (ec != std::errc{} || ptr != arg.data() + arg.size()) return std::nullopt;
  if (name == "thresholds") return thresholds(n);
  if (name == "singletons") return singletons(n);
  if (name == "reverse_singletons") return reverse_singletons(n);
  if (name == "blowup") return blowup(n);
  if (name == "two_intervals") return two_intervals(n);
  if (name == "power_set") return power_set(n);
  return std::nullopt;
}

}  // namespace replay::generators
