#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace replay {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainMismatch : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Largest domain a single-word point set can hold.
inline constexpr std::size_t kMaxDomainSize = 64;
/// Largest domain for operations that enumerate 2^N objects.
inline constexpr std::size_t kEnumerationCap = 24;
/// Largest domain for the exact Extended Threshold search (2^N masks).
inline constexpr std::size_t kExtendedThresholdCap = 16;

using Point = std::uint32_t;

inline void require_within_cap(std::size_t n, std::size_t cap, std::string_view what) {
  if (n > cap) {
    throw CapExceeded(std::string(what) + ": domain size " + std::to_string(n) +
                      " exceeds cap " + std::to_string(cap));
  }
}

/// A subset of the finite domain {0, ..., N-1}, stored as a 64-bit word.
///
/// Doubles as a hypothesis: `h(x)` is the indicator of membership.
class PointSet {
 public:
  constexpr PointSet() = default;
  constexpr explicit PointSet(std::uint64_t bits) : bits_(bits) {}

  static PointSet of(std::initializer_list<Point> points) {
    PointSet s;
    for (Point p : points) s = s.with(p);
    return s;
  }

  /// The first `n` points.
  static constexpr PointSet prefix(std::size_t n) {
    return PointSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(Point x) const { return x < 64 && ((bits_ >> x) & 1U) != 0; }
  constexpr bool operator()(Point x) const { return contains(x); }

  constexpr PointSet with(Point x) const { return PointSet(bits_ | bit(x)); }
  constexpr PointSet without(Point x) const { return PointSet(bits_ & ~bit(x)); }
  constexpr PointSet toggled(Point x) const { return PointSet(bits_ ^ bit(x)); }

  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool empty() const { return bits_ == 0; }

  constexpr bool is_subset_of(PointSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool is_strict_subset_of(PointSet other) const {
    return is_subset_of(other) && bits_ != other.bits_;
  }

  /// Lowest point in the set; undefined on the empty set.
  constexpr Point first() const { return static_cast<Point>(std::countr_zero(bits_)); }

  friend constexpr PointSet operator&(PointSet a, PointSet b) { return PointSet(a.bits_ & b.bits_); }
  friend constexpr PointSet operator|(PointSet a, PointSet b) { return PointSet(a.bits_ | b.bits_); }
  friend constexpr PointSet operator^(PointSet a, PointSet b) { return PointSet(a.bits_ ^ b.bits_); }
  friend constexpr PointSet operator-(PointSet a, PointSet b) { return PointSet(a.bits_ & ~b.bits_); }
  PointSet& operator&=(PointSet o) { bits_ &= o.bits_; return *this; }
  PointSet& operator|=(PointSet o) { bits_ |= o.bits_; return *this; }
  PointSet& operator^=(PointSet o) { bits_ ^= o.bits_; return *this; }

  friend constexpr bool operator==(PointSet, PointSet) = default;
  friend constexpr auto operator<=>(PointSet a, PointSet b) { return a.bits_ <=> b.bits_; }

  class iterator {
   public:
    using value_type = Point;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::forward_iterator_tag;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr Point operator*() const { return static_cast<Point>(std::countr_zero(rest_)); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator copy = *this;
      ++*this;
      return copy;
    }
    friend constexpr bool operator==(iterator, iterator) = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  std::vector<Point> points() const { return {begin(), end()}; }

 private:
  static constexpr std::uint64_t bit(Point x) { return x < 64 ? std::uint64_t{1} << x : 0; }

  std::uint64_t bits_ = 0;
};

using Hypothesis = PointSet;

struct PointSetHash {
  std::size_t operator()(PointSet s) const noexcept {
    std::uint64_t z = s.bits() + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<std::size_t>(z ^ (z >> 31));
  }
};

/// The finite domain {0, ..., size-1}.
class Domain {
 public:
  explicit Domain(std::size_t size) : size_(size) {
    if (size == 0) throw Error("domain size must be at least 1");
    require_within_cap(size, kMaxDomainSize, "Domain");
  }

  std::size_t size() const { return size_; }
  PointSet full() const { return PointSet::prefix(size_); }
  bool contains(Point x) const { return x < size_; }
  bool contains(PointSet s) const { return s.is_subset_of(full()); }
  PointSet complement(PointSet s) const { return full() - s; }

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  std::size_t size_;
};

/// Character i is '1' iff point i is a member.
inline std::string to_bitstring(PointSet s, const Domain& domain) {
  std::string out(domain.size(), '0');
  for (Point p : s) out[p] = '1';
  return out;
}

inline PointSet from_bitstring(std::string_view text) {
  if (text.size() > kMaxDomainSize) throw CapExceeded("bit string longer than 64 points");
  PointSet s;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      s = s.with(static_cast<Point>(i));
    } else if (text[i] != '0') {
      throw Error("bit string may only contain '0' and '1': " + std::string(text));
    }
  }
  return s;
}

}  // namespace replay
