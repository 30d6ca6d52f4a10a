#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "replay/class_io.hpp"
#include "replay/generators.hpp"
#include "replay/hypothesis_class.hpp"

using namespace replay;

namespace {

// 1-based points from prose, converted to 0-based sets.
PointSet one_based(std::initializer_list<Point> pts) {
  PointSet s;
  for (Point p : pts) s = s.with(p - 1);
  return s;
}

HypothesisClass random_class(std::uint64_t seed, std::size_t n, std::size_t max_size) {
  Rng rng = make_stream(seed, 1);
  const std::size_t cap = std::min<std::size_t>(max_size, std::size_t{1} << n);
  return generators::random_class(rng, n, 1 + uniform_index(rng, cap));
}

}  // namespace

TEST(PointSet, SetAlgebraAndIteration) {
  const PointSet a = PointSet::of({0, 3, 5});
  const PointSet b = PointSet::of({3, 4});
  EXPECT_EQ((a & b), PointSet::of({3}));
  EXPECT_EQ((a | b), PointSet::of({0, 3, 4, 5}));
  EXPECT_EQ((a ^ b), PointSet::of({0, 4, 5}));
  EXPECT_EQ((a - b), PointSet::of({0, 5}));
  EXPECT_EQ(a.size(), 3U);
  EXPECT_EQ(a.first(), 0U);
  EXPECT_EQ(a.points(), (std::vector<Point>{0, 3, 5}));
  EXPECT_TRUE(PointSet::of({3}).is_strict_subset_of(b));
  EXPECT_FALSE(b.is_strict_subset_of(b));
  EXPECT_TRUE(a(5));
  EXPECT_FALSE(a(63));
  EXPECT_EQ(PointSet::prefix(64).size(), 64U);
}

TEST(PointSet, BitstringRoundTrip) {
  const Domain d(6);
  const PointSet s = PointSet::of({1, 4});
  EXPECT_EQ(to_bitstring(s, d), "010010");
  EXPECT_EQ(from_bitstring("010010"), s);
  EXPECT_THROW(from_bitstring("01x"), Error);
}

TEST(Domain, RejectsEmptyAndOversized) {
  EXPECT_THROW(Domain(0), Error);
  EXPECT_THROW(Domain(65), CapExceeded);
  EXPECT_NO_THROW(Domain(64));
}

TEST(HypothesisClass, ValidatesMembers) {
  EXPECT_THROW(HypothesisClass(Domain(3), {}), Error);
  EXPECT_THROW(HypothesisClass(Domain(3), {PointSet::of({0}), PointSet::of({0})}), Error);
  EXPECT_THROW(HypothesisClass(Domain(3), {PointSet::of({3})}), DomainMismatch);
}

TEST(Representation, EmptyMaskIsIdentity) {
  const auto H = generators::thresholds(3);
  EXPECT_EQ(apply_representation(H, {}), H);
}

TEST(Representation, FullMaskComplementsEachMember) {
  const HypothesisClass H(Domain(2), {PointSet{}, PointSet::of({0})});
  const auto flipped = apply_representation(H, Representation{Domain(2).full()});
  EXPECT_EQ(flipped[0], PointSet::of({0, 1}));
  EXPECT_EQ(flipped[1], PointSet::of({1}));
}

TEST(Representation, IsAnInvolution) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto H = random_class(seed, 6, 20);
    Rng rng = make_stream(seed, 2);
    const Representation f{PointSet(uniform_index(rng, 64))};
    EXPECT_EQ(apply_representation(apply_representation(H, f), f), H);
  }
}

TEST(Representation, RejectsMaskOutsideDomain) {
  EXPECT_THROW(apply_representation(generators::thresholds(3), Representation{PointSet::of({5})}), DomainMismatch);
}

TEST(Closure, ThresholdExample) {
  const auto H = generators::thresholds(5);
  EXPECT_EQ(closure_of(H, one_based({2, 4})), one_based({2, 3, 4, 5}));
}

TEST(Closure, EmptySetGivesLeastElement) {
  const auto H = generators::two_intervals(5);
  EXPECT_EQ(closure_of(H, PointSet{}), H.intersection_of_all());
  EXPECT_EQ(closure_of(generators::thresholds(4), PointSet{}), PointSet{});
}

TEST(Closure, NoContainingMemberGivesFullDomain) {
  const auto H = generators::singletons(4);
  EXPECT_EQ(closure_of(H, one_based({1, 3})), Domain(4).full());
}

TEST(Closure, AgreesWithEnumeration) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto H = random_class(seed, 6, 10);
    for (std::uint64_t y = 0; y < 64; y += 5) {
      EXPECT_EQ(closure_of(H, PointSet(y)), oracle::closure(H, PointSet(y))) << "seed " << seed << " Y " << y;
    }
  }
}

TEST(IntersectionClosure, ThresholdsAreAFixpoint) {
  const auto H = generators::thresholds(8);
  const auto F = intersection_closure(H);
  EXPECT_EQ(F.size(), H.size());
  for (Hypothesis h : H) EXPECT_TRUE(F.contains(h));
}

TEST(IntersectionClosure, ReverseSingletonsGiveEverySubset) {
  const auto F = intersection_closure(generators::reverse_singletons(4));
  EXPECT_EQ(F.size(), 16U);
  EXPECT_EQ(F.h_min(), PointSet{});
}

TEST(IntersectionClosure, MatchesSubfamilyEnumeration) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto H = random_class(seed, 7, 12);
    const auto F = intersection_closure(H);
    const auto expected = oracle::intersection_closure(oracle::as_vector(H), 7);
    ASSERT_EQ(F.size(), expected.size()) << "seed " << seed;
    for (std::uint64_t e : expected) EXPECT_TRUE(F.contains(PointSet(e)));
    EXPECT_LE(F.size(), std::size_t{1} << H.size());
    EXPECT_TRUE(is_intersection_closed(F.as_class()));
    for (std::size_t i = 1; i < F.size(); ++i) {
      EXPECT_TRUE(by_size_then_bits(F.elements()[i - 1], F.elements()[i]));
    }
  }
}

TEST(IntersectionClosed, KnownClasses) {
  EXPECT_TRUE(is_intersection_closed(generators::thresholds(8)));
  EXPECT_FALSE(is_intersection_closed(generators::two_intervals(8)));
  EXPECT_TRUE(is_intersection_closed(generators::singletons(5)));
  EXPECT_FALSE(is_intersection_closed(generators::reverse_singletons(5)));
}

TEST(ConsistentSubclass, Filters) {
  const auto H = generators::thresholds(5);
  const std::vector<LabeledExample> ex{{2, true}};  // (3,1) in 1-based terms
  const auto sub = consistent_subclass(H, ex);
  ASSERT_EQ(sub.size(), 3U);
  EXPECT_EQ(sub[0], one_based({1, 2, 3, 4, 5}));
  EXPECT_EQ(sub[1], one_based({2, 3, 4, 5}));
  EXPECT_EQ(sub[2], one_based({3, 4, 5}));
  EXPECT_EQ(consistent_subclass(H, {}), H);
  const std::vector<LabeledExample> contradiction{{1, true}, {1, false}};
  EXPECT_TRUE(consistent_subclass(H, contradiction).empty());
}

TEST(Generators, Shapes) {
  const auto th = generators::thresholds(4);
  ASSERT_EQ(th.size(), 5U);
  EXPECT_EQ(th[0], PointSet{});
  EXPECT_EQ(th[1], Domain(4).full());
  EXPECT_EQ(th[4], PointSet::of({3}));
  EXPECT_EQ(generators::singletons(5).size(), 6U);
  EXPECT_EQ(generators::reverse_singletons(5).size(), 6U);
  const auto blow = generators::blowup(4);
  EXPECT_EQ(blow.domain().size(), 8U);
  EXPECT_EQ(blow.size(), 18U);
  EXPECT_EQ(generators::power_set(4).size(), 16U);
  EXPECT_THROW(generators::blowup(1), Error);
}

TEST(Generators, TwoIntervalsAreUnionsOfAtMostTwoRuns) {
  const auto H = generators::two_intervals(7);
  for (Hypothesis h : H) {
    std::size_t runs = 0;
    for (Point x = 0; x < 7; ++x) {
      if (h(x) && (x == 0 || !h(x - 1))) ++runs;
    }
    EXPECT_LE(runs, 2U);
  }
  // Every set of at most two runs appears: count them directly.
  std::size_t expected = 0;
  for (std::uint64_t b = 0; b < 128; ++b) {
    std::size_t runs = 0;
    for (Point x = 0; x < 7; ++x) {
      if (((b >> x) & 1U) && (x == 0 || !((b >> (x - 1)) & 1U))) ++runs;
    }
    expected += runs <= 2 ? 1 : 0;
  }
  EXPECT_EQ(H.size(), expected);
}

TEST(Generators, FromName) {
  EXPECT_EQ(generators::from_name("thresholds:6")->size(), 7U);
  EXPECT_FALSE(generators::from_name("nope:3").has_value());
  EXPECT_FALSE(generators::from_name("thresholds:x").has_value());
}

TEST(ClassIo, JsonRoundTripAndValidation) {
  const auto H = generators::two_intervals(5);
  EXPECT_EQ(class_from_json(class_to_json(H)), H);
  const auto path = std::filesystem::temp_directory_path() / "replay_class_io_test.json";
  {
    std::ofstream f(path);
    f << class_to_json(generators::singletons(3)).dump();
  }
  EXPECT_EQ(load_class(path.string()), generators::singletons(3));
  std::filesystem::remove(path);
  EXPECT_THROW(class_from_json(nlohmann::json{{"domain_size", 3}, {"hypotheses", {"01"}}}), DomainMismatch);
  EXPECT_THROW(class_from_json(nlohmann::json{{"hypotheses", {"01"}}}), Error);
  EXPECT_THROW(load_class("/nonexistent/class.json"), Error);
}
