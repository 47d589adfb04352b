#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "stsd/generators.hpp"
#include "stsd/sts.hpp"

using namespace stsd;

namespace {

std::vector<oracle::Tri> as_tris(const TripleSystem& s) {
  std::vector<oracle::Tri> out;
  for (const Triple& t : s.sorted().triples()) out.push_back({t.a, t.b, t.c});
  return out;
}

std::vector<TripleSystem> enumerate(int n) {
  std::vector<TripleSystem> all;
  enumerate_all_sts(n, [&](const TripleSystem& s) { all.push_back(s.sorted()); });
  return all;
}

}  // namespace

TEST(Validate, Fano) {
  const TripleSystem fano(7, {{1, 2, 3}, {1, 4, 5}, {1, 6, 7}, {2, 4, 6}, {2, 5, 7}, {3, 4, 7}, {3, 5, 6}});
  EXPECT_TRUE(validate_sts(fano).valid);
  EXPECT_TRUE(oracle::covers_pairs_once(7, as_tris(fano)));
}

TEST(Validate, ReportsFirstViolation) {
  const auto twice = validate_sts(TripleSystem(4, {{1, 2, 3}, {1, 2, 4}}));
  EXPECT_FALSE(twice.valid);
  EXPECT_EQ(twice.pair, (std::pair{1, 2}));
  EXPECT_EQ(twice.coverage, 2);
  const auto empty = validate_sts(TripleSystem(3, {}));
  EXPECT_FALSE(empty.valid);
  EXPECT_EQ(empty.pair, (std::pair{1, 2}));
  EXPECT_EQ(empty.coverage, 0);
}

TEST(Construct, ValidUpTo99) {
  for (int n = 3; n <= 99; ++n) {
    if (!sts_order_admissible(n)) continue;
    const TripleSystem s = construct_sts(n);
    ASSERT_TRUE(is_sts(s)) << "n=" << n;
    ASSERT_TRUE(oracle::covers_pairs_once(n, as_tris(s))) << "n=" << n;
    ASSERT_EQ(3 * s.size(), pair_count(n));
  }
  EXPECT_EQ(construct_sts(7).size(), 7u);
  EXPECT_EQ(construct_sts(9).size(), 12u);
}

TEST(Construct, RejectsBadResidue) {
  for (int n : {0, 1, 2, 4, 5, 6, 8, 10, 11, 12}) EXPECT_THROW(construct_sts(n), InvalidInput) << n;
  try {
    construct_sts(8);
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("mod 6"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("= 2"), std::string::npos);
  }
}

TEST(Embedding, DeterministicAndValid) {
  const TripleSystem base = construct_sts(9);
  EXPECT_EQ(random_embedding(base, 4), random_embedding(base, 4));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const TripleSystem s = random_embedding(base, seed);
    ASSERT_TRUE(is_sts(s));
    ASSERT_EQ(s.size(), base.size());
  }
}

TEST(Embedding, SplitCrossCountInvariant) {
  const TripleSystem base = construct_sts(13);
  const Colouring chi = example1_colouring({13, 5, 1, 2, 2});
  for (std::uint64_t seed = 0; seed < 100; ++seed) EXPECT_EQ(colour_profile(random_embedding(base, seed), chi)[1], 20u);
}

TEST(Enumerate, Counts) {
  EXPECT_EQ(count_all_sts(3), 1u);
  EXPECT_EQ(count_all_sts(7), 30u);
  EXPECT_EQ(count_all_sts(9), 840u);
  EXPECT_THROW(count_all_sts(13), InvalidInput);
  EXPECT_THROW(count_all_sts(5), InvalidInput);
}

TEST(Enumerate, SevenMatchesNaiveSubsetCount) { EXPECT_EQ(oracle::naive_sts7_count(), 30u); }

TEST(Enumerate, SystemsAreDistinctValidAndFormOneOrbit) {
  for (int n : {7, 9}) {
    const auto all = enumerate(n);
    std::set<std::vector<oracle::Tri>> seen;
    for (const auto& s : all) {
      ASSERT_TRUE(oracle::covers_pairs_once(n, as_tris(s)));
      ASSERT_TRUE(seen.insert(as_tris(s)).second) << "duplicate system";
    }
    // Every STS of order 7 or 9 is a relabelling of any other one, so the
    // enumeration must coincide with the relabelling orbit of the construction.
    EXPECT_EQ(seen, oracle::relabelling_orbit(n, as_tris(construct_sts(n))));
  }
}

TEST(Enumerate, CanonicalOrderIsStable) {
  const auto a = enumerate(7);
  const auto b = enumerate(7);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.front().triples().front(), (Triple{1, 2, 3}));
}

TEST(Oracle, MonochromaticIsConstant) {
  const auto range = min_max_discrepancy_oracle(Colouring::constant(7, 2, 1));
  EXPECT_EQ(range.min, Rational(7));
  EXPECT_EQ(range.max, Rational(7));
  EXPECT_EQ(range.systems, 30u);
}

TEST(Oracle, SplitColouringIsConstant) {
  const auto range = min_max_discrepancy_oracle(example1_colouring({7, 3, 1, 2, 2}));
  EXPECT_EQ(range.min, Rational(5));
  EXPECT_EQ(range.max, Rational(5));
}

TEST(Oracle, RandomColouringOrdered) {
  const auto range = min_max_discrepancy_oracle(random_colouring(7, 2, 3));
  EXPECT_LE(range.min, range.max);
  EXPECT_THROW(min_max_discrepancy_oracle(random_colouring(8, 2, 3)), InvalidInput);
}
