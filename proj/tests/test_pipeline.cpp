#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stsd/pipeline.hpp"

using namespace stsd;

namespace {

std::vector<K222Copy> copies_of(const GadgetSelection& sel) {
  std::vector<K222Copy> out;
  for (const auto& g : sel.chosen) out.push_back(g.copy);
  return out;
}

GadgetRecord record(const Colouring& chi, K222Copy k) {
  const PaschPair pp = pasch_pair(k);
  return GadgetRecord{k, profile_of(pp.p1, chi), profile_of(pp.p2, chi), {1}};
}

}  // namespace

TEST(Merge, Examples) {
  const Colouring two = random_colouring(8, 2, 1);
  EXPECT_EQ(merge_colours(two, 1), two);
  const Colouring three = random_colouring(8, 3, 1);
  const Colouring merged = merge_colours(three, 2);
  for (std::size_t i = 0; i < three.values().size(); ++i)
    EXPECT_EQ(merged.values()[i], three.values()[i] == 2 ? 1 : 2);
  EXPECT_THROW(merge_colours(three, 4), InvalidInput);
}

TEST(Merge, GadgetsOfMergeAreGadgetsOfOriginal) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Colouring chi = random_colouring(9, 3, seed);
    const oracle::ColourTable col(chi);
    for (int c = 1; c <= 3; ++c)
      for (const auto& rec : enumerate_gadgets(merge_colours(chi, c)))
        ASSERT_TRUE(oracle::gadget_by_definition(rec.copy.parts, col, 3));
  }
}

TEST(Select, EmptyInput) {
  EXPECT_TRUE(select_disjoint_gadgets({}, {}).chosen.empty());
}

TEST(Select, SharedShadowEdgeKeepsOne) {
  const Colouring chi = random_colouring(12, 2, 0);
  // Both copies contain the shadow pair {1,3}.
  const std::vector<GadgetRecord> recs{record(chi, make_k222(1, 2, 3, 4, 5, 6, 12)),
                                       record(chi, make_k222(1, 7, 3, 8, 9, 10, 12))};
  SelectionParams p;
  p.vertex_cap = 5;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    p.seed = seed;
    const auto sel = select_disjoint_gadgets(recs, p);
    ASSERT_EQ(sel.chosen.size(), 1u);
  }
}

TEST(Select, GreedyOutputPassesIndependentChecker) {
  const Colouring chi = random_colouring(15, 2, 3);
  const auto found = collect_gadgets(chi, 500, 5000, 1);
  ASSERT_FALSE(found.empty());
  SelectionParams p;
  p.vertex_cap = 3;
  p.seed = 9;
  const auto sel = select_disjoint_gadgets(found, p);
  EXPECT_FALSE(sel.chosen.empty());
  EXPECT_TRUE(oracle::selection_ok(copies_of(sel), 15, 3));
  p.target_count = 2;
  EXPECT_LE(select_disjoint_gadgets(found, p).chosen.size(), 2u);
}

TEST(Select, SampledModeRespectsInvariants) {
  const Colouring chi = random_colouring(15, 2, 3);
  const auto found = collect_gadgets(chi, 500, 5000, 1);
  SelectionParams p;
  p.mode = SelectionMode::Sampled;
  p.p = 0.05;
  p.vertex_cap = 2;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    p.seed = seed;
    EXPECT_TRUE(oracle::selection_ok(copies_of(select_disjoint_gadgets(found, p)), 15, 2));
  }
  p.p = 0.0;
  EXPECT_TRUE(select_disjoint_gadgets(found, p).chosen.empty());
  p.p = 1.5;
  EXPECT_THROW(select_disjoint_gadgets(found, p), InvalidInput);
}

TEST(Select, DefaultCap) {
  EXPECT_EQ(default_vertex_cap(7), 1);
  EXPECT_EQ(default_vertex_cap(28), 1);
  EXPECT_EQ(default_vertex_cap(29), 2);
}

TEST(Boost, SplitColouringHasNoGadgets) {
  const Colouring chi = example1_colouring({13, 8, 1, 2, 2});
  const auto rep = boost(chi, {});
  ASSERT_TRUE(rep.ok);
  EXPECT_EQ(rep.gadgets_found, 0u);
  EXPECT_TRUE(rep.selection.chosen.empty());
  EXPECT_TRUE(is_sts(rep.system));
  EXPECT_EQ(rep.base_triangles.size(), 26u);
}

TEST(Boost, AccountingOnRandomColouring) {
  const Colouring chi = random_colouring(13, 2, 7);
  const auto rep = boost(chi, {});
  ASSERT_TRUE(rep.ok);
  const std::uint64_t i = rep.selection.chosen.size();
  EXPECT_EQ(3 * rep.base_triangles.size() + 12 * i, pair_count(13));
  EXPECT_TRUE(is_sts(rep.system));
  const auto prof = colour_profile(rep.system, chi);
  const std::uint64_t best = *std::max_element(prof.counts.begin(), prof.counts.end());
  EXPECT_GE(2 * best, 26 + i);
  EXPECT_EQ(prof[rep.chosen_colour], rep.s_vector[static_cast<std::size_t>(rep.chosen_colour - 1)]);
  EXPECT_TRUE(oracle::selection_ok(copies_of(rep.selection), 13, default_vertex_cap(13)));
}

TEST(Boost, MonochromaticSeven) {
  const auto rep = boost(Colouring::constant(7, 2, 1), {});
  ASSERT_TRUE(rep.ok);
  EXPECT_EQ(rep.discrepancy_achieved, Rational(7));
}

TEST(Boost, RejectsBadOrder) { EXPECT_THROW(boost(random_colouring(8, 2, 1), {}), InvalidInput); }

TEST(Boost, Deterministic) {
  const Colouring chi = random_colouring(15, 3, 2);
  BoostParams p;
  p.seed = 11;
  const auto a = boost(chi, p);
  const auto b = boost(chi, p);
  EXPECT_EQ(a.system, b.system);
  EXPECT_EQ(a.s_vector, b.s_vector);
}

TEST(Boost, ExhaustedBudgetReportsFailure) {
  BoostParams p;
  p.decompose_budget = 2;
  const auto rep = boost(random_colouring(15, 2, 1), p);
  EXPECT_FALSE(rep.ok);
  EXPECT_NE(rep.failure.find("exhausted"), std::string::npos);
}

TEST(Trade, ExampleOneIsUnchanged) {
  const Colouring chi = example1_colouring({13, 5, 1, 2, 2});
  const TripleSystem s = random_embedding(construct_sts(13), 3);
  const auto res = pasch_trade_search(s, chi, 50, 1);
  EXPECT_EQ(res.initial_discrepancy, res.final_discrepancy);
  EXPECT_EQ(res.trades, 0u);
  EXPECT_TRUE(res.local_optimum);
  EXPECT_EQ(res.system, s.sorted());
}

TEST(Trade, MonotoneAndValid) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Colouring chi = random_colouring(13, 2, seed);
    const TripleSystem s = random_embedding(construct_sts(13), seed);
    Rational last = discrepancy(s, chi);
    bool valid = true, monotone = true;
    const auto res = pasch_trade_search(s, chi, 20, seed, [&](const TripleSystem& cur) {
      valid = valid && is_sts(cur);
      const Rational d = discrepancy(cur, chi);
      monotone = monotone && d >= last;
      last = d;
    });
    ASSERT_TRUE(valid);
    ASSERT_TRUE(monotone);
    ASSERT_GE(res.final_discrepancy, res.initial_discrepancy);
    ASSERT_TRUE(is_sts(res.system));
    ASSERT_EQ(discrepancy(res.system, chi), res.final_discrepancy);
  }
}

TEST(Trade, LocalOptimumIsFixpoint) {
  const Colouring chi = random_colouring(13, 2, 4);
  const auto first = pasch_trade_search(construct_sts(13), chi, 10000, 2);
  ASSERT_TRUE(first.local_optimum);
  const auto second = pasch_trade_search(first.system, chi, 100, 7);
  EXPECT_EQ(second.trades, 0u);
  EXPECT_EQ(second.system, first.system);
}

TEST(Trade, RejectsInvalidSystem) {
  EXPECT_THROW(pasch_trade_search(TripleSystem(7, {{1, 2, 3}}), Colouring::constant(7, 2, 1), 5, 0), InvalidInput);
}

TEST(Baseline, Examples) {
  const Colouring chi = random_colouring(13, 2, 1);
  const auto one = baseline_random_embedding(chi, 1, 3);
  EXPECT_EQ(one.trials, 1u);
  EXPECT_EQ(one.best, random_embedding(construct_sts(13), derive_seed(3, 0)));
  EXPECT_EQ(baseline_random_embedding(Colouring::constant(9, 2, 2), 10, 1).discrepancy_achieved, Rational(12));
  EXPECT_THROW(baseline_random_embedding(chi, 0, 1), InvalidInput);
}

TEST(Baseline, SparseColourGivesPositiveDiscrepancy) {
  // Colour 1 on about a fifth of the triples.
  Rng rng(5);
  std::vector<std::uint8_t> values(triple_count(15));
  for (auto& v : values) v = rng.bernoulli(0.2) ? 1 : 2;
  const Colouring chi(15, 2, std::move(values));
  EXPECT_GT(baseline_random_embedding(chi, 200, 2).discrepancy_achieved, Rational(0));
}

TEST(Analyze, AbsentColourGivesTwoDominant) {
  const auto rep = analyze_r_colouring(Colouring::constant(8, 3, 1));
  EXPECT_EQ(rep.verdict, Verdict::TwoDominantColours);
  EXPECT_EQ(rep.c_star, 1);
  EXPECT_EQ(rep.d_star, 2);
  EXPECT_EQ(rep.residual_count, 0u);
}

TEST(Analyze, RandomThreeColouringHasManyGadgets) {
  const Colouring chi = random_colouring(13, 3, 4);
  const auto rep = analyze_r_colouring(chi);
  EXPECT_EQ(rep.verdict, Verdict::ManyGadgets);
  for (const auto& a : rep.per_colour) {
    EXPECT_TRUE(a.exact);
    EXPECT_EQ(a.gadget_count, count_gadgets_exact(merge_colours(chi, a.colour)));
    EXPECT_GT(a.density, 0.05);
  }
}

TEST(Analyze, SplitInsideLargerPalette) {
  const Colouring chi = example1_colouring({12, 7, 1, 2, 3});
  const auto rep = analyze_r_colouring(chi);
  EXPECT_EQ(rep.verdict, Verdict::TwoDominantColours);
  EXPECT_EQ(rep.residual_count, 0u);
  EXPECT_EQ(rep.per_colour[0].gadget_count, 0u);
}

TEST(Analyze, SampledBeyondCap) {
  AnalyzeParams p;
  p.exact_cap = 10;
  p.samples = 20000;
  const auto rep = analyze_r_colouring(random_colouring(13, 3, 4), p);
  EXPECT_EQ(rep.verdict, Verdict::ManyGadgets);
  for (const auto& a : rep.per_colour) EXPECT_FALSE(a.exact);
  EXPECT_THROW(analyze_r_colouring(random_colouring(9, 2, 1)), InvalidInput);
}
