#pragma once

/**
 * @file pipeline.hpp
 * @brief Discrepancy boosting with gadgets, Pasch-trade local search, the
 *        random-embedding baseline and the multicolour analysis.
 *
 * Boosting: pick gadgets with pairwise edge-disjoint shadows and bounded
 * vertex load, decompose K_n minus their shadows into triangles, then
 * complete each gadget with whichever of its two Pasch configurations
 * carries more triples of the target colour. For a fixed leave
 * decomposition T, sum_c S_c >= C(n,2)/3 + |I| since every gadget has
 * sum_c max(a_c, b_c) >= 5, so the best colour beats the average by |I|/r.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stsd/core.hpp"
#include "stsd/decompose.hpp"
#include "stsd/gadgets.hpp"
#include "stsd/generators.hpp"
#include "stsd/rng.hpp"
#include "stsd/structure.hpp"
#include "stsd/sts.hpp"

namespace stsd {

/// Two-colouring: colour `keep` becomes 1, every other colour becomes 2.
inline Colouring merge_colours(const Colouring& chi, int keep) {
  if (keep < 1 || keep > chi.r()) throw InvalidInput("merge colour outside [1, r]");
  std::vector<std::uint8_t> values(chi.values().size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = chi.values()[i] == keep ? 1 : 2;
  return Colouring(chi.n(), 2, std::move(values));
}

// ---------------------------------------------------------------------------
// Gadget selection

enum class SelectionMode { Greedy, Sampled };

struct SelectionParams {
  std::size_t target_count = 0;  // 0: no limit
  int vertex_cap = 0;            // 0: default_vertex_cap(n)
  SelectionMode mode = SelectionMode::Greedy;
  double p = 0.0;                // Sampled: inclusion probability
  std::uint64_t seed = 0;
};

/// ceil(n / 28): four shadow edges per gadget at a vertex keep the leave graph's
/// minimum degree near n - 1 - 4n/28.
inline int default_vertex_cap(int n) { return std::max(1, (n + 27) / 28); }

struct GadgetSelection {
  std::vector<GadgetRecord> chosen;
};

namespace detail {

inline int max_vertex(std::span<const GadgetRecord> records) {
  int m = 0;
  for (const auto& rec : records)
    for (int v : rec.copy.vertices()) m = std::max(m, v);
  return m;
}

}  // namespace detail

inline GadgetSelection select_disjoint_gadgets(std::span<const GadgetRecord> records, const SelectionParams& params) {
  GadgetSelection sel;
  if (records.empty()) return sel;
  const int n = detail::max_vertex(records);
  const int cap = params.vertex_cap > 0 ? params.vertex_cap : default_vertex_cap(n);
  std::vector<int> load(static_cast<std::size_t>(n) + 1, 0);
  auto under_cap = [&](const GadgetRecord& rec) {
    const auto vs = rec.copy.vertices();
    return std::all_of(vs.begin(), vs.end(), [&](int v) { return load[static_cast<std::size_t>(v)] < cap; });
  };
  auto take = [&](const GadgetRecord& rec) {
    for (int v : rec.copy.vertices()) ++load[static_cast<std::size_t>(v)];
    sel.chosen.push_back(rec);
  };
  auto full = [&] { return params.target_count > 0 && sel.chosen.size() >= params.target_count; };
  Rng rng(params.seed);

  if (params.mode == SelectionMode::Greedy) {
    std::vector<std::size_t> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(std::span<std::size_t>(order));
    std::vector<char> used(pair_count(n), 0);
    for (std::size_t i : order) {
      if (full()) break;
      const auto& rec = records[i];
      const auto sh = k222_shadow(rec.copy);
      const bool clash = std::any_of(sh.begin(), sh.end(), [&](auto e) { return used[detail::pair_rank(e.first, e.second)]; });
      if (clash || !under_cap(rec)) continue;
      for (auto [u, v] : sh) used[detail::pair_rank(u, v)] = 1;
      take(rec);
    }
    return sel;
  }

  if (params.p < 0.0 || params.p > 1.0) throw InvalidInput("inclusion probability must lie in [0, 1]");
  // Sample, then drop every record involved in a shadow conflict, then enforce the vertex cap in order.
  std::vector<std::size_t> sampled;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (rng.bernoulli(params.p)) sampled.push_back(i);
  std::vector<int> edge_users(pair_count(n), 0);
  for (std::size_t i : sampled)
    for (auto [u, v] : k222_shadow(records[i].copy)) ++edge_users[detail::pair_rank(u, v)];
  for (std::size_t i : sampled) {
    if (full()) break;
    const auto sh = k222_shadow(records[i].copy);
    const bool conflict = std::any_of(sh.begin(), sh.end(), [&](auto e) { return edge_users[detail::pair_rank(e.first, e.second)] > 1; });
    if (conflict || !under_cap(records[i])) continue;
    take(records[i]);
  }
  return sel;
}

// ---------------------------------------------------------------------------
// Boosting

struct BoostParams {
  SelectionParams selection;            // seed is overridden from `seed`
  std::size_t collect_max = 2000;       // gadgets gathered before selection
  std::uint64_t collect_budget = 20000; // random copies probed
  std::uint64_t decompose_budget = 100'000'000;
  bool colour_aware = true;             // also try colour-preferring decompositions
  int leave_variants = 4;               // extra shuffled colour-preferring runs per colour
  std::uint64_t variant_budget = 1'000'000;
  std::uint64_t seed = 0;
};

struct BoostReport {
  bool ok = false;
  std::string failure;                 // set when !ok
  int n = 0;
  int r = 0;
  std::size_t gadgets_found = 0;
  GadgetSelection selection;
  TriangleDecomposition base_triangles;
  std::vector<std::uint64_t> t_vector;  // T_c: colour counts of the leave decomposition
  std::vector<std::uint64_t> i_vector;  // sum over chosen gadgets of I_c
  std::vector<std::uint64_t> s_vector;  // S_c = T_c + I_c sum
  int chosen_colour = 0;
  std::string decomposition_order;     // value order that produced base_triangles
  std::uint64_t decomposition_nodes = 0;
  bool retried = false;
  TripleSystem system;
  Rational discrepancy_achieved;
};

namespace detail {

inline void require(bool condition, const char* what) {
  if (!condition) throw std::logic_error(std::string("boost invariant violated: ") + what);
}

struct LeaveCandidate {
  TriangleDecomposition triangles;
  std::string order;
  std::uint64_t nodes = 0;
};

// Decomposes the leave graph with ascending order and, if requested, once per
// preferred colour. Failed attempts are skipped.
inline std::vector<LeaveCandidate> decompose_leave(const Colouring& chi, const SimpleGraph& leave,
                                                   const BoostParams& params, std::uint64_t& nodes,
                                                   std::string& last_status) {
  std::vector<LeaveCandidate> out;
  auto attempt = [&](DecomposeOptions opt, std::string name) {
    const auto res = triangle_decompose(leave, opt);
    nodes += res.nodes;
    last_status = to_string(res.status);
    if (res.status == DecomposeStatus::Success) out.push_back({res.triangles, std::move(name), res.nodes});
  };
  DecomposeOptions asc;
  asc.budget = params.decompose_budget;
  attempt(asc, "ascending");
  if (params.colour_aware) {
    for (int c = 1; c <= chi.r(); ++c) {
      DecomposeOptions pref = asc;
      pref.order = ValueOrder::PreferColour;
      pref.colouring = &chi;
      pref.preferred_colour = c;
      attempt(pref, "prefer-colour-" + std::to_string(c));
      for (int k = 0; k < params.leave_variants; ++k) {
        DecomposeOptions shuffled = pref;
        shuffled.shuffle_ties = true;
        shuffled.budget = std::min(params.decompose_budget, params.variant_budget);
        shuffled.seed = derive_seed(derive_seed(params.seed, 3), static_cast<std::uint64_t>(c * 1024 + k));
        attempt(shuffled, "prefer-colour-" + std::to_string(c) + "-shuffled-" + std::to_string(k));
      }
    }
  }
  return out;
}

}  // namespace detail

inline BoostReport boost(const Colouring& chi, const BoostParams& params) {
  const int n = chi.n();
  const int r = chi.r();
  if (n < 3 || !sts_order_admissible(n))
    throw InvalidInput("boosting needs n = 1 or 3 (mod 6), n >= 3; got n = " + std::to_string(n));
  if (n > kMaxGraphOrder) throw InvalidInput("boosting supports n <= 64");
  BoostReport rep;
  rep.n = n;
  rep.r = r;

  const auto found = collect_gadgets(chi, params.collect_max, std::max<std::uint64_t>(params.collect_budget, params.collect_max),
                                     derive_seed(params.seed, 1));
  rep.gadgets_found = found.size();
  SelectionParams sp = params.selection;
  sp.seed = derive_seed(params.seed, 2);
  if (sp.vertex_cap <= 0) sp.vertex_cap = default_vertex_cap(n);
  GadgetSelection selection = select_disjoint_gadgets(found, sp);

  std::vector<detail::LeaveCandidate> candidates;
  std::string status;
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<K222Copy> copies;
    for (const auto& g : selection.chosen) copies.push_back(g.copy);
    const SimpleGraph leave = minus(SimpleGraph::complete(n), shadow(copies, n));
    detail::require(is_k3_divisible(leave).divisible, "leave graph must stay K3-divisible");
    candidates = detail::decompose_leave(chi, leave, params, rep.decomposition_nodes, status);
    if (!candidates.empty() || selection.chosen.empty()) break;
    // Keep the earlier-accepted half and retry once.
    selection.chosen.resize(selection.chosen.size() / 2);
    rep.retried = true;
  }
  rep.selection = selection;
  if (candidates.empty()) {
    rep.failure = "leave-graph decomposition " + status;
    return rep;
  }

  const std::size_t gadget_total = selection.chosen.size();
  rep.i_vector.assign(static_cast<std::size_t>(r), 0);
  for (const auto& g : selection.chosen) {
    std::uint64_t sum = 0;
    for (int c = 1; c <= r; ++c) {
      rep.i_vector[static_cast<std::size_t>(c - 1)] += g.best_for(c);
      sum += g.best_for(c);
    }
    detail::require(sum >= 5, "every gadget has sum_c I_c >= 5");
  }

  // Best (candidate, colour) by S_c; ties to the smaller colour, then the earlier candidate.
  std::size_t best_cand = 0;
  int best_colour = 0;
  std::uint64_t best_s = 0;
  for (int c = 1; c <= r; ++c)
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const auto t = profile_of(candidates[k].triangles, chi);
      const std::uint64_t s = t[c] + rep.i_vector[static_cast<std::size_t>(c - 1)];
      if (best_colour == 0 || s > best_s) {
        best_s = s;
        best_colour = c;
        best_cand = k;
      }
    }
  const auto& chosen = candidates[best_cand];
  rep.base_triangles = chosen.triangles;
  rep.decomposition_order = chosen.order;
  rep.t_vector = profile_of(chosen.triangles, chi).counts;
  rep.s_vector.resize(static_cast<std::size_t>(r));
  for (std::size_t c = 0; c < rep.s_vector.size(); ++c) rep.s_vector[c] = rep.t_vector[c] + rep.i_vector[c];
  rep.chosen_colour = best_colour;

  std::vector<Triple> triples = chosen.triangles;
  for (const auto& g : selection.chosen) {
    const PaschPair pp = pasch_pair(g.copy);
    const bool take_p1 = g.profile1[best_colour] >= g.profile2[best_colour];
    const auto& cfg = take_p1 ? pp.p1 : pp.p2;
    triples.insert(triples.end(), cfg.begin(), cfg.end());
  }
  rep.system = TripleSystem(n, std::move(triples)).sorted();

  const std::uint64_t pairs = pair_count(n);
  const std::uint64_t sum_s = std::accumulate(rep.s_vector.begin(), rep.s_vector.end(), std::uint64_t{0});
  detail::require(3 * rep.base_triangles.size() + 12 * gadget_total == pairs, "3|T| + 12|I| = C(n,2)");
  detail::require(3 * sum_s >= pairs + 3 * gadget_total, "sum_c S_c >= C(n,2)/3 + |I|");
  detail::require(3 * static_cast<std::uint64_t>(r) * best_s >= pairs + 3 * gadget_total,
                  "S_c* >= (C(n,2)/3 + |I|) / r");
  detail::require(is_sts(rep.system), "final system is a Steiner triple system");
  const auto final_profile = colour_profile(rep.system, chi);
  detail::require(final_profile[best_colour] == best_s, "final colour count equals S_c*");
  rep.discrepancy_achieved = discrepancy(final_profile);
  rep.ok = true;
  return rep;
}

// ---------------------------------------------------------------------------
// Pasch trades

struct TradeResult {
  TripleSystem system;
  std::uint64_t trades = 0;
  bool local_optimum = false;
  Rational initial_discrepancy;
  Rational final_discrepancy;
};

namespace detail {

class StsTable {
 public:
  explicit StsTable(const TripleSystem& s) : n_(s.n()), third_(static_cast<std::size_t>((s.n() + 1) * (s.n() + 1)), 0) {
    for (const Triple& t : s.triples()) set(t);
  }

  int third(int u, int v) const { return third_[idx(u, v)]; }

  void set(const Triple& t) {
    third_[idx(t.a, t.b)] = third_[idx(t.b, t.a)] = t.c;
    third_[idx(t.a, t.c)] = third_[idx(t.c, t.a)] = t.b;
    third_[idx(t.b, t.c)] = third_[idx(t.c, t.b)] = t.a;
  }

  /// Triples through a, as (x, y) with x < y.
  std::vector<std::pair<int, int>> through(int a) const {
    std::vector<std::pair<int, int>> out;
    for (int x = 1; x <= n_; ++x) {
      if (x == a) continue;
      const int y = third(a, x);
      if (x < y) out.emplace_back(x, y);
    }
    return out;
  }

  TripleSystem system() const {
    std::vector<Triple> out;
    for (int u = 1; u <= n_; ++u)
      for (int v = u + 1; v <= n_; ++v) {
        const int w = third(u, v);
        if (w > v) out.push_back({u, v, w});
      }
    return TripleSystem(n_, std::move(out));
  }

 private:
  std::size_t idx(int u, int v) const { return static_cast<std::size_t>(u * (n_ + 1) + v); }

  int n_;
  std::vector<int> third_;
};

}  // namespace detail

/// Hill climbing over Pasch trades. Each step applies the first trade (in a
/// seeded random scan) that strictly increases the current leading colour,
/// so discrepancy never decreases. Stops after `iterations` trades or at a
/// local optimum. `observer` sees the system after every trade.
inline TradeResult pasch_trade_search(const TripleSystem& s, const Colouring& chi, std::uint64_t iterations,
                                      std::uint64_t seed,
                                      const std::function<void(const TripleSystem&)>& observer = {}) {
  if (s.n() != chi.n()) throw InvalidInput("system and colouring orders differ");
  if (!is_sts(s)) throw InvalidInput("trade search needs a valid Steiner triple system");
  const int n = s.n();
  TradeResult res;
  res.initial_discrepancy = s.empty() ? Rational(0) : discrepancy(s, chi);
  detail::StsTable table(s);
  ColourProfile profile = colour_profile(s, chi);
  Rng rng(seed);
  std::vector<int> vertices = full_domain(n);

  auto try_trade = [&]() -> bool {
    const int lead = leading_colour(profile);
    rng.shuffle(std::span<int>(vertices));
    for (int a : vertices) {
      const auto through = table.through(a);
      for (std::size_t i = 0; i < through.size(); ++i)
        for (std::size_t j = i + 1; j < through.size(); ++j) {
          const auto [x, y] = through[i];
          const auto [u0, v0] = through[j];
          for (int flip = 0; flip < 2; ++flip) {
            const int u = flip ? v0 : u0;
            const int v = flip ? u0 : v0;
            const int w = table.third(x, u);
            if (table.third(y, v) != w) continue;
            // Pasch {axy, auv, xuw, yvw}; the complementary configuration is {axu, ayv, wxy, wuv}.
            const K222Copy k = make_k222(a, w, x, v, y, u, n);
            const PaschPair pp = pasch_pair(k);
            int a_first = a, x_first = x, y_first = y;
            detail::sort3(a_first, x_first, y_first);
            const Triple axy{a_first, x_first, y_first};
            const bool current_is_p1 = std::find(pp.p1.begin(), pp.p1.end(), axy) != pp.p1.end();
            const auto& cur = current_is_p1 ? pp.p1 : pp.p2;
            const auto& alt = current_is_p1 ? pp.p2 : pp.p1;
            const auto cur_prof = profile_of(cur, chi);
            const auto alt_prof = profile_of(alt, chi);
            if (alt_prof[lead] <= cur_prof[lead]) continue;
            for (const Triple& t : alt) table.set(t);
            for (int c = 1; c <= chi.r(); ++c)
              profile.counts[static_cast<std::size_t>(c - 1)] += alt_prof[c] - cur_prof[c];
            return true;
          }
        }
    }
    return false;
  };

  while (res.trades < iterations) {
    if (!try_trade()) {
      res.local_optimum = true;
      break;
    }
    ++res.trades;
    if (observer) observer(table.system());
  }
  res.system = table.system().sorted();
  res.final_discrepancy = res.system.empty() ? Rational(0) : discrepancy(profile);
  return res;
}

// ---------------------------------------------------------------------------
// Random-embedding baseline

struct BaselineResult {
  TripleSystem best;
  Rational discrepancy_achieved;
  std::uint64_t trials = 0;
};

/// Best of `trials` uniformly random relabellings of one constructed STS.
inline BaselineResult baseline_random_embedding(const Colouring& chi, std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidInput("baseline needs at least one trial");
  const TripleSystem base = construct_sts(chi.n());
  BaselineResult res;
  for (std::uint64_t i = 0; i < trials; ++i) {
    TripleSystem s = random_embedding(base, derive_seed(seed, i));
    const Rational d = discrepancy(s, chi);
    if (i == 0 || d > res.discrepancy_achieved) {
      res.discrepancy_achieved = d;
      res.best = std::move(s);
    }
  }
  res.trials = trials;
  return res;
}

// ---------------------------------------------------------------------------
// Multicolour analysis

struct AnalyzeParams {
  double gadget_threshold = 0.05;    // ManyGadgets when some merged density exceeds this
  double residual_threshold = 0.05;  // TwoDominantColours when residual <= this * C(n,3)
  int exact_cap = kDefaultExactCap;
  std::uint64_t samples = 200000;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct ColourAnalysis {
  int colour = 0;
  bool exact = false;
  std::uint64_t gadget_count = 0;  // exact mode only
  double density = 0.0;
  double standard_error = 0.0;
  StructureReport structure;
};

enum class Verdict { ManyGadgets, TwoDominantColours, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::ManyGadgets: return "many_gadgets";
    case Verdict::TwoDominantColours: return "two_dominant_colours";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct MulticolourReport {
  std::vector<ColourAnalysis> per_colour;
  Verdict verdict = Verdict::Inconclusive;
  int gadget_colour = 0;  // ManyGadgets: merge with the largest density
  int c_star = 0;         // two most frequent colours (smaller id on ties)
  int d_star = 0;
  std::uint64_t residual_count = 0;  // triples outside {c_star, d_star}
};

/// Exact gadget count of merge_colours(chi, keep); throws if some merged gadget
/// is not a gadget of chi.
inline std::uint64_t count_merged_gadgets_checked(const Colouring& chi, const Colouring& merged) {
  std::uint64_t count = 0;
  for (int a1 = 1; a1 <= chi.n(); ++a1)
    detail::for_each_k222_from(chi.n(), a1, [&](int x1, int x2, int y1, int y2, int z1, int z2) {
      if (!detail::gadget_fast(merged, x1, x2, y1, y2, z1, z2)) return;
      ++count;
      if (!detail::gadget_fast(chi, x1, x2, y1, y2, z1, z2))
        throw std::logic_error("a gadget of a merged colouring is not a gadget of the original");
    });
  return count;
}

inline MulticolourReport analyze_r_colouring(const Colouring& chi, const AnalyzeParams& params = {}) {
  if (chi.r() < 3) throw InvalidInput("multicolour analysis needs r >= 3");
  const int n = chi.n();
  MulticolourReport rep;
  double best_density = -1.0;
  for (int c = 1; c <= chi.r(); ++c) {
    const Colouring merged = merge_colours(chi, c);
    ColourAnalysis a;
    a.colour = c;
    if (n <= params.exact_cap) {
      a.exact = true;
      a.gadget_count = count_merged_gadgets_checked(chi, merged);
      const auto copies = k222_copy_count(n);
      a.density = copies ? static_cast<double>(a.gadget_count) / static_cast<double>(copies) : 0.0;
    } else {
      const auto est = estimate_gadget_density(merged, params.samples, derive_seed(params.seed, static_cast<std::uint64_t>(c)),
                                               params.workers);
      a.density = est.estimate;
      a.standard_error = est.standard_error;
    }
    a.structure = recover_partition(merged, params.seed);
    if (a.density > best_density) {
      best_density = a.density;
      rep.gadget_colour = c;
    }
    rep.per_colour.push_back(std::move(a));
  }

  const auto sizes = chi.class_sizes();
  std::vector<int> order(sizes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i) + 1;
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return sizes[static_cast<std::size_t>(x - 1)] > sizes[static_cast<std::size_t>(y - 1)]; });
  rep.c_star = order[0];
  rep.d_star = order[1];
  rep.residual_count = triple_count(n) - sizes[static_cast<std::size_t>(rep.c_star - 1)] -
                       sizes[static_cast<std::size_t>(rep.d_star - 1)];

  if (best_density > params.gadget_threshold)
    rep.verdict = Verdict::ManyGadgets;
  else if (static_cast<double>(rep.residual_count) <= params.residual_threshold * static_cast<double>(triple_count(n)))
    rep.verdict = Verdict::TwoDominantColours;
  else
    rep.verdict = Verdict::Inconclusive;
  return rep;
}

}  // namespace stsd
