#pragma once

/**
 * @file structure.hpp
 * @brief Structure recovery for 2-colourings with few gadgets.
 *
 * For a 2-colouring chi and distinct vertices x, y the pair colouring
 * f_xy(uv) = chi(xuv) - chi(yuv) takes values in {0, +1, -1}. If chi has no
 * gadgets, no f_xy contains an unbalanced 4-cycle, and then f_xy is either
 * identically zero ("even" pair) or +1 inside a part A, -1 inside a part B
 * and 0 across ("odd" pair), up to a few exceptional vertices. Parities
 * compose like addition mod 2, which splits [n] into X u Y with even pairs
 * inside the parts and odd pairs across.
 *
 * Colour c of a 2-colouring is read as the value c - 1 in {0, 1}.
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stsd/core.hpp"
#include "stsd/generators.hpp"
#include "stsd/rng.hpp"

namespace stsd {

enum class Parity { Even, Odd };

inline const char* to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

/// f_xy on the pairs of [n] \ {x, y}; entries touching x or y are stored as 0 and never read.
struct PairColouring {
  int x = 0;
  int y = 0;
  EdgeColouringZPM values;
  std::vector<int> domain;

  int operator()(int u, int v) const noexcept { return values(u, v); }
};

inline void require_two_colours(const Colouring& chi) {
  if (chi.r() != 2) throw InvalidInput("structure routines need a 2-colouring; merge colours first");
}

inline PairColouring pair_colouring(const Colouring& chi, int x, int y) {
  require_two_colours(chi);
  const int n = chi.n();
  if (x == y || x < 1 || y < 1 || x > n || y > n) throw InvalidInput("pair colouring needs distinct x, y in [n]");
  PairColouring f{x, y, EdgeColouringZPM(n), {}};
  for (int v = 1; v <= n; ++v)
    if (v != x && v != y) f.domain.push_back(v);
  for (std::size_t j = 0; j < f.domain.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) {
      const int u = f.domain[i];
      const int v = f.domain[j];
      f.values.set(u, v, chi.at(x, u, v) - chi.at(y, u, v));
    }
  return f;
}

inline std::vector<int> full_domain(int n) {
  std::vector<int> d(static_cast<std::size_t>(n));
  for (int v = 1; v <= n; ++v) d[static_cast<std::size_t>(v - 1)] = v;
  return d;
}

// ---------------------------------------------------------------------------
// Unbalanced 4-cycles

struct C4Witness {
  int a = 0, b = 0, c = 0, d = 0;
  std::array<int, 4> values{};  // f(ab), f(bc), f(cd), f(da)

  bool unbalanced() const noexcept { return values[0] + values[2] != values[1] + values[3]; }
};

struct C4ScanOptions {
  std::size_t exhaustive_cap = 64;   // exhaustive scan when the domain has at most this many vertices
  std::uint64_t samples = 1'000'000;  // random 4-sets checked beyond the cap
  std::uint64_t seed = 0;
};

namespace detail {

template <class F>
std::optional<C4Witness> check_four_set(const F& f, int p, int q, int s, int t) {
  // The three 4-cycles through {p,q,s,t}, in lexicographic order of (a,b,c,d) with a = p.
  const std::array<std::array<int, 4>, 3> cycles{{{p, q, s, t}, {p, q, t, s}, {p, s, q, t}}};
  for (const auto& cyc : cycles) {
    C4Witness w{cyc[0], cyc[1], cyc[2], cyc[3],
                {f(cyc[0], cyc[1]), f(cyc[1], cyc[2]), f(cyc[2], cyc[3]), f(cyc[3], cyc[0])}};
    if (w.unbalanced()) return w;
  }
  return std::nullopt;
}

template <class F>
std::optional<C4Witness> find_unbalanced_c4_on(const F& f, std::span<const int> domain, const C4ScanOptions& opt) {
  const std::size_t m = domain.size();
  if (m < 4) return std::nullopt;
  if (m <= opt.exhaustive_cap) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        for (std::size_t k = j + 1; k < m; ++k)
          for (std::size_t l = k + 1; l < m; ++l)
            if (auto w = check_four_set(f, domain[i], domain[j], domain[k], domain[l])) return w;
    return std::nullopt;
  }
  Rng rng(opt.seed);
  for (std::uint64_t s = 0; s < opt.samples; ++s) {
    std::array<std::size_t, 4> idx{};
    for (std::size_t i = 0; i < 4; ++i) {
      std::size_t v = 0;
      do {
        v = static_cast<std::size_t>(rng.below(m));
      } while (std::find(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(i), v) !=
               idx.begin() + static_cast<std::ptrdiff_t>(i));
      idx[i] = v;
    }
    std::sort(idx.begin(), idx.end());
    if (auto w = check_four_set(f, domain[idx[0]], domain[idx[1]], domain[idx[2]], domain[idx[3]])) return w;
  }
  return std::nullopt;
}

}  // namespace detail

/// First unbalanced 4-cycle in scan order: 4-sets {p<q<s<t} lexicographically,
/// then the cycles (p,q,s,t), (p,q,t,s), (p,s,q,t).
inline std::optional<C4Witness> find_unbalanced_c4(const EdgeColouringZPM& f, const C4ScanOptions& opt = {}) {
  const auto domain = full_domain(f.n());
  return detail::find_unbalanced_c4_on(f, domain, opt);
}

inline std::optional<C4Witness> find_unbalanced_c4(const PairColouring& f, const C4ScanOptions& opt = {}) {
  return detail::find_unbalanced_c4_on(f, f.domain, opt);
}

// ---------------------------------------------------------------------------
// Classification of {0,+1,-1} colourings

struct PairClassification {
  Parity parity = Parity::Even;
  std::vector<int> exceptional;  // deleted vertices
  std::vector<int> part_a;       // odd only: +1 inside
  std::vector<int> part_b;       // odd only: -1 inside
  std::uint64_t fit_defect = 0;  // pattern violations among non-deleted vertices
};

namespace detail {

template <class F>
std::vector<int> greedy_matching_vertices(const F& f, std::span<const int> domain, int colour) {
  std::vector<char> used(domain.size(), 0);
  std::vector<int> verts;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (used[i]) continue;
    for (std::size_t j = i + 1; j < domain.size(); ++j) {
      if (used[j] || f(domain[i], domain[j]) != colour) continue;
      used[i] = used[j] = 1;
      verts.push_back(domain[i]);
      verts.push_back(domain[j]);
      break;
    }
  }
  std::sort(verts.begin(), verts.end());
  return verts;
}

inline bool contains_sorted(const std::vector<int>& v, int x) { return std::binary_search(v.begin(), v.end(), x); }

inline void insert_sorted(std::vector<int>& v, int x) { v.insert(std::upper_bound(v.begin(), v.end(), x), x); }

// Expected value of f(u,v) for u in side su, v in side sv (0 = A, 1 = B).
constexpr int odd_pattern(int su, int sv) noexcept { return su != sv ? 0 : (su == 0 ? 1 : -1); }

struct Candidate {
  PairClassification result;
  std::uint64_t score() const noexcept { return result.exceptional.size() + result.fit_defect; }
};

template <class F>
Candidate even_candidate(const F& f, std::span<const int> domain, const std::vector<int>& v1,
                         const std::vector<int>& vm1) {
  Candidate cand;
  auto& res = cand.result;
  res.parity = Parity::Even;
  std::vector<int> core;
  for (int v : domain) {
    if (contains_sorted(v1, v) || contains_sorted(vm1, v))
      res.exceptional.push_back(v);
    else
      core.push_back(v);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (auto it = res.exceptional.begin(); it != res.exceptional.end();) {
      const int v = *it;
      const bool fits = std::all_of(core.begin(), core.end(), [&](int w) { return f(v, w) == 0; });
      if (fits) {
        insert_sorted(core, v);
        it = res.exceptional.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  for (std::size_t i = 0; i < core.size(); ++i)
    for (std::size_t j = i + 1; j < core.size(); ++j) res.fit_defect += f(core[i], core[j]) != 0;
  return cand;
}

template <class F>
Candidate odd_candidate(const F& f, std::span<const int> domain, const std::vector<int>& v1,
                        const std::vector<int>& vm1) {
  Candidate cand;
  auto& res = cand.result;
  res.parity = Parity::Odd;
  std::vector<int> a = v1;
  std::vector<int> b;
  for (int v : vm1)
    if (!contains_sorted(v1, v)) b.push_back(v);
  for (int v : domain)
    if (!contains_sorted(v1, v) && !contains_sorted(vm1, v)) res.exceptional.push_back(v);

  // Delete a smallest vertex cover (size <= 2 when it exists) of the nonzero A-B pairs.
  auto bad_cross = [&](const std::vector<int>& removed) {
    std::vector<std::pair<int, int>> bad;
    for (int u : a)
      for (int v : b)
        if (f(u, v) != 0 && !contains_sorted(removed, u) && !contains_sorted(removed, v)) bad.emplace_back(u, v);
    return bad;
  };
  std::vector<int> cover;
  auto bad = bad_cross(cover);
  if (!bad.empty()) {
    std::vector<int> ends;
    for (auto [u, v] : bad) {
      ends.push_back(u);
      ends.push_back(v);
    }
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    bool found = false;
    for (std::size_t i = 0; i < ends.size() && !found; ++i)
      if (bad_cross({ends[i]}).empty()) {
        cover = {ends[i]};
        found = true;
      }
    for (std::size_t i = 0; i < ends.size() && !found; ++i)
      for (std::size_t j = i + 1; j < ends.size() && !found; ++j)
        if (bad_cross({ends[i], ends[j]}).empty()) {
          cover = {ends[i], ends[j]};
          found = true;
        }
    while (!found) {
      // Greedy fallback: drop the endpoint with most remaining bad pairs (smallest id on ties).
      int best = 0;
      std::size_t best_deg = 0;
      for (int v : ends) {
        if (contains_sorted(cover, v)) continue;
        std::size_t deg = 0;
        for (auto [x, y] : bad) deg += (x == v || y == v);
        if (deg > best_deg) {
          best_deg = deg;
          best = v;
        }
      }
      insert_sorted(cover, best);
      bad = bad_cross(cover);
      found = bad.empty();
    }
  }
  for (int v : cover) {
    insert_sorted(res.exceptional, v);
    std::erase(a, v);
    std::erase(b, v);
  }

  for (bool changed = true; changed;) {
    changed = false;
    for (auto it = res.exceptional.begin(); it != res.exceptional.end();) {
      const int v = *it;
      auto fits_side = [&](int side) {
        return std::all_of(a.begin(), a.end(), [&](int w) { return f(v, w) == odd_pattern(side, 0); }) &&
               std::all_of(b.begin(), b.end(), [&](int w) { return f(v, w) == odd_pattern(side, 1); });
      };
      if (fits_side(0)) {
        insert_sorted(a, v);
      } else if (fits_side(1)) {
        insert_sorted(b, v);
      } else {
        ++it;
        continue;
      }
      it = res.exceptional.erase(it);
      changed = true;
    }
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) res.fit_defect += f(a[i], a[j]) != 1;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j) res.fit_defect += f(b[i], b[j]) != -1;
  for (int u : a)
    for (int v : b) res.fit_defect += f(u, v) != 0;
  res.part_a = std::move(a);
  res.part_b = std::move(b);
  return cand;
}

template <class F>
PairClassification classify_on(const F& f, std::span<const int> domain) {
  const auto v1 = greedy_matching_vertices(f, domain, 1);
  const auto vm1 = greedy_matching_vertices(f, domain, -1);
  Candidate even = even_candidate(f, domain, v1, vm1);
  Candidate odd = odd_candidate(f, domain, v1, vm1);
  return odd.score() < even.score() ? std::move(odd.result) : std::move(even.result);
}

}  // namespace detail

/// Builds inclusion-maximal matchings M1, M-1 greedily, forms the all-zero
/// candidate (deleting V(M1) u V(M-1)) and the two-clique candidate (deleting
/// V0 and a smallest cover of nonzero A-B pairs), re-admits deleted vertices
/// that fit the pattern exactly, and keeps the candidate with fewer deleted
/// vertices plus violations (even on ties).
inline PairClassification classify_zpm(const EdgeColouringZPM& f) {
  const auto domain = full_domain(f.n());
  return detail::classify_on(f, domain);
}

inline PairClassification classify_zpm(const PairColouring& f) { return detail::classify_on(f, f.domain); }

inline constexpr std::uint64_t kExactParityPairs = std::uint64_t{1} << 20;

/// Parity of xy from the classification of f_xy. Exact when C(n-2, 2) <= sample_size;
/// otherwise f_xy is restricted to a random vertex subset with at most sample_size pairs.
inline Parity pair_parity(const Colouring& chi, int x, int y, std::uint64_t sample_size = kExactParityPairs,
                          std::uint64_t seed = 0) {
  PairColouring f = pair_colouring(chi, x, y);
  if (pair_count(static_cast<int>(f.domain.size())) > sample_size) {
    std::size_t keep = 2;
    while (pair_count(static_cast<int>(keep + 1)) <= sample_size) ++keep;
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(x) * 4096 + static_cast<std::uint64_t>(y)));
    rng.shuffle(std::span<int>(f.domain));
    f.domain.resize(keep);
    std::sort(f.domain.begin(), f.domain.end());
  }
  return classify_zpm(f).parity;
}

// ---------------------------------------------------------------------------
// Partition recovery

struct StructureReport {
  std::vector<int> x;
  std::vector<int> y;
  int inside_colour = 1;
  int cross_colour = 2;
  std::uint64_t mismatch_count = 0;
  double mismatch_fraction = 0.0;
};

/// Number of triples whose colour differs from the split pattern (X, Y, inside, cross).
inline std::uint64_t split_mismatch(const Colouring& chi, const std::vector<int>& x, int inside, int cross) {
  std::vector<char> in_x(static_cast<std::size_t>(chi.n()) + 1, 0);
  for (int v : x) in_x[static_cast<std::size_t>(v)] = 1;
  std::uint64_t mismatch = 0;
  for (std::uint64_t k = 0; k < triple_count(chi.n()); ++k) {
    const Triple t = triple_unrank(k, chi.n());
    const int cnt = in_x[t.a] + in_x[t.b] + in_x[t.c];
    const int ideal = (cnt == 1 || cnt == 2) ? cross : inside;
    mismatch += chi.at_rank(k) != ideal;
  }
  return mismatch;
}

namespace detail {

// Best colour pair for a fixed part membership, with its mismatch count.
struct SplitFit {
  int inside = 1;
  std::uint64_t mismatch = 0;
};

inline SplitFit fit_split(const Colouring& chi, const std::vector<char>& in_x) {
  const int n = chi.n();
  std::array<std::uint64_t, 3> inside{}, cross{};
  for (std::uint64_t k = 0; k < triple_count(n); ++k) {
    const Triple t = triple_unrank(k, n);
    const int cnt = in_x[t.a] + in_x[t.b] + in_x[t.c];
    ((cnt == 1 || cnt == 2) ? cross : inside)[static_cast<std::size_t>(chi.at_rank(k))]++;
  }
  const std::uint64_t inside_total = inside[1] + inside[2];
  const std::uint64_t cross_total = cross[1] + cross[2];
  auto cost = [&](int c) { return (inside_total - inside[c]) + (cross_total - cross[3 - c]); };
  return cost(1) <= cost(2) ? SplitFit{1, cost(1)} : SplitFit{2, cost(2)};
}

// Change in mismatches if v switches part, colours held fixed.
inline std::int64_t move_gain(const Colouring& chi, const std::vector<char>& in_x, int v, int inside_colour) {
  const int n = chi.n();
  std::int64_t delta = 0;
  for (int a = 1; a <= n; ++a) {
    if (a == v) continue;
    for (int b = a + 1; b <= n; ++b) {
      if (b == v) continue;
      const int colour = chi.at(v, a, b);
      const int rest = in_x[a] + in_x[b];
      const int now = rest + in_x[v], after = rest + 1 - in_x[v];
      const bool cross_now = now == 1 || now == 2, cross_after = after == 1 || after == 2;
      const int want_now = cross_now ? 3 - inside_colour : inside_colour;
      const int want_after = cross_after ? 3 - inside_colour : inside_colour;
      delta += (colour != want_after) - (colour != want_now);
    }
  }
  return delta;
}

}  // namespace detail

/// Local search on part membership: the single vertex switch that lowers the
/// mismatch count most is applied until none does.
inline detail::SplitFit refine_split(const Colouring& chi, std::vector<char>& in_x) {
  detail::SplitFit fit = detail::fit_split(chi, in_x);
  for (;;) {
    int best_v = 0;
    std::int64_t best_delta = 0;
    for (int v = 1; v <= chi.n(); ++v) {
      const std::int64_t d = detail::move_gain(chi, in_x, v, fit.inside);
      if (d < best_delta) {
        best_delta = d;
        best_v = v;
      }
    }
    if (best_v == 0) return fit;
    in_x[static_cast<std::size_t>(best_v)] ^= 1;
    fit = detail::fit_split(chi, in_x);
  }
}

/// Starts from the parity split around each of the anchors 1, 2, 3 (the part
/// of the anchor holds the vertices whose pair with it is even), refines each
/// start by single-vertex switches, and keeps the start with the fewest
/// mismatches (earliest anchor on ties). Colours are chosen to minimise
/// mismatches (ties toward colour 1 inside); the one-part partition ([n], {})
/// replaces (X, Y) only when it has strictly fewer mismatches. X is reported
/// as the part containing vertex 1.
inline StructureReport recover_partition(const Colouring& chi, std::uint64_t seed = 0,
                                         std::uint64_t sample_size = kExactParityPairs) {
  require_two_colours(chi);
  const int n = chi.n();
  StructureReport rep;
  if (n == 0) return rep;
  std::vector<char> in_x;
  detail::SplitFit fit;
  for (int anchor = 1; anchor <= std::min(n, 3); ++anchor) {
    std::vector<char> start(static_cast<std::size_t>(n) + 1, 0);
    for (int v = 1; v <= n; ++v)
      start[static_cast<std::size_t>(v)] = v == anchor || pair_parity(chi, anchor, v, sample_size, seed) == Parity::Even;
    const detail::SplitFit got = refine_split(chi, start);
    if (in_x.empty() || got.mismatch < fit.mismatch) {
      in_x = std::move(start);
      fit = got;
    }
  }
  if (!in_x[1])
    for (int v = 1; v <= n; ++v) in_x[static_cast<std::size_t>(v)] ^= 1;
  for (int v = 1; v <= n; ++v) (in_x[static_cast<std::size_t>(v)] ? rep.x : rep.y).push_back(v);
  rep.inside_colour = fit.inside;
  rep.cross_colour = 3 - fit.inside;
  rep.mismatch_count = fit.mismatch;

  const auto sizes = chi.class_sizes();
  const int mono = sizes[0] >= sizes[1] ? 1 : 2;
  const std::uint64_t mono_mismatch = triple_count(n) - sizes[static_cast<std::size_t>(mono - 1)];
  if (mono_mismatch < rep.mismatch_count) {
    rep.x = full_domain(n);
    rep.y.clear();
    rep.inside_colour = mono;
    rep.cross_colour = 3 - mono;
    rep.mismatch_count = mono_mismatch;
  }
  const std::uint64_t total = triple_count(n);
  rep.mismatch_fraction = total ? static_cast<double>(rep.mismatch_count) / static_cast<double>(total) : 0.0;
  return rep;
}

struct AdditivityResult {
  std::uint64_t violations = 0;
  std::uint64_t checked = 0;
};

/// Checks the parity composition rule on (x, y, z): same parity of xy, yz
/// forces xz even, different parity forces xz odd. Exhaustive over all
/// (x, y, z) with x < z when trials == 0 or trials covers them all.
inline AdditivityResult parity_additivity_check(const Colouring& chi, std::uint64_t trials, std::uint64_t seed,
                                                std::uint64_t sample_size = kExactParityPairs) {
  require_two_colours(chi);
  const int n = chi.n();
  AdditivityResult res;
  if (n < 3) return res;
  std::vector<std::optional<Parity>> cache(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  auto parity = [&](int u, int v) {
    if (u > v) std::swap(u, v);
    auto& slot = cache[static_cast<std::size_t>(u - 1) * static_cast<std::size_t>(n) + static_cast<std::size_t>(v - 1)];
    if (!slot) slot = pair_parity(chi, u, v, sample_size, seed);
    return *slot;
  };
  auto check = [&](int x, int y, int z) {
    const bool same = parity(x, y) == parity(y, z);
    const Parity expected = same ? Parity::Even : Parity::Odd;
    res.violations += parity(x, z) != expected;
    ++res.checked;
  };
  const std::uint64_t all = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) *
                            static_cast<std::uint64_t>(n - 2) / 2;
  if (trials == 0 || trials >= all) {
    for (int x = 1; x <= n; ++x)
      for (int z = x + 1; z <= n; ++z)
        for (int y = 1; y <= n; ++y)
          if (y != x && y != z) check(x, y, z);
    return res;
  }
  Rng rng(seed);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(n))) + 1;
    int y = x;
    while (y == x) y = static_cast<int>(rng.below(static_cast<std::uint64_t>(n))) + 1;
    int z = x;
    while (z == x || z == y) z = static_cast<int>(rng.below(static_cast<std::uint64_t>(n))) + 1;
    check(x, y, z);
  }
  return res;
}

}  // namespace stsd
