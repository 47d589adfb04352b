#pragma once

// Steiner triple systems: validation, direct construction, random
// relabelling, and the exhaustive enumeration oracle for n <= 9.

#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stsd/core.hpp"
#include "stsd/rng.hpp"

namespace stsd {

inline bool sts_order_admissible(int n) noexcept { return n >= 0 && (n % 6 == 1 || n % 6 == 3); }

struct StsCheck {
  bool valid = false;
  std::optional<std::pair<int, int>> pair;  // first offending pair in lexicographic order
  int coverage = 0;                         // how often that pair is covered (0 or >= 2)
};

inline StsCheck validate_sts(const TripleSystem& s) {
  const int n = s.n();
  std::vector<int> cover(pair_count(n), 0);
  for (const Triple& t : s.triples()) {
    ++cover[detail::pair_rank(t.a, t.b)];
    ++cover[detail::pair_rank(t.a, t.c)];
    ++cover[detail::pair_rank(t.b, t.c)];
  }
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) {
      const int c = cover[detail::pair_rank(u, v)];
      if (c != 1) return {false, std::pair{u, v}, c};
    }
  return {true, std::nullopt, 1};
}

inline bool is_sts(const TripleSystem& s) { return validate_sts(s).valid; }

/// Direct construction: Bose for n = 3 (mod 6), Skolem for n = 1 (mod 6).
inline TripleSystem construct_sts(int n) {
  if (n < 3 || !sts_order_admissible(n))
    throw InvalidInput("no Steiner triple system of order " + std::to_string(n) + ": need n = 1 or 3 (mod 6), n >= 3 (n mod 6 = " +
                       std::to_string(((n % 6) + 6) % 6) + ")");
  std::vector<Triple> triples;
  triples.reserve(pair_count(n) / 3);
  auto add = [&](int x, int y, int z) { triples.push_back(make_triple(x, y, z, n)); };

  if (n % 6 == 3) {
    // Idempotent commutative quasigroup x.y = (x + y) / 2 on Z_v, v = 2t + 1.
    const int t = (n - 3) / 6;
    const int v = 2 * t + 1;
    auto op = [&](int x, int y) { return ((x + y) * (t + 1)) % v; };
    auto label = [&](int x, int level) { return x + level * v + 1; };
    for (int x = 0; x < v; ++x) add(label(x, 0), label(x, 1), label(x, 2));
    for (int level = 0; level < 3; ++level)
      for (int x = 0; x < v; ++x)
        for (int y = x + 1; y < v; ++y) add(label(x, level), label(y, level), label(op(x, y), (level + 1) % 3));
  } else {
    // Half-idempotent commutative quasigroup on Z_2t plus a point at infinity.
    const int t = (n - 1) / 6;
    const int m = 2 * t;
    auto op = [&](int x, int y) {
      const int s = (x + y) % m;
      return s % 2 == 0 ? s / 2 : t + (s - 1) / 2;
    };
    auto label = [&](int x, int level) { return x + level * m + 1; };
    const int infinity = n;
    for (int x = 0; x < t; ++x) add(label(x, 0), label(x, 1), label(x, 2));
    for (int x = 0; x < t; ++x)
      for (int level = 0; level < 3; ++level) add(infinity, label(x + t, level), label(x, (level + 1) % 3));
    for (int level = 0; level < 3; ++level)
      for (int x = 0; x < m; ++x)
        for (int y = x + 1; y < m; ++y) add(label(x, level), label(y, level), label(op(x, y), (level + 1) % 3));
  }
  return TripleSystem(n, std::move(triples)).sorted();
}

/// Image of s under the relabelling v -> perm[v - 1], triples sorted.
inline TripleSystem apply_permutation(const TripleSystem& s, std::span<const int> perm) {
  const int n = s.n();
  if (perm.size() != static_cast<std::size_t>(n)) throw InvalidInput("permutation has wrong length");
  std::vector<Triple> out;
  out.reserve(s.size());
  for (const Triple& t : s.triples()) out.push_back(make_triple(perm[t.a - 1], perm[t.b - 1], perm[t.c - 1], n));
  return TripleSystem(n, std::move(out)).sorted();
}

inline std::vector<int> random_permutation(int n, std::uint64_t seed) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  Rng rng(seed);
  rng.shuffle(std::span<int>(perm));
  return perm;
}

/// Uniformly random relabelling of the points of s.
inline TripleSystem random_embedding(const TripleSystem& s, std::uint64_t seed) {
  return apply_permutation(s, random_permutation(s.n(), seed));
}

inline constexpr int kMaxEnumerationOrder = 9;

/// Calls visit(system) for every labelled STS of order n in canonical order:
/// branch on the lexicographically first uncovered pair, try third points
/// ascending. Returns the number of systems visited.
inline std::uint64_t enumerate_all_sts(int n, const std::function<void(const TripleSystem&)>& visit) {
  if (n != 3 && n != 7 && n != 9)
    throw InvalidInput("exhaustive enumeration supports n in {3, 7, 9} only, got " + std::to_string(n));
  std::vector<std::uint32_t> covered(static_cast<std::size_t>(n) + 1, 0);  // bit w of covered[v]: pair vw used
  std::vector<Triple> current;
  std::uint64_t count = 0;

  auto first_uncovered = [&]() -> std::pair<int, int> {
    for (int u = 1; u <= n; ++u) {
      const std::uint32_t missing = ~covered[static_cast<std::size_t>(u)] & (((std::uint32_t{1} << (n + 1)) - 1) & ~1u);
      std::uint32_t mask = missing & ~((std::uint32_t{2} << u) - 1);  // v > u
      if (mask) return {u, std::countr_zero(mask)};
    }
    return {0, 0};
  };
  auto toggle = [&](int a, int b, int c) {
    covered[a] ^= (1u << b) | (1u << c);
    covered[b] ^= (1u << a) | (1u << c);
    covered[c] ^= (1u << a) | (1u << b);
  };

  std::function<void()> search = [&]() {
    const auto [u, v] = first_uncovered();
    if (u == 0) {
      ++count;
      if (visit) visit(TripleSystem(n, current));
      return;
    }
    for (int w = 1; w <= n; ++w) {
      if (w == u || w == v) continue;
      if ((covered[u] >> w & 1u) || (covered[v] >> w & 1u)) continue;
      toggle(u, v, w);
      current.push_back(make_triple(u, v, w, n));
      search();
      current.pop_back();
      toggle(u, v, w);
    }
  };
  search();
  return count;
}

inline std::uint64_t count_all_sts(int n) { return enumerate_all_sts(n, {}); }

struct DiscrepancyRange {
  Rational min;
  Rational max;
  std::uint64_t systems = 0;
};

/// Exact extremes of discrepancy(s, chi) over every labelled STS s of order chi.n().
inline DiscrepancyRange min_max_discrepancy_oracle(const Colouring& chi) {
  if (chi.n() != 7 && chi.n() != 9)
    throw InvalidInput("discrepancy oracle supports n in {7, 9} only, got " + std::to_string(chi.n()));
  DiscrepancyRange range;
  enumerate_all_sts(chi.n(), [&](const TripleSystem& s) {
    const Rational d = discrepancy(s, chi);
    if (range.systems == 0 || d < range.min) range.min = d;
    if (range.systems == 0 || d > range.max) range.max = d;
    ++range.systems;
  });
  return range;
}

}  // namespace stsd
