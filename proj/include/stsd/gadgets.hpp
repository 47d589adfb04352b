#pragma once

/**
 * @file gadgets.hpp
 * @brief Copies of K_{2,2,2}^{(3)}, their decomposition into two Pasch
 *        configurations, and gadget detection and counting.
 *
 * A copy with parts {a1,a2}, {b1,b2}, {c1,c2} has eight edges (one vertex
 * from each part). They split into
 *
 *     p1 = {a1b1c1, a1b2c2, a2b1c2, a2b2c1}
 *     p2 = {a1b1c2, a1b2c1, a2b1c1, a2b2c2}
 *
 * which share the 12-pair shadow K_{2,2,2}. A coloured copy is a gadget
 * when p1 and p2 have different colour profiles.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <unordered_set>
#include <vector>

#include "stsd/core.hpp"
#include "stsd/rng.hpp"

namespace stsd {

struct K222Copy {
  std::array<std::array<int, 2>, 3> parts{};  // each pair sorted, pairs sorted by minimum

  auto operator<=>(const K222Copy&) const = default;

  std::array<int, 6> vertices() const noexcept {
    return {parts[0][0], parts[0][1], parts[1][0], parts[1][1], parts[2][0], parts[2][1]};
  }
  bool contains(int v) const noexcept {
    for (const auto& p : parts)
      if (p[0] == v || p[1] == v) return true;
    return false;
  }

  /// Packs the six vertices (each < 1024) into one integer; injective on canonical copies.
  std::uint64_t key() const noexcept {
    std::uint64_t k = 0;
    for (int v : vertices()) k = (k << 10) | static_cast<std::uint64_t>(v);
    return k;
  }
};

/// Canonicalizes three disjoint pairs of [n] into a K222Copy.
inline K222Copy make_k222(int a1, int a2, int b1, int b2, int c1, int c2, int n) {
  std::array<std::array<int, 2>, 3> parts{{{a1, a2}, {b1, b2}, {c1, c2}}};
  std::array<int, 6> all{};
  std::size_t i = 0;
  for (auto& p : parts) {
    if (p[0] > p[1]) std::swap(p[0], p[1]);
    for (int v : p) {
      if (v < 1 || v > n) throw InvalidInput("K222 vertex out of range [1, " + std::to_string(n) + "]");
      all[i++] = v;
    }
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw InvalidInput("K222 parts must be three disjoint pairs of distinct vertices");
  std::sort(parts.begin(), parts.end());
  return K222Copy{parts};
}

inline std::string to_string(const K222Copy& k) {
  std::string s;
  for (int v : k.vertices()) s += (s.empty() ? "" : " ") + std::to_string(v);
  return s;
}

struct PaschPair {
  std::array<Triple, 4> p1{};
  std::array<Triple, 4> p2{};
};

inline PaschPair pasch_pair(const K222Copy& k) {
  const auto [a1, a2] = k.parts[0];
  const auto [b1, b2] = k.parts[1];
  const auto [c1, c2] = k.parts[2];
  if (a1 == a2 || b1 == b2 || c1 == c2) throw InvalidInput("degenerate K222 part");
  auto tri = [](int x, int y, int z) {
    detail::sort3(x, y, z);
    return Triple{x, y, z};
  };
  PaschPair p;
  p.p1 = {tri(a1, b1, c1), tri(a1, b2, c2), tri(a2, b1, c2), tri(a2, b2, c1)};
  p.p2 = {tri(a1, b1, c2), tri(a1, b2, c1), tri(a2, b1, c1), tri(a2, b2, c2)};
  return p;
}

/// The 12 pairs {u < v} joining different parts.
inline std::array<std::pair<int, int>, 12> k222_shadow(const K222Copy& k) {
  std::array<std::pair<int, int>, 12> out{};
  std::size_t i = 0;
  for (int p = 0; p < 3; ++p)
    for (int q = p + 1; q < 3; ++q)
      for (int u : k.parts[static_cast<std::size_t>(p)])
        for (int v : k.parts[static_cast<std::size_t>(q)]) out[i++] = {std::min(u, v), std::max(u, v)};
  std::sort(out.begin(), out.end());
  return out;
}

struct GadgetRecord {
  K222Copy copy;
  ColourProfile profile1;  // colour counts of p1
  ColourProfile profile2;  // colour counts of p2
  std::vector<int> witness_colours;  // every colour whose counts differ

  /// max(a_c, b_c): the best a Pasch choice can do for colour c.
  std::uint64_t best_for(int colour) const { return std::max(profile1[colour], profile2[colour]); }
};

inline std::optional<GadgetRecord> is_gadget(const Colouring& chi, const K222Copy& k) {
  for (int v : k.vertices())
    if (v > chi.n()) throw InvalidInput("K222 copy does not fit the colouring's order");
  const PaschPair pp = pasch_pair(k);
  GadgetRecord rec{k, profile_of(pp.p1, chi), profile_of(pp.p2, chi), {}};
  for (int c = 1; c <= chi.r(); ++c)
    if (rec.profile1[c] != rec.profile2[c]) rec.witness_colours.push_back(c);
  if (rec.witness_colours.empty()) return std::nullopt;
  return rec;
}

namespace detail {

// Whether the two Pasch configurations of the copy have different profiles,
// without building the record.
inline bool gadget_fast(const Colouring& chi, int a1, int a2, int b1, int b2, int c1, int c2) noexcept {
  std::array<int, 4> x{chi.at(a1, b1, c1), chi.at(a1, b2, c2), chi.at(a2, b1, c2), chi.at(a2, b2, c1)};
  std::array<int, 4> y{chi.at(a1, b1, c2), chi.at(a1, b2, c1), chi.at(a2, b1, c1), chi.at(a2, b2, c2)};
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x != y;
}

// Visits every canonical copy whose smallest vertex is a1.
template <class Fn>
void for_each_k222_from(int n, int a1, Fn&& fn) {
  for (int a2 = a1 + 1; a2 <= n; ++a2)
    for (int b1 = a1 + 1; b1 <= n; ++b1) {
      if (b1 == a2) continue;
      for (int b2 = b1 + 1; b2 <= n; ++b2) {
        if (b2 == a2) continue;
        for (int c1 = b1 + 1; c1 <= n; ++c1) {
          if (c1 == a2 || c1 == b2) continue;
          for (int c2 = c1 + 1; c2 <= n; ++c2) {
            if (c2 == a2 || c2 == b2) continue;
            fn(a1, a2, b1, b2, c1, c2);
          }
        }
      }
    }
}

}  // namespace detail

/// Visits every K222 copy on [n] exactly once, in canonical form.
template <class Fn>
void for_each_k222(int n, Fn&& fn) {
  for (int a1 = 1; a1 <= n; ++a1)
    detail::for_each_k222_from(n, a1, [&](int a1_, int a2, int b1, int b2, int c1, int c2) {
      fn(K222Copy{{{{a1_, a2}, {b1, b2}, {c1, c2}}}});
    });
}

/// C(n,6) * 15: six vertices and one of 15 perfect matchings.
constexpr std::uint64_t k222_copy_count(int n) noexcept {
  return n < 6 ? 0 : binom(static_cast<std::uint64_t>(n), 6) * 15;
}

inline constexpr int kDefaultExactCap = 21;

/// Number of gadget copies. Parallel over the smallest vertex; result is independent of workers.
inline std::uint64_t count_gadgets_exact(const Colouring& chi, int cap = kDefaultExactCap, int workers = 1) {
  const int n = chi.n();
  if (n > cap)
    throw InvalidInput("exact gadget count capped at n = " + std::to_string(cap) + ", got n = " +
                       std::to_string(n) + "; use sampling");
  workers = std::max(1, workers);
  std::vector<std::uint64_t> partial(static_cast<std::size_t>(workers), 0);
  auto work = [&](int w) {
    std::uint64_t local = 0;
    for (int a1 = 1 + w; a1 <= n; a1 += workers)
      detail::for_each_k222_from(n, a1, [&](int x1, int x2, int y1, int y2, int z1, int z2) {
        local += detail::gadget_fast(chi, x1, x2, y1, y2, z1, z2);
      });
    partial[static_cast<std::size_t>(w)] = local;
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  std::uint64_t total = 0;
  for (auto v : partial) total += v;
  return total;
}

/// Every gadget record in canonical enumeration order. Small n only.
inline std::vector<GadgetRecord> enumerate_gadgets(const Colouring& chi, int cap = kDefaultExactCap) {
  if (chi.n() > cap) throw InvalidInput("gadget enumeration capped at n = " + std::to_string(cap));
  std::vector<GadgetRecord> out;
  for_each_k222(chi.n(), [&](const K222Copy& k) {
    if (auto rec = is_gadget(chi, k)) out.push_back(std::move(*rec));
  });
  return out;
}

/// A uniformly random copy: a random ordered 6-tuple of distinct vertices, paired consecutively.
inline K222Copy random_k222(int n, Rng& rng) {
  if (n < 6) throw InvalidInput("K222 needs at least 6 vertices");
  std::array<int, 6> pick{};
  // Distinct draws by rejection.
  for (std::size_t i = 0; i < 6; ++i) {
    int v = 0;
    do {
      v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n))) + 1;
    } while (std::find(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(i), v) !=
             pick.begin() + static_cast<std::ptrdiff_t>(i));
    pick[i] = v;
  }
  return make_k222(pick[0], pick[1], pick[2], pick[3], pick[4], pick[5], n);
}

struct DensityEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
};

inline constexpr std::uint64_t kSamplingChunks = 64;

/// Fraction of random copies that are gadgets. Samples are split into a fixed
/// number of chunks with derived seeds, so the result does not depend on workers.
inline DensityEstimate estimate_gadget_density(const Colouring& chi, std::uint64_t samples, std::uint64_t seed,
                                               int workers = 1) {
  if (samples < 1) throw InvalidInput("need at least one sample");
  if (chi.n() < 6) return {0.0, 0.0, samples, 0};
  workers = std::max(1, workers);
  std::vector<std::uint64_t> hits(kSamplingChunks, 0);
  auto chunk_size = [&](std::uint64_t c) {
    return samples / kSamplingChunks + (c < samples % kSamplingChunks ? 1 : 0);
  };
  auto work = [&](int w) {
    for (std::uint64_t c = static_cast<std::uint64_t>(w); c < kSamplingChunks; c += static_cast<std::uint64_t>(workers)) {
      Rng rng(derive_seed(seed, c));
      std::uint64_t local = 0;
      for (std::uint64_t i = 0, m = chunk_size(c); i < m; ++i) {
        const K222Copy k = random_k222(chi.n(), rng);
        const auto& p = k.parts;
        local += detail::gadget_fast(chi, p[0][0], p[0][1], p[1][0], p[1][1], p[2][0], p[2][1]);
      }
      hits[c] = local;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  const double p = static_cast<double>(total) / static_cast<double>(samples);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples)), samples, total};
}

/// Up to max_count distinct gadgets found by at most `budget` random probes.
inline std::vector<GadgetRecord> collect_gadgets(const Colouring& chi, std::size_t max_count, std::uint64_t budget,
                                                 std::uint64_t seed) {
  if (budget < max_count) throw InvalidInput("probe budget must be at least max_count");
  std::vector<GadgetRecord> out;
  if (max_count == 0 || chi.n() < 6) return out;
  Rng rng(seed);
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t probe = 0; probe < budget && out.size() < max_count; ++probe) {
    const K222Copy k = random_k222(chi.n(), rng);
    if (!seen.insert(k.key()).second) continue;
    if (auto rec = is_gadget(chi, k)) out.push_back(std::move(*rec));
  }
  return out;
}

}  // namespace stsd
