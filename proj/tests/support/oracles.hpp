#pragma once

// Brute-force reference implementations used only by the tests. None of them
// calls into the routine it is meant to check.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "stsd/core.hpp"
#include "stsd/generators.hpp"
#include "stsd/gadgets.hpp"

namespace oracle {

using Tri = std::array<int, 3>;

inline std::vector<Tri> all_triples(int n) {
  std::vector<Tri> out;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int c = b + 1; c <= n; ++c) out.push_back({a, b, c});
  return out;
}

inline Tri sorted(int x, int y, int z) {
  Tri t{x, y, z};
  std::sort(t.begin(), t.end());
  return t;
}

// Colour lookup keyed by sorted triple. The colouring's value array is walked
// in colex order (largest vertex outermost) without the library's rank formula.
class ColourTable {
 public:
  explicit ColourTable(const stsd::Colouring& chi) : n_(chi.n()) {
    std::size_t k = 0;
    for (int c = 3; c <= n_; ++c)
      for (int b = 2; b < c; ++b)
        for (int a = 1; a < b; ++a) map_[Tri{a, b, c}] = chi.values()[k++];
  }
  int operator()(int x, int y, int z) const { return map_.at(sorted(x, y, z)); }

 private:
  int n_;
  std::map<Tri, int> map_;
};

inline bool covers_pairs_once(int n, const std::vector<Tri>& triples) {
  std::vector<std::vector<int>> cov(static_cast<std::size_t>(n) + 1, std::vector<int>(static_cast<std::size_t>(n) + 1, 0));
  for (const Tri& t : triples) {
    ++cov[t[0]][t[1]];
    ++cov[t[0]][t[2]];
    ++cov[t[1]][t[2]];
  }
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      if (cov[u][v] != 1) return false;
  return true;
}

// Counts labelled STS(7) by testing every 7-subset of the 35 triples.
inline std::uint64_t naive_sts7_count() {
  const auto tri = all_triples(7);
  std::vector<std::uint32_t> mask(tri.size());
  auto bit = [](int u, int v) {
    int k = 0;
    for (int a = 1; a <= 7; ++a)
      for (int b = a + 1; b <= 7; ++b, ++k)
        if (a == u && b == v) return std::uint32_t{1} << k;
    return std::uint32_t{0};
  };
  for (std::size_t i = 0; i < tri.size(); ++i)
    mask[i] = bit(tri[i][0], tri[i][1]) | bit(tri[i][0], tri[i][2]) | bit(tri[i][1], tri[i][2]);
  std::uint64_t count = 0;
  std::array<std::size_t, 7> idx{};
  for (std::size_t i = 0; i < 7; ++i) idx[i] = i;
  const std::size_t m = tri.size();
  while (true) {
    std::uint32_t acc = 0;
    bool ok = true;
    for (std::size_t i = 0; i < 7 && ok; ++i) {
      if (acc & mask[idx[i]]) ok = false;
      acc |= mask[idx[i]];
    }
    if (ok && acc == (std::uint32_t{1} << 21) - 1) ++count;
    int i = 6;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - 7 + static_cast<std::size_t>(i)) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < 7; ++j) idx[j] = idx[j - 1] + 1;
  }
  return count;
}

// All distinct relabellings of a triple list, as sorted triple lists.
inline std::set<std::vector<Tri>> relabelling_orbit(int n, const std::vector<Tri>& base) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  std::set<std::vector<Tri>> orbit;
  do {
    std::vector<Tri> img;
    for (const Tri& t : base) img.push_back(sorted(perm[t[0] - 1], perm[t[1] - 1], perm[t[2] - 1]));
    std::sort(img.begin(), img.end());
    orbit.insert(std::move(img));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return orbit;
}

// Pasch configuration test straight from the definition: four triples on six
// points, every point in exactly two triples, every two triples sharing exactly one point.
inline bool is_pasch(const std::vector<Tri>& q) {
  if (q.size() != 4) return false;
  std::map<int, int> deg;
  for (const Tri& t : q)
    for (int v : t) ++deg[v];
  if (deg.size() != 6) return false;
  for (auto [v, d] : deg)
    if (d != 2) return false;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      int common = 0;
      for (int u : q[i])
        for (int w : q[j]) common += u == w;
      if (common != 1) return false;
    }
  return true;
}

inline std::set<std::pair<int, int>> shadow_of(const std::vector<Tri>& q) {
  std::set<std::pair<int, int>> s;
  for (const Tri& t : q) {
    s.insert({t[0], t[1]});
    s.insert({t[0], t[2]});
    s.insert({t[1], t[2]});
  }
  return s;
}

// The eight triples of K_{2,2,2} with parts {a1,a2},{b1,b2},{c1,c2}.
inline std::vector<Tri> k222_edges(const std::array<std::array<int, 2>, 3>& parts) {
  std::vector<Tri> out;
  for (int a : parts[0])
    for (int b : parts[1])
      for (int c : parts[2]) out.push_back(sorted(a, b, c));
  std::sort(out.begin(), out.end());
  return out;
}

// Every unordered split of the eight edges into two Pasch configurations.
inline std::vector<std::pair<std::vector<Tri>, std::vector<Tri>>> pasch_splits(const std::vector<Tri>& edges) {
  std::vector<std::pair<std::vector<Tri>, std::vector<Tri>>> out;
  for (unsigned m = 0; m < 256; ++m) {
    if (__builtin_popcount(m) != 4 || !(m & 1u)) continue;  // edge 0 on the first side: 35 splits
    std::vector<Tri> a, b;
    for (unsigned i = 0; i < 8; ++i) (m >> i & 1u ? a : b).push_back(edges[i]);
    if (is_pasch(a) && is_pasch(b)) out.emplace_back(a, b);
  }
  return out;
}

// All 15 ways to split six sorted vertices into three unordered pairs.
inline std::vector<std::array<std::array<int, 2>, 3>> pairings(const std::array<int, 6>& v) {
  std::vector<std::array<std::array<int, 2>, 3>> out;
  for (int i = 1; i < 6; ++i) {
    std::vector<int> rest;
    for (int j = 1; j < 6; ++j)
      if (j != i) rest.push_back(v[static_cast<std::size_t>(j)]);
    for (int k = 1; k < 4; ++k) {
      std::vector<int> last;
      for (int j = 1; j < 4; ++j)
        if (j != k) last.push_back(rest[static_cast<std::size_t>(j)]);
      out.push_back({{{v[0], v[static_cast<std::size_t>(i)]}, {rest[0], rest[static_cast<std::size_t>(k)]}, {last[0], last[1]}}});
    }
  }
  return out;
}

template <class Fn>
void for_each_six_subset(int n, Fn&& fn) {
  std::array<int, 6> v{};
  for (v[0] = 1; v[0] <= n; ++v[0])
    for (v[1] = v[0] + 1; v[1] <= n; ++v[1])
      for (v[2] = v[1] + 1; v[2] <= n; ++v[2])
        for (v[3] = v[2] + 1; v[3] <= n; ++v[3])
          for (v[4] = v[3] + 1; v[4] <= n; ++v[4])
            for (v[5] = v[4] + 1; v[5] <= n; ++v[5]) fn(v);
}

inline std::vector<int> profile(const std::vector<Tri>& q, const ColourTable& col, int r) {
  std::vector<int> p(static_cast<std::size_t>(r), 0);
  for (const Tri& t : q) ++p[static_cast<std::size_t>(col(t[0], t[1], t[2]) - 1)];
  return p;
}

// Gadget test from the definition: the unique Pasch split of the copy has
// halves with different colour profiles.
inline bool gadget_by_definition(const std::array<std::array<int, 2>, 3>& parts, const ColourTable& col, int r) {
  const auto splits = pasch_splits(k222_edges(parts));
  if (splits.size() != 1) throw std::logic_error("K222 copy without a unique Pasch split");
  return profile(splits[0].first, col, r) != profile(splits[0].second, col, r);
}

inline std::uint64_t brute_gadget_count(const stsd::Colouring& chi) {
  const ColourTable col(chi);
  std::uint64_t count = 0;
  for_each_six_subset(chi.n(), [&](const std::array<int, 6>& v) {
    for (const auto& parts : pairings(v)) count += gadget_by_definition(parts, col, chi.r());
  });
  return count;
}

// Exhaustive unbalanced-C4 reference over ordered 4-tuples of distinct vertices.
template <class F>
std::optional<std::array<int, 4>> brute_unbalanced_c4(const std::vector<int>& dom, const F& f) {
  for (int a : dom)
    for (int b : dom)
      for (int c : dom)
        for (int d : dom) {
          if (a == b || a == c || a == d || b == c || b == d || c == d) continue;
          if (f(a, b) + f(c, d) != f(b, c) + f(a, d)) return std::array<int, 4>{a, b, c, d};
        }
  return std::nullopt;
}

// Triples meeting both parts, counted directly.
inline std::uint64_t cross_count(const std::vector<Tri>& triples, int x_size) {
  std::uint64_t c = 0;
  for (const Tri& t : triples) {
    const int in_x = (t[0] <= x_size) + (t[1] <= x_size) + (t[2] <= x_size);
    c += in_x == 1 || in_x == 2;
  }
  return c;
}

// Pairwise shadow-disjointness and vertex-load check for a list of copies.
inline bool selection_ok(const std::vector<stsd::K222Copy>& copies, int n, int cap) {
  std::set<std::pair<int, int>> used;
  std::vector<int> load(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& k : copies) {
    const auto edges = k222_edges(k.parts);
    for (const auto& e : shadow_of(edges))
      if (!used.insert(e).second) return false;
    for (const auto& p : k.parts)
      for (int v : p)
        if (++load[static_cast<std::size_t>(v)] > cap) return false;
  }
  return true;
}

// Mismatch of chi against the split pattern for the vertex set X, computed
// over a lexicographic triple listing.
inline std::uint64_t split_mismatch(const stsd::Colouring& chi, const std::vector<int>& x, int inside, int cross) {
  std::set<int> xs(x.begin(), x.end());
  const ColourTable col(chi);
  std::uint64_t m = 0;
  for (const Tri& t : all_triples(chi.n())) {
    const int in_x = static_cast<int>(xs.count(t[0]) + xs.count(t[1]) + xs.count(t[2]));
    const int ideal = (in_x == 1 || in_x == 2) ? cross : inside;
    m += col(t[0], t[1], t[2]) != ideal;
  }
  return m;
}

// Whether the edge set splits into edge-disjoint triangles, by exact-cover
// search over an adjacency matrix: always branch on an uncovered edge with the
// fewest triangles still available through it.
inline bool triangle_decomposable(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(n) + 1, std::vector<char>(static_cast<std::size_t>(n) + 1, 0));
  for (auto [u, v] : edges) adj[u][v] = adj[v][u] = 1;
  std::function<bool(std::size_t)> search = [&](std::size_t left) -> bool {
    if (left == 0) return true;
    int bu = 0, bv = 0, best = n + 1;
    for (int u = 1; u <= n && best > 0; ++u)
      for (int v = u + 1; v <= n && best > 0; ++v) {
        if (!adj[u][v]) continue;
        int options = 0;
        for (int w = 1; w <= n; ++w) options += adj[u][w] && adj[v][w];
        if (options < best) {
          best = options;
          bu = u;
          bv = v;
        }
      }
    if (best == 0) return false;
    for (int w = 1; w <= n; ++w) {
      if (!(adj[bu][w] && adj[bv][w])) continue;
      adj[bu][bv] = adj[bv][bu] = adj[bu][w] = adj[w][bu] = adj[bv][w] = adj[w][bv] = 0;
      const bool done = search(left - 3);
      adj[bu][bv] = adj[bv][bu] = adj[bu][w] = adj[w][bu] = adj[bv][w] = adj[w][bv] = 1;
      if (done) return true;
    }
    return false;
  };
  return edges.size() % 3 == 0 && search(edges.size());
}

}  // namespace oracle
