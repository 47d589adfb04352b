#pragma once

// Exact triangle decomposition of small graphs by exact-cover backtracking.
//
// The search always branches on an uncovered edge with the fewest completing
// vertices and tries completions in the order given by the value-order mode.
// A search that runs out of nodes reports Exhausted; Infeasible is only
// reported after the whole tree has been explored.

#include <bit>
#include <cstdint>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "stsd/core.hpp"
#include "stsd/gadgets.hpp"
#include "stsd/rng.hpp"

namespace stsd {

inline constexpr int kMaxGraphOrder = 64;

/// Simple graph on [n], n <= 64, one adjacency word per vertex (bit v-1 for vertex v).
class SimpleGraph {
 public:
  SimpleGraph() = default;
  explicit SimpleGraph(int n) : n_(n), adj_(static_cast<std::size_t>(n) + 1, 0) {
    if (n < 0 || n > kMaxGraphOrder) throw InvalidInput("graph order must lie in [0, 64]");
  }

  static SimpleGraph complete(int n) {
    SimpleGraph g(n);
    for (int u = 1; u <= n; ++u)
      for (int v = u + 1; v <= n; ++v) g.add_edge(u, v);
    return g;
  }

  int n() const noexcept { return n_; }

  bool has_edge(int u, int v) const noexcept { return (adj_[static_cast<std::size_t>(u)] >> (v - 1)) & 1u; }

  void add_edge(int u, int v) {
    check_pair(u, v);
    adj_[static_cast<std::size_t>(u)] |= bit(v);
    adj_[static_cast<std::size_t>(v)] |= bit(u);
  }
  void remove_edge(int u, int v) {
    check_pair(u, v);
    adj_[static_cast<std::size_t>(u)] &= ~bit(v);
    adj_[static_cast<std::size_t>(v)] &= ~bit(u);
  }

  std::uint64_t neighbours(int v) const noexcept { return adj_[static_cast<std::size_t>(v)]; }
  int degree(int v) const noexcept { return std::popcount(adj_[static_cast<std::size_t>(v)]); }

  std::uint64_t edge_count() const noexcept {
    std::uint64_t twice = 0;
    for (int v = 1; v <= n_; ++v) twice += static_cast<std::uint64_t>(degree(v));
    return twice / 2;
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 1; u <= n_; ++u)
      for (int v = u + 1; v <= n_; ++v)
        if (has_edge(u, v)) out.emplace_back(u, v);
    return out;
  }

  int min_degree() const noexcept {
    int d = n_;
    for (int v = 1; v <= n_; ++v) d = std::min(d, degree(v));
    return d;
  }

  bool operator==(const SimpleGraph&) const = default;

  static constexpr std::uint64_t bit(int v) noexcept { return std::uint64_t{1} << (v - 1); }

 private:
  void check_pair(int u, int v) const {
    if (u == v || u < 1 || v < 1 || u > n_ || v > n_) throw InvalidInput("invalid edge " + std::to_string(u) + " " + std::to_string(v));
  }

  int n_ = 0;
  std::vector<std::uint64_t> adj_;
};

struct DivisibilityCheck {
  bool divisible = false;
  std::string reason;
};

/// 3 | e(G) and every degree even.
inline DivisibilityCheck is_k3_divisible(const SimpleGraph& g) {
  for (int v = 1; v <= g.n(); ++v)
    if (g.degree(v) % 2 != 0)
      return {false, "vertex " + std::to_string(v) + " has odd degree " + std::to_string(g.degree(v))};
  if (g.edge_count() % 3 != 0)
    return {false, "edge count " + std::to_string(g.edge_count()) + " is not divisible by 3"};
  return {true, ""};
}

/// Union of the 12-pair shadows of the copies, on [n].
inline SimpleGraph shadow(std::span<const K222Copy> copies, int n) {
  SimpleGraph g(n);
  for (const auto& k : copies)
    for (auto [u, v] : k222_shadow(k)) g.add_edge(u, v);
  return g;
}

/// Edges of g not in h.
inline SimpleGraph minus(const SimpleGraph& g, const SimpleGraph& h) {
  if (g.n() != h.n()) throw InvalidInput("graph orders differ");
  SimpleGraph out = g;
  for (auto [u, v] : h.edges())
    if (out.has_edge(u, v)) out.remove_edge(u, v);
  return out;
}

using TriangleDecomposition = std::vector<Triple>;

/// Every triangle uses edges of g and every edge of g is covered exactly once.
inline bool verify_decomposition(const SimpleGraph& g, std::span<const Triple> triangles) {
  SimpleGraph left = g;
  for (const Triple& t : triangles) {
    for (auto [u, v] : {std::pair{t.a, t.b}, std::pair{t.a, t.c}, std::pair{t.b, t.c}}) {
      if (u < 1 || v > g.n() || !left.has_edge(u, v)) return false;
      left.remove_edge(u, v);
    }
  }
  return left.edge_count() == 0;
}

enum class ValueOrder { Ascending, Random, PreferColour };

struct DecomposeOptions {
  std::uint64_t budget = 100'000'000;  // search-tree nodes
  ValueOrder order = ValueOrder::Ascending;
  std::uint64_t seed = 0;              // Random order
  const Colouring* colouring = nullptr;  // PreferColour: completions of this colour first
  int preferred_colour = 1;
  bool shuffle_ties = false;             // PreferColour: random order within each class
};

enum class DecomposeStatus { Success, Exhausted, Infeasible };

inline const char* to_string(DecomposeStatus s) {
  switch (s) {
    case DecomposeStatus::Success: return "success";
    case DecomposeStatus::Exhausted: return "exhausted";
    case DecomposeStatus::Infeasible: return "infeasible";
  }
  return "?";
}

struct DecomposeResult {
  DecomposeStatus status = DecomposeStatus::Infeasible;
  TriangleDecomposition triangles;
  std::uint64_t nodes = 0;
};

namespace detail {

class TriangleSearch {
 public:
  TriangleSearch(const SimpleGraph& g, const DecomposeOptions& opt) : g_(g), opt_(opt), rng_(opt.seed) {}

  DecomposeResult run() {
    DecomposeResult res;
    const bool found = search();
    res.nodes = nodes_;
    if (found) {
      res.status = DecomposeStatus::Success;
      res.triangles = stack_;
    } else {
      res.status = exhausted_ ? DecomposeStatus::Exhausted : DecomposeStatus::Infeasible;
    }
    return res;
  }

 private:
  bool search() {
    if (++nodes_ > opt_.budget) {
      exhausted_ = true;
      return false;
    }
    int best_u = 0, best_v = 0, best_count = 65;
    for (int u = 1; u <= g_.n() && best_count > 0; ++u) {
      std::uint64_t higher = g_.neighbours(u) & ~((SimpleGraph::bit(u) << 1) - 1);
      while (higher) {
        const int v = std::countr_zero(higher) + 1;
        higher &= higher - 1;
        const int c = std::popcount(g_.neighbours(u) & g_.neighbours(v));
        if (c < best_count) {
          best_count = c;
          best_u = u;
          best_v = v;
          if (c == 0) break;
        }
      }
    }
    if (best_u == 0) return true;  // no edges left
    if (best_count == 0) return false;

    std::vector<int> order;
    for (std::uint64_t m = g_.neighbours(best_u) & g_.neighbours(best_v); m; m &= m - 1)
      order.push_back(std::countr_zero(m) + 1);
    if (opt_.order == ValueOrder::Random) {
      rng_.shuffle(std::span<int>(order));
    } else if (opt_.order == ValueOrder::PreferColour && opt_.colouring) {
      if (opt_.shuffle_ties) rng_.shuffle(std::span<int>(order));
      std::stable_partition(order.begin(), order.end(), [&](int w) {
        return opt_.colouring->at(best_u, best_v, w) == opt_.preferred_colour;
      });
    }

    for (int w : order) {
      g_.remove_edge(best_u, best_v);
      g_.remove_edge(best_u, w);
      g_.remove_edge(best_v, w);
      int a = best_u, b = best_v, c = w;
      sort3(a, b, c);
      stack_.push_back({a, b, c});
      if (search()) return true;
      stack_.pop_back();
      g_.add_edge(best_u, best_v);
      g_.add_edge(best_u, w);
      g_.add_edge(best_v, w);
      if (exhausted_) return false;
    }
    return false;
  }

  SimpleGraph g_;
  const DecomposeOptions& opt_;
  Rng rng_;
  std::vector<Triple> stack_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace detail

inline DecomposeResult triangle_decompose(const SimpleGraph& g, const DecomposeOptions& opt = {}) {
  const auto check = is_k3_divisible(g);
  if (!check.divisible) throw InvalidInput("graph is not K3-divisible: " + check.reason);
  if (opt.order == ValueOrder::PreferColour && (!opt.colouring || opt.colouring->n() != g.n()))
    throw InvalidInput("colour-preferring order needs a colouring of the same order");
  return detail::TriangleSearch(g, opt).run();
}

/// Edge list: header "n" then "a b" per line.
inline SimpleGraph read_edge_list(std::istream& in) {
  std::string line;
  if (!detail::next_content_line(in, line)) throw InvalidInput("graph file is empty");
  const auto head = detail::split_ws(line);
  if (head.size() != 1) throw InvalidInput("graph header must be 'n'");
  SimpleGraph g(static_cast<int>(detail::parse_int(head[0], "n")));
  while (detail::next_content_line(in, line)) {
    const auto tok = detail::split_ws(line);
    if (tok.size() != 2) throw InvalidInput("edge lines must be 'a b'");
    const int u = static_cast<int>(detail::parse_int(tok[0], "vertex"));
    const int v = static_cast<int>(detail::parse_int(tok[1], "vertex"));
    if (g.has_edge(u, v)) throw InvalidInput("repeated edge " + tok[0] + " " + tok[1]);
    g.add_edge(u, v);
  }
  return g;
}

/// K222 copies, one per line as "a1 a2 b1 b2 c1 c2".
inline std::vector<K222Copy> read_copies(std::istream& in, int n) {
  std::vector<K222Copy> out;
  std::string line;
  while (detail::next_content_line(in, line)) {
    const auto tok = detail::split_ws(line);
    if (tok.size() != 6) throw InvalidInput("copy lines must hold six vertices");
    std::array<int, 6> v{};
    for (std::size_t i = 0; i < 6; ++i) v[i] = static_cast<int>(detail::parse_int(tok[i], "vertex"));
    out.push_back(make_k222(v[0], v[1], v[2], v[3], v[4], v[5], n));
  }
  return out;
}

}  // namespace stsd
