#pragma once

// Colourings used as experiment inputs: the two-part split construction,
// constant, uniformly random and perturbed colourings, and {0,+1,-1}
// colourings of pairs for the structure routines.

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "stsd/core.hpp"
#include "stsd/rng.hpp"

namespace stsd {

/// Split [n] = X u Y with X = {1..x_size}.
struct SplitSpec {
  int n = 0;
  int x_size = 0;
  int colour_cross = 1;
  int colour_inside = 2;
  int r = 2;  // palette size; lets a split colouring live inside a larger palette

  void validate() const {
    if (n < 0) throw InvalidInput("negative order");
    if (x_size < 0 || x_size > n) throw InvalidInput("x_size must lie in [0, n]");
    if (r < 2) throw InvalidInput("palette needs at least two colours");
    if (colour_cross < 1 || colour_cross > r || colour_inside < 1 || colour_inside > r)
      throw InvalidInput("split colours must lie in [1, r]");
    if (colour_cross == colour_inside) throw InvalidInput("cross and inside colours must differ");
  }
};

/// Triples meeting both X and Y get colour_cross, all others colour_inside.
inline Colouring example1_colouring(const SplitSpec& spec) {
  spec.validate();
  std::vector<std::uint8_t> values(triple_count(spec.n));
  for (std::uint64_t k = 0; k < values.size(); ++k) {
    const Triple t = triple_unrank(k, spec.n);
    const int in_x = (t.a <= spec.x_size) + (t.b <= spec.x_size) + (t.c <= spec.x_size);
    const bool cross = in_x == 1 || in_x == 2;
    values[k] = static_cast<std::uint8_t>(cross ? spec.colour_cross : spec.colour_inside);
  }
  return Colouring(spec.n, spec.r, std::move(values));
}

namespace detail {

constexpr std::uint64_t isqrt(std::uint64_t x) noexcept {
  if (x < 2) return x;
  std::uint64_t lo = 1;
  std::uint64_t hi = std::uint64_t{1} << 32;
  while (lo + 1 < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (mid <= x / mid)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace detail

/// floor((3 + sqrt 3) / 6 * n), exactly: floor((3n + isqrt(3n^2)) / 6).
inline int balanced_split_size(int n) {
  if (n < 0) throw InvalidInput("negative order");
  if (n > 1'000'000'000) throw InvalidInput("order too large for exact split size");
  const auto m = static_cast<std::uint64_t>(n);
  return static_cast<int>((3 * m + detail::isqrt(3 * m * m)) / 6);
}

inline Colouring random_colouring(int n, int r, std::uint64_t seed) {
  if (n < 0) throw InvalidInput("negative order");
  if (r < 2 || r > 255) throw InvalidInput("number of colours must lie in [2, 255]");
  Rng rng(seed);
  std::vector<std::uint8_t> values(triple_count(n));
  for (auto& v : values) v = static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(r)) + 1);
  return Colouring(n, r, std::move(values));
}

/// Recolours exactly flip_count distinct triples, each to a uniformly chosen different colour.
inline Colouring perturb(const Colouring& chi, std::uint64_t flip_count, std::uint64_t seed) {
  const std::uint64_t total = triple_count(chi.n());
  if (flip_count > total)
    throw InvalidInput("cannot flip " + std::to_string(flip_count) + " of " + std::to_string(total) + " triples");
  Rng rng(seed);
  std::vector<std::uint64_t> ranks(total);
  std::iota(ranks.begin(), ranks.end(), std::uint64_t{0});
  std::vector<std::uint8_t> values(chi.values().begin(), chi.values().end());
  // Partial Fisher-Yates from the front.
  for (std::uint64_t i = 0; i < flip_count; ++i) {
    const std::uint64_t j = i + rng.below(total - i);
    std::swap(ranks[i], ranks[j]);
    auto& v = values[ranks[i]];
    const auto shift = rng.below(static_cast<std::uint64_t>(chi.r() - 1)) + 1;
    v = static_cast<std::uint8_t>((v - 1 + shift) % static_cast<std::uint64_t>(chi.r()) + 1);
  }
  return Colouring(chi.n(), chi.r(), std::move(values));
}

/// Applies a vertex relabelling: the result gives {perm(a),perm(b),perm(c)} the colour of {a,b,c}.
/// perm has size n and perm[v - 1] is the image of vertex v.
inline Colouring relabel(const Colouring& chi, std::span<const int> perm) {
  const int n = chi.n();
  if (perm.size() != static_cast<std::size_t>(n)) throw InvalidInput("permutation has wrong length");
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (int img : perm) {
    if (img < 1 || img > n || seen[static_cast<std::size_t>(img)]) throw InvalidInput("not a permutation of [n]");
    seen[static_cast<std::size_t>(img)] = true;
  }
  std::vector<std::uint8_t> values(triple_count(n));
  for (std::uint64_t k = 0; k < values.size(); ++k) {
    const Triple t = triple_unrank(k, n);
    const Triple image = make_triple(perm[t.a - 1], perm[t.b - 1], perm[t.c - 1], n);
    values[detail::colex_rank(image.a, image.b, image.c)] = static_cast<std::uint8_t>(chi.at_rank(k));
  }
  return Colouring(n, chi.r(), std::move(values));
}

/// A {0,+1,-1} colouring of the pairs of [n].
class EdgeColouringZPM {
 public:
  EdgeColouringZPM() = default;
  explicit EdgeColouringZPM(int n, int fill = 0) : n_(n), values_(pair_count(n), static_cast<std::int8_t>(fill)) {
    if (n < 0) throw InvalidInput("negative order");
    check_value(fill);
  }

  int n() const noexcept { return n_; }

  int operator()(int u, int v) const noexcept {
    if (u > v) std::swap(u, v);
    return values_[detail::pair_rank(u, v)];
  }

  void set(int u, int v, int value) {
    if (u == v || u < 1 || v < 1 || u > n_ || v > n_) throw InvalidInput("invalid pair");
    check_value(value);
    if (u > v) std::swap(u, v);
    values_[detail::pair_rank(u, v)] = static_cast<std::int8_t>(value);
  }

  bool operator==(const EdgeColouringZPM&) const = default;

 private:
  static void check_value(int value) {
    if (value < -1 || value > 1) throw InvalidInput("pair colour must be 0, +1 or -1");
  }

  int n_ = 0;
  std::vector<std::int8_t> values_;
};

/// +1 inside A = {1..a_size}, -1 inside B, 0 across.
inline EdgeColouringZPM structured_zpm(int n, int a_size) {
  if (a_size < 0 || a_size > n) throw InvalidInput("a_size must lie in [0, n]");
  EdgeColouringZPM f(n);
  for (int v = 2; v <= n; ++v)
    for (int u = 1; u < v; ++u) {
      const bool ua = u <= a_size;
      const bool va = v <= a_size;
      f.set(u, v, ua && va ? 1 : (!ua && !va ? -1 : 0));
    }
  return f;
}

inline EdgeColouringZPM random_zpm(int n, std::uint64_t seed) {
  Rng rng(seed);
  EdgeColouringZPM f(n);
  for (int v = 2; v <= n; ++v)
    for (int u = 1; u < v; ++u) f.set(u, v, static_cast<int>(rng.below(3)) - 1);
  return f;
}

}  // namespace stsd
