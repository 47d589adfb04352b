#pragma once

/**
 * @file core.hpp
 * @brief Triples of [n], colex ranking, colourings, triple systems and the
 *        discrepancy functional.
 *
 * Vertices are 1-based (ground set [n]) and colour ids are 1-based
 * (palette [r]) at every interface.
 */

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stsd {

/// Raised on any malformed or out-of-contract input.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

constexpr std::uint64_t binom(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

constexpr std::uint64_t triple_count(int n) noexcept {
  return n < 3 ? 0 : binom(static_cast<std::uint64_t>(n), 3);
}
constexpr std::uint64_t pair_count(int n) noexcept {
  return n < 2 ? 0 : binom(static_cast<std::uint64_t>(n), 2);
}

struct Triple {
  int a = 0;
  int b = 0;
  int c = 0;

  constexpr auto operator<=>(const Triple&) const = default;

  constexpr bool contains(int v) const noexcept { return v == a || v == b || v == c; }
  constexpr std::array<int, 3> vertices() const noexcept { return {a, b, c}; }
};

/// Sorts and validates three vertices of [n].
inline Triple make_triple(int x, int y, int z, int n) {
  std::array<int, 3> v{x, y, z};
  std::sort(v.begin(), v.end());
  if (v[0] < 1 || v[2] > n)
    throw InvalidInput("vertex out of range [1, " + std::to_string(n) + "]");
  if (v[0] == v[1] || v[1] == v[2]) throw InvalidInput("triple has repeated vertices");
  return {v[0], v[1], v[2]};
}

inline std::string to_string(const Triple& t) {
  return std::to_string(t.a) + " " + std::to_string(t.b) + " " + std::to_string(t.c);
}

namespace detail {

// Colex rank of a sorted triple of 1-based vertices, no checks.
constexpr std::uint64_t colex_rank(int a, int b, int c) noexcept {
  const auto a0 = static_cast<std::uint64_t>(a - 1);
  const auto b0 = static_cast<std::uint64_t>(b - 1);
  const auto c0 = static_cast<std::uint64_t>(c - 1);
  return a0 + b0 * (b0 - 1) / 2 + c0 * (c0 - 1) * (c0 - 2) / 6;
}

// Colex rank of the pair {u < v}.
constexpr std::uint64_t pair_rank(int u, int v) noexcept {
  const auto u0 = static_cast<std::uint64_t>(u - 1);
  const auto v0 = static_cast<std::uint64_t>(v - 1);
  return u0 + v0 * (v0 - 1) / 2;
}

constexpr void sort3(int& x, int& y, int& z) noexcept {
  if (x > y) std::swap(x, y);
  if (y > z) std::swap(y, z);
  if (x > y) std::swap(x, y);
}

}  // namespace detail

/// Colex rank in [0, C(n,3)). {1,2,3} -> 0, {1,2,4} -> 1.
inline std::uint64_t triple_rank(const Triple& t, int n) {
  if (t.a < 1 || t.c > n || !(t.a < t.b && t.b < t.c))
    throw InvalidInput("triple " + to_string(t) + " is not a sorted triple of [" +
                       std::to_string(n) + "]");
  return detail::colex_rank(t.a, t.b, t.c);
}

inline Triple triple_unrank(std::uint64_t k, int n) {
  if (n < 3 || k >= triple_count(n))
    throw InvalidInput("rank " + std::to_string(k) + " out of range for n = " + std::to_string(n));
  // Largest c0 with C(c0,3) <= k, then b0 with C(b0,2) <= rest, then a0 = rest.
  std::uint64_t c0 = 2;
  while (binom(c0 + 1, 3) <= k) ++c0;
  k -= binom(c0, 3);
  std::uint64_t b0 = 1;
  while (binom(b0 + 1, 2) <= k) ++b0;
  k -= binom(b0, 2);
  return {static_cast<int>(k) + 1, static_cast<int>(b0) + 1, static_cast<int>(c0) + 1};
}

/// Exact rational with positive denominator, always reduced.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
    if (den == 0) throw InvalidInput("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  constexpr bool operator==(const Rational&) const = default;
  constexpr std::strong_ordering operator<=>(const Rational& o) const {
    const __int128 lhs = static_cast<__int128>(num) * o.den;
    const __int128 rhs = static_cast<__int128>(o.num) * den;
    return lhs <=> rhs;
  }
  constexpr bool is_integer() const noexcept { return den == 1; }
  double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
};

inline std::string to_string(const Rational& q) {
  return q.den == 1 ? std::to_string(q.num) : std::to_string(q.num) + "/" + std::to_string(q.den);
}

/// A total map from the C(n,3) triples of [n] to colours [r], stored by colex rank.
class Colouring {
 public:
  Colouring() = default;

  Colouring(int n, int r, std::vector<std::uint8_t> values) : n_(n), r_(r), values_(std::move(values)) {
    if (n < 0) throw InvalidInput("negative order");
    if (r < 2 || r > 255) throw InvalidInput("number of colours must lie in [2, 255]");
    if (values_.size() != triple_count(n))
      throw InvalidInput("colouring of order " + std::to_string(n) + " needs " +
                         std::to_string(triple_count(n)) + " values, got " +
                         std::to_string(values_.size()));
    for (std::uint8_t v : values_)
      if (v < 1 || v > r) throw InvalidInput("colour id " + std::to_string(v) + " outside [1, r]");
  }

  static Colouring constant(int n, int r, int colour) {
    if (colour < 1 || colour > r) throw InvalidInput("colour outside [1, r]");
    return Colouring(n, r, std::vector<std::uint8_t>(triple_count(n), static_cast<std::uint8_t>(colour)));
  }

  int n() const noexcept { return n_; }
  int r() const noexcept { return r_; }
  std::span<const std::uint8_t> values() const& noexcept { return values_; }
  std::vector<std::uint8_t> values() && { return std::move(values_); }

  int operator()(const Triple& t) const noexcept { return values_[detail::colex_rank(t.a, t.b, t.c)]; }

  /// Colour of {x,y,z} given in any order; vertices must be distinct and in range.
  int at(int x, int y, int z) const noexcept {
    detail::sort3(x, y, z);
    return values_[detail::colex_rank(x, y, z)];
  }

  int at_rank(std::uint64_t k) const { return values_.at(k); }

  std::vector<std::uint64_t> class_sizes() const {
    std::vector<std::uint64_t> sizes(static_cast<std::size_t>(r_), 0);
    for (std::uint8_t v : values_) ++sizes[v - 1];
    return sizes;
  }

  bool operator==(const Colouring&) const = default;

 private:
  int n_ = 0;
  int r_ = 2;
  std::vector<std::uint8_t> values_;
};

/// A set of distinct triples on [n]. Not necessarily a Steiner system.
class TripleSystem {
 public:
  TripleSystem() = default;

  TripleSystem(int n, std::vector<Triple> triples) : n_(n), triples_(std::move(triples)) {
    if (n < 0) throw InvalidInput("negative order");
    for (const Triple& t : triples_) (void)triple_rank(t, n_);
    std::vector<Triple> sorted = triples_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidInput("triple system contains a repeated triple");
  }

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }
  std::span<const Triple> triples() const& noexcept { return triples_; }
  std::vector<Triple> triples() && { return std::move(triples_); }

  /// Same system with triples in ascending order.
  TripleSystem sorted() const {
    TripleSystem out = *this;
    std::sort(out.triples_.begin(), out.triples_.end());
    return out;
  }

  bool operator==(const TripleSystem&) const = default;

 private:
  int n_ = 0;
  std::vector<Triple> triples_;
};

struct ColourProfile {
  std::vector<std::uint64_t> counts;  // counts[c - 1] for colour c
  std::uint64_t total = 0;

  std::uint64_t operator[](int colour) const { return counts.at(static_cast<std::size_t>(colour - 1)); }
  int r() const noexcept { return static_cast<int>(counts.size()); }
  bool operator==(const ColourProfile&) const = default;
};

template <class Triples>
ColourProfile profile_of(const Triples& triples, const Colouring& chi) {
  ColourProfile p{std::vector<std::uint64_t>(static_cast<std::size_t>(chi.r()), 0), 0};
  for (const Triple& t : triples) {
    ++p.counts[static_cast<std::size_t>(chi(t) - 1)];
    ++p.total;
  }
  return p;
}

inline ColourProfile colour_profile(const TripleSystem& s, const Colouring& chi) {
  if (s.n() != chi.n())
    throw InvalidInput("system has order " + std::to_string(s.n()) + " but colouring has order " +
                       std::to_string(chi.n()));
  return profile_of(s.triples(), chi);
}

/// r * max_c (counts[c] - total / r).
inline Rational discrepancy(const ColourProfile& p) {
  if (p.total == 0) throw InvalidInput("discrepancy of an empty system is undefined");
  const auto r = static_cast<std::int64_t>(p.counts.size());
  const auto top = static_cast<std::int64_t>(*std::max_element(p.counts.begin(), p.counts.end()));
  // r * (top - total/r) = (r*r*top - r*total) / r
  return Rational(r * r * top - r * static_cast<std::int64_t>(p.total), r);
}

inline Rational discrepancy(const TripleSystem& s, const Colouring& chi) {
  if (s.empty()) throw InvalidInput("discrepancy of an empty system is undefined");
  return discrepancy(colour_profile(s, chi));
}

/// Smallest colour id attaining the maximum count.
inline int leading_colour(const ColourProfile& p) {
  return static_cast<int>(std::max_element(p.counts.begin(), p.counts.end()) - p.counts.begin()) + 1;
}

// ---------------------------------------------------------------------------
// Text formats
//
// Colouring, dense:   "n r" then C(n,3) colour ids, one per line, colex order.
// Colouring, sparse:  "n r default=<c>" then "a b c colour" exception lines.
// Triple system:      "n" then one sorted triple "a b c" per line.
// Blank lines and lines starting with '#' are ignored.

namespace detail {

inline bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

inline long long parse_int(const std::string& tok, const char* what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw InvalidInput(std::string("expected integer for ") + what + ", got '" + tok + "'");
  }
  if (pos != tok.size()) throw InvalidInput(std::string("expected integer for ") + what + ", got '" + tok + "'");
  return v;
}

}  // namespace detail

inline Colouring read_colouring(std::istream& in) {
  std::string line;
  if (!detail::next_content_line(in, line)) throw InvalidInput("colouring file is empty");
  const auto head = detail::split_ws(line);
  if (head.size() != 2 && head.size() != 3) throw InvalidInput("colouring header must be 'n r' or 'n r default=<c>'");
  const long long n = detail::parse_int(head[0], "n");
  const long long r = detail::parse_int(head[1], "r");
  if (n < 0 || n > 2000) throw InvalidInput("order out of supported range");
  if (r < 2 || r > 255) throw InvalidInput("number of colours must lie in [2, 255]");
  const std::uint64_t total = triple_count(static_cast<int>(n));

  if (head.size() == 3) {
    const std::string prefix = "default=";
    if (head[2].rfind(prefix, 0) != 0) throw InvalidInput("third header field must be default=<c>");
    const long long def = detail::parse_int(head[2].substr(prefix.size()), "default colour");
    if (def < 1 || def > r) throw InvalidInput("default colour outside [1, r]");
    std::vector<std::uint8_t> values(total, static_cast<std::uint8_t>(def));
    while (detail::next_content_line(in, line)) {
      const auto tok = detail::split_ws(line);
      if (tok.size() != 4) throw InvalidInput("sparse colouring lines must be 'a b c colour'");
      const Triple t = make_triple(static_cast<int>(detail::parse_int(tok[0], "vertex")),
                                   static_cast<int>(detail::parse_int(tok[1], "vertex")),
                                   static_cast<int>(detail::parse_int(tok[2], "vertex")), static_cast<int>(n));
      const long long c = detail::parse_int(tok[3], "colour");
      if (c < 1 || c > r) throw InvalidInput("colour id outside [1, r]");
      values[triple_rank(t, static_cast<int>(n))] = static_cast<std::uint8_t>(c);
    }
    return Colouring(static_cast<int>(n), static_cast<int>(r), std::move(values));
  }

  std::vector<std::uint8_t> values;
  values.reserve(total);
  while (detail::next_content_line(in, line)) {
    for (const auto& tok : detail::split_ws(line)) {
      const long long c = detail::parse_int(tok, "colour");
      if (c < 1 || c > r) throw InvalidInput("colour id " + tok + " outside [1, r]");
      values.push_back(static_cast<std::uint8_t>(c));
    }
  }
  return Colouring(static_cast<int>(n), static_cast<int>(r), std::move(values));
}

inline void write_colouring(std::ostream& out, const Colouring& chi) {
  out << chi.n() << ' ' << chi.r() << '\n';
  for (std::uint8_t v : chi.values()) out << static_cast<int>(v) << '\n';
}

/// Sparse form with the most frequent colour (smallest id on ties) as default.
inline void write_colouring_sparse(std::ostream& out, const Colouring& chi) {
  const auto sizes = chi.class_sizes();
  const int def = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin()) + 1;
  out << chi.n() << ' ' << chi.r() << " default=" << def << '\n';
  for (std::uint64_t k = 0; k < triple_count(chi.n()); ++k) {
    const int c = chi.at_rank(k);
    if (c != def) out << to_string(triple_unrank(k, chi.n())) << ' ' << c << '\n';
  }
}

inline TripleSystem read_triple_system(std::istream& in) {
  std::string line;
  if (!detail::next_content_line(in, line)) throw InvalidInput("triple system file is empty");
  const auto head = detail::split_ws(line);
  if (head.size() != 1) throw InvalidInput("triple system header must be 'n'");
  const long long n = detail::parse_int(head[0], "n");
  if (n < 0 || n > 2000) throw InvalidInput("order out of supported range");
  std::vector<Triple> triples;
  while (detail::next_content_line(in, line)) {
    const auto tok = detail::split_ws(line);
    if (tok.size() != 3) throw InvalidInput("triple lines must be 'a b c'");
    triples.push_back(make_triple(static_cast<int>(detail::parse_int(tok[0], "vertex")),
                                  static_cast<int>(detail::parse_int(tok[1], "vertex")),
                                  static_cast<int>(detail::parse_int(tok[2], "vertex")), static_cast<int>(n)));
  }
  return TripleSystem(static_cast<int>(n), std::move(triples));
}

inline void write_triple_system(std::ostream& out, const TripleSystem& s) {
  out << s.n() << '\n';
  const TripleSystem sorted = s.sorted();
  for (const Triple& t : sorted.triples()) out << to_string(t) << '\n';
}

}  // namespace stsd
