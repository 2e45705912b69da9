#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trigraph.hpp"

namespace tww {

// SplitMix64. The value at position i (0-based) of the stream seeded with s is
// mix(s + (i + 1) * kGamma), so any draw can be computed directly from its index.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  static constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix(seed + (index + 1) * kGamma);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept { return mix(state_ += kGamma); }

  // Uniform double in [0, 1) from the top 53 bits.
  double uniform() noexcept { return to_unit(operator()()); }
  // Integer in [0, bound) by multiply-shift.
  std::uint64_t below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(operator()()) * bound) >> 64);
  }

  static constexpr double to_unit(std::uint64_t x) noexcept { return static_cast<double>(x >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct RandomGraphSpec {
  std::size_t n = 1;
  double p = 0.5;
  std::uint64_t seed = 0;
};

// Lexicographic rank of the pair (u, v), 0-based labels, u < v < n.
constexpr std::uint64_t pair_rank(std::uint64_t n, std::uint64_t u, std::uint64_t v) noexcept {
  return u * (2 * n - u - 1) / 2 + (v - u - 1);
}

inline void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in [0, 1], got " + std::to_string(p));
}

namespace detail {

// Fills the upper triangle of rows [row_begin, row_end) restricted to columns in [col_begin, n),
// using draw rank(u, v) of the stream for pair (u, v).
inline void fill_upper(BitMatrix& m, std::size_t n, std::uint64_t seed, double p, std::size_t row_begin, std::size_t row_end,
                       std::size_t col_begin) {
  if (p <= 0.0) return;
  for (std::size_t u = row_begin; u < row_end; ++u) {
    auto row = m.row(u);
    std::size_t v0 = std::max(u + 1, col_begin);
    if (p >= 1.0) {
      for (std::size_t v = v0; v < n; ++v) set_bit(row, v);
      continue;
    }
    std::uint64_t state = seed + (pair_rank(n, u, v0) + 1) * SplitMix64::kGamma;
    std::size_t v = v0;
    while (v < n) {
      std::size_t k = v >> 6, end = std::min(n, (k + 1) * 64);
      Word w = 0;
      for (; v < end; ++v) {
        bool edge = SplitMix64::to_unit(SplitMix64::mix(state)) < p;
        w |= Word{edge} << (v & 63);
        state += SplitMix64::kGamma;
      }
      row[k] |= w;
    }
  }
}

}  // namespace detail

// G(n, p): pair (u, v) is an edge iff its draw (at the pair's lexicographic rank) is below p.
inline Trigraph gnp(const RandomGraphSpec& spec) {
  check_probability(spec.p);
  if (spec.n < 1) throw std::invalid_argument("n must be at least 1");
  Trigraph g(spec.n);
  auto& m = g.mutable_black();
  detail::fill_upper(m, spec.n, spec.seed, spec.p, 0, spec.n, 0);
  m.symmetrize_from_upper();
  g.recount();
  return g;
}

struct BipartiteGraph {
  Trigraph graph;
  std::vector<Vertex> a_side;  // labels b+1 .. b+a
  std::vector<Vertex> b_side;  // labels 1 .. b
};

// Random bipartite graph with B = [1, b] and A = [b+1, b+a]. Each cross pair uses
// the same draw as in gnp(a+b, p, seed), so the result is the cross part of that graph.
inline BipartiteGraph bipartite_gnp(std::size_t a_count, std::size_t b_count, double p, std::uint64_t seed) {
  check_probability(p);
  const std::size_t n = a_count + b_count;
  if (n < 1) throw std::invalid_argument("bipartite graph needs at least one vertex");
  BipartiteGraph out{Trigraph(n), {}, {}};
  auto& m = out.graph.mutable_black();
  detail::fill_upper(m, n, seed, p, 0, b_count, b_count);
  m.symmetrize_from_upper();
  out.graph.recount();
  for (std::size_t i = 1; i <= b_count; ++i) out.b_side.push_back(static_cast<Vertex>(i));
  for (std::size_t i = b_count + 1; i <= n; ++i) out.a_side.push_back(static_cast<Vertex>(i));
  return out;
}

// Random cograph: repeatedly combine two random components by disjoint union or join,
// then relabel by a random permutation.
inline Trigraph random_cograph(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  SplitMix64 rng(seed);
  std::vector<std::vector<Vertex>> parts;
  for (Vertex v = 1; v <= n; ++v) parts.push_back({v});
  std::vector<Edge> edges;
  while (parts.size() > 1) {
    std::size_t i = rng.below(parts.size());
    std::size_t j = rng.below(parts.size() - 1);
    if (j >= i) ++j;
    if (rng() & 1U)
      for (Vertex x : parts[i])
        for (Vertex y : parts[j]) edges.push_back({x, y});
    parts[i].insert(parts[i].end(), parts[j].begin(), parts[j].end());
    if (j + 1 != parts.size()) parts[j] = std::move(parts.back());
    parts.pop_back();
  }
  std::vector<Vertex> perm(n + 1);
  for (Vertex v = 0; v <= n; ++v) perm[v] = v;
  for (std::size_t k = n; k > 1; --k) std::swap(perm[k], perm[1 + rng.below(k)]);
  for (auto& e : edges) e = {perm[e.u], perm[e.v]};
  return from_edge_list(n, edges);
}

}  // namespace tww
