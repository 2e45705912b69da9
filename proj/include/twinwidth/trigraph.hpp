#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bitset.hpp"

namespace tww {

// Vertices are 1-based labels in [1, n]; bit rows use label-1.
using Vertex = std::uint32_t;

enum class EdgeColor : std::uint8_t { kNone, kBlack, kRed };

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class Trigraph {
 public:
  Trigraph() = default;

  explicit Trigraph(std::size_t n) : n_(n), black_(n), alive_(n), zero_(words_for(n), 0) {
    if (n == 0) throw std::invalid_argument("trigraph needs at least one vertex");
    if (n > UINT32_MAX - 1) throw std::invalid_argument("too many vertices");
    alive_.fill();
    alive_count_ = n;
  }

  std::size_t order() const noexcept { return n_; }
  std::size_t stride() const noexcept { return black_.stride(); }
  std::size_t alive_count() const noexcept { return alive_count_; }
  bool is_alive(Vertex v) const noexcept { return v >= 1 && v <= n_ && alive_.test(v - 1); }
  const Bitset& alive_mask() const noexcept { return alive_; }

  std::vector<Vertex> alive_vertices() const {
    std::vector<Vertex> out;
    out.reserve(alive_count_);
    for_each_bit(alive_.words(), [&](std::size_t i) { out.push_back(static_cast<Vertex>(i + 1)); });
    return out;
  }

  bool is_plain() const noexcept { return red_edges_ == 0; }
  std::size_t black_edge_count() const noexcept { return black_edges_; }
  std::size_t red_edge_count() const noexcept { return red_edges_; }

  std::span<const Word> black_row(Vertex v) const { return black_.row(v - 1); }
  std::span<const Word> red_row(Vertex v) const { return red_.empty() ? std::span<const Word>(zero_) : red_.row(v - 1); }

  EdgeColor color(Vertex u, Vertex v) const {
    require_alive(u);
    require_alive(v);
    if (u == v) return EdgeColor::kNone;
    if (black_.test(u - 1, v - 1)) return EdgeColor::kBlack;
    if (!red_.empty() && red_.test(u - 1, v - 1)) return EdgeColor::kRed;
    return EdgeColor::kNone;
  }

  void set_color(Vertex u, Vertex v, EdgeColor c) {
    require_alive(u);
    require_alive(v);
    if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    EdgeColor old = color(u, v);
    if (old == c) return;
    if (old == EdgeColor::kBlack) {
      black_.reset(u - 1, v - 1);
      black_.reset(v - 1, u - 1);
      --black_edges_;
    } else if (old == EdgeColor::kRed) {
      red_.reset(u - 1, v - 1);
      red_.reset(v - 1, u - 1);
      --red_edges_;
    }
    if (c == EdgeColor::kBlack) {
      black_.set(u - 1, v - 1);
      black_.set(v - 1, u - 1);
      ++black_edges_;
    } else if (c == EdgeColor::kRed) {
      ensure_red();
      red_.set(u - 1, v - 1);
      red_.set(v - 1, u - 1);
      ++red_edges_;
    }
  }

  std::size_t degree(Vertex v) const {
    require_alive(v);
    return popcount(black_row(v)) + popcount(red_row(v));
  }

  std::size_t red_degree(Vertex v) const {
    require_alive(v);
    return popcount(red_row(v));
  }

  std::size_t max_red_degree() const {
    if (red_.empty() || red_edges_ == 0) return 0;
    std::size_t best = 0;
    for_each_bit(alive_.words(), [&](std::size_t i) { best = std::max(best, popcount(red_.row(i))); });
    return best;
  }

  // Red degree the merged vertex would have after contracting u and v.
  std::size_t contraction_red_degree(Vertex u, Vertex v) const {
    require_pair(u, v);
    auto bu = black_row(u), bv = black_row(v), ru = red_row(u), rv = red_row(v);
    std::size_t c = 0;
    for (std::size_t k = 0; k < bu.size(); ++k) {
      Word red = (bu[k] ^ bv[k]) | ru[k] | rv[k];
      c += static_cast<std::size_t>(std::popcount(red));
    }
    // u and v themselves never count.
    for (Vertex x : {u, v}) {
      std::size_t i = x - 1;
      bool red = (test_bit(bu, i) != test_bit(bv, i)) || test_bit(ru, i) || test_bit(rv, i);
      c -= red ? 1 : 0;
    }
    return c;
  }

  // Merges v into u (or u into v); the survivor keeps min(u, v). Returns the survivor.
  Vertex contract_in_place(Vertex u, Vertex v) {
    require_pair(u, v);
    const Vertex w = std::min(u, v), d = std::max(u, v);
    const std::size_t wi = w - 1, di = d - 1, words = stride();
    drop_edge_counts(w, d);

    std::vector<Word> nb(words), nr(words);
    auto bw = black_.row(wi), bd = black_.row(di);
    auto rw = red_row(w), rd = red_row(d);
    for (std::size_t k = 0; k < words; ++k) {
      nb[k] = bw[k] & bd[k];
      nr[k] = (bw[k] | bd[k] | rw[k] | rd[k]) & ~nb[k];
    }
    for (std::size_t i : {wi, di}) {
      clear_bit(nb, i);
      clear_bit(nr, i);
    }
    if (any_bit(nr)) ensure_red();

    std::copy(nb.begin(), nb.end(), bw.begin());
    std::fill(bd.begin(), bd.end(), 0);
    if (!red_.empty()) {
      auto rrw = red_.row(wi), rrd = red_.row(di);
      std::copy(nr.begin(), nr.end(), rrw.begin());
      std::fill(rrd.begin(), rrd.end(), 0);
    }
    alive_.reset(di);
    --alive_count_;
    for_each_bit(alive_.words(), [&](std::size_t x) {
      if (x == wi) return;
      auto bx = black_.row(x);
      assign_bit(bx, wi, test_bit(nb, x));
      clear_bit(bx, di);
      if (!red_.empty()) {
        auto rx = red_.row(x);
        assign_bit(rx, wi, test_bit(nr, x));
        clear_bit(rx, di);
      }
    });
    black_edges_ += popcount(nb);
    red_edges_ += popcount(nr);
    return w;
  }

  // Deletes v and its incident edges (G - v).
  void remove_vertex(Vertex v) {
    require_alive(v);
    const std::size_t vi = v - 1;
    black_edges_ -= popcount(black_row(v));
    red_edges_ -= popcount(red_row(v));
    for_each_bit(black_.row(vi), [&](std::size_t x) { black_.reset(x, vi); });
    auto brow = black_.row(vi);
    std::fill(brow.begin(), brow.end(), 0);
    if (!red_.empty()) {
      for_each_bit(red_.row(vi), [&](std::size_t x) { red_.reset(x, vi); });
      auto rrow = red_.row(vi);
      std::fill(rrow.begin(), rrow.end(), 0);
    }
    alive_.reset(vi);
    --alive_count_;
  }

  std::vector<Edge> edges(EdgeColor c) const {
    std::vector<Edge> out;
    if (c == EdgeColor::kNone) return out;
    for_each_bit(alive_.words(), [&](std::size_t i) {
      auto row = c == EdgeColor::kBlack ? black_.row(i) : red_row(static_cast<Vertex>(i + 1));
      for_each_bit(row, [&](std::size_t j) {
        if (j > i) out.push_back({static_cast<Vertex>(i + 1), static_cast<Vertex>(j + 1)});
      });
    });
    return out;
  }

  // Raw access for generators; caller must keep rows symmetric and call recount().
  BitMatrix& mutable_black() noexcept { return black_; }
  void recount() {
    black_edges_ = 0;
    red_edges_ = 0;
    for_each_bit(alive_.words(), [&](std::size_t i) {
      black_edges_ += popcount(black_.row(i));
      if (!red_.empty()) red_edges_ += popcount(red_.row(i));
    });
    black_edges_ /= 2;
    red_edges_ /= 2;
  }

  friend bool operator==(const Trigraph& a, const Trigraph& b) {
    if (a.n_ != b.n_ || !(a.alive_ == b.alive_)) return false;
    if (a.black_edges_ != b.black_edges_ || a.red_edges_ != b.red_edges_) return false;
    for (std::size_t i = 0; i < a.n_; ++i) {
      if (!a.alive_.test(i)) continue;
      auto ab = a.black_.row(i), bb = b.black_.row(i);
      if (!std::equal(ab.begin(), ab.end(), bb.begin())) return false;
      auto ar = a.red_row(static_cast<Vertex>(i + 1)), br = b.red_row(static_cast<Vertex>(i + 1));
      if (!std::equal(ar.begin(), ar.end(), br.begin())) return false;
    }
    return true;
  }

  void require_alive(Vertex v) const {
    if (v < 1 || v > n_) throw std::out_of_range("vertex " + std::to_string(v) + " out of range [1, " + std::to_string(n_) + "]");
    if (!alive_.test(v - 1)) throw std::invalid_argument("vertex " + std::to_string(v) + " is not alive");
  }

 private:
  void require_pair(Vertex u, Vertex v) const {
    require_alive(u);
    require_alive(v);
    if (u == v) throw std::invalid_argument("cannot contract vertex " + std::to_string(u) + " with itself");
  }

  void ensure_red() {
    if (red_.empty()) red_ = BitMatrix(n_);
  }

  void drop_edge_counts(Vertex u, Vertex v) {
    EdgeColor uv = color(u, v);
    black_edges_ -= popcount(black_row(u)) + popcount(black_row(v)) - (uv == EdgeColor::kBlack ? 1 : 0);
    red_edges_ -= popcount(red_row(u)) + popcount(red_row(v)) - (uv == EdgeColor::kRed ? 1 : 0);
  }

  std::size_t n_ = 0;
  BitMatrix black_;
  BitMatrix red_;  // allocated on first red edge
  Bitset alive_;
  std::vector<Word> zero_;
  std::size_t alive_count_ = 0;
  std::size_t black_edges_ = 0;
  std::size_t red_edges_ = 0;
};

inline Trigraph from_edge_list(std::size_t n, const std::vector<Edge>& edges) {
  Trigraph g(n);
  for (const Edge& e : edges) {
    if (e.u < 1 || e.u > n || e.v < 1 || e.v > n)
      throw std::out_of_range("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range");
    if (e.u == e.v) throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
    if (g.color(e.u, e.v) != EdgeColor::kNone)
      throw std::invalid_argument("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    g.set_color(e.u, e.v, EdgeColor::kBlack);
  }
  return g;
}

inline Trigraph contract(const Trigraph& g, Vertex u, Vertex v) {
  Trigraph h = g;
  h.contract_in_place(u, v);
  return h;
}

inline std::size_t contraction_red_degree(const Trigraph& g, Vertex u, Vertex v) { return g.contraction_red_degree(u, v); }
inline std::size_t red_degree(const Trigraph& g, Vertex v) { return g.red_degree(v); }
inline std::size_t max_red_degree(const Trigraph& g) { return g.max_red_degree(); }

inline Trigraph complement(const Trigraph& g) {
  if (!g.is_plain()) throw std::invalid_argument("complement needs a graph without red edges");
  Trigraph h = g;
  auto alive = g.alive_vertices();
  for (std::size_t i = 0; i < alive.size(); ++i)
    for (std::size_t j = i + 1; j < alive.size(); ++j) {
      bool e = g.color(alive[i], alive[j]) == EdgeColor::kBlack;
      h.set_color(alive[i], alive[j], e ? EdgeColor::kNone : EdgeColor::kBlack);
    }
  return h;
}

// Partition of (part of) the vertex set; uncovered vertices are implicit singletons.
struct VertexPartition {
  std::vector<std::vector<Vertex>> blocks;

  void validate(std::size_t n) const {
    std::vector<char> seen(n + 1, 0);
    for (const auto& b : blocks) {
      if (b.empty()) throw std::invalid_argument("partition has an empty block");
      for (Vertex v : b) {
        if (v < 1 || v > n) throw std::out_of_range("partition vertex " + std::to_string(v) + " out of range");
        if (seen[v]) throw std::invalid_argument("partition blocks overlap at vertex " + std::to_string(v));
        seen[v] = 1;
      }
    }
  }

  // The canonical completion: given blocks plus singletons for uncovered vertices,
  // each block sorted, blocks ordered by their minimum.
  std::vector<std::vector<Vertex>> completion(std::size_t n) const {
    validate(n);
    std::vector<char> seen(n + 1, 0);
    std::vector<std::vector<Vertex>> out;
    for (const auto& b : blocks) {
      auto s = b;
      std::sort(s.begin(), s.end());
      for (Vertex v : s) seen[v] = 1;
      out.push_back(std::move(s));
    }
    for (Vertex v = 1; v <= n; ++v)
      if (!seen[v]) out.push_back({v});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
  }
};

// G/Π for a plain graph G. Each block is represented by its minimum label.
inline Trigraph quotient(const Trigraph& g, const VertexPartition& pi) {
  if (!g.is_plain()) throw std::invalid_argument("quotient needs a graph without red edges");
  const std::size_t n = g.order();
  auto blocks = pi.completion(n);
  for (const auto& b : pi.blocks)
    for (Vertex v : b) g.require_alive(v);
  // Dead vertices only appear as implicit singletons; drop them.
  blocks.erase(std::remove_if(blocks.begin(), blocks.end(), [&](const auto& b) { return !g.is_alive(b.front()); }), blocks.end());

  Trigraph h(n);
  std::vector<char> keep(n + 1, 0);
  for (const auto& b : blocks) keep[b.front()] = 1;
  for (Vertex v = 1; v <= n; ++v)
    if (!keep[v]) h.remove_vertex(v);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      std::size_t edges = 0;
      for (Vertex x : blocks[i])
        for (Vertex y : blocks[j]) edges += g.color(x, y) == EdgeColor::kBlack ? 1 : 0;
      std::size_t total = blocks[i].size() * blocks[j].size();
      EdgeColor c = edges == 0 ? EdgeColor::kNone : edges == total ? EdgeColor::kBlack : EdgeColor::kRed;
      h.set_color(blocks[i].front(), blocks[j].front(), c);
    }
  return h;
}

// Red degree of block S in the quotient of the bipartite subgraph G[A, B] by Π.
inline std::size_t bipartite_red_degree(const Trigraph& g, const std::vector<Vertex>& a_side, const std::vector<Vertex>& b_side,
                                        const VertexPartition& pi, const std::vector<Vertex>& s) {
  if (!g.is_plain()) throw std::invalid_argument("bipartite_red_degree needs a graph without red edges");
  const std::size_t n = g.order();
  std::vector<char> side(n + 1, 0);
  for (Vertex v : a_side) {
    g.require_alive(v);
    side[v] = 1;
  }
  for (Vertex v : b_side) {
    g.require_alive(v);
    if (side[v] == 1) throw std::invalid_argument("sides overlap at vertex " + std::to_string(v));
    side[v] = 2;
  }
  auto blocks = pi.completion(n);
  auto sorted_s = s;
  std::sort(sorted_s.begin(), sorted_s.end());
  auto it = std::find(blocks.begin(), blocks.end(), sorted_s);
  if (it == blocks.end()) throw std::invalid_argument("S is not a block of the partition");

  auto cross_edge = [&](Vertex x, Vertex y) {
    return side[x] != 0 && side[y] != 0 && side[x] != side[y] && g.color(x, y) == EdgeColor::kBlack;
  };
  std::size_t red = 0;
  for (const auto& t : blocks) {
    if (&t == &*it) continue;
    std::size_t edges = 0;
    for (Vertex x : *it)
      for (Vertex y : t) edges += cross_edge(x, y) ? 1 : 0;
    if (edges != 0 && edges != it->size() * t.size()) ++red;
  }
  return red;
}

// Graph text format: "n m" then m lines "u v". Trigraph dumps add "r u v" and "d v" lines.
inline Trigraph read_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError(lineno, "missing header 'n m'");
  long long n = -1, m = -1;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> n >> m) || (hs >> extra)) throw ParseError(lineno, "malformed header, expected 'n m'");
  }
  if (n < 1 || m < 0) throw ParseError(lineno, "header values out of range");
  Trigraph g(static_cast<std::size_t>(n));
  long long black = 0;
  std::vector<Vertex> dead;
  while (next_line()) {
    std::istringstream ls(line);
    char lead = line[line.find_first_not_of(" \t")];
    if (lead == 'd') {
      std::string tag, extra;
      long long v = 0;
      if (!(ls >> tag >> v) || tag != "d" || (ls >> extra)) throw ParseError(lineno, "malformed line '" + line + "'");
      if (v < 1 || v > n) throw ParseError(lineno, "vertex out of range");
      dead.push_back(static_cast<Vertex>(v));
      continue;
    }
    bool red = lead == 'r';
    if (red) {
      std::string tag;
      ls >> tag;
      if (tag != "r") throw ParseError(lineno, "malformed edge line '" + line + "'");
    }
    long long u = 0, v = 0;
    std::string extra;
    bool ok = (ls >> u >> v) && !(ls >> extra);
    if (!ok) throw ParseError(lineno, "malformed edge line '" + line + "'");
    if (u < 1 || v < 1 || u > n || v > n) throw ParseError(lineno, "vertex out of range");
    if (u == v) throw ParseError(lineno, "self-loop");
    auto uu = static_cast<Vertex>(u), vv = static_cast<Vertex>(v);
    if (g.color(uu, vv) != EdgeColor::kNone) throw ParseError(lineno, "duplicate edge");
    g.set_color(uu, vv, red ? EdgeColor::kRed : EdgeColor::kBlack);
    if (!red) ++black;
  }
  if (black != m) throw ParseError(lineno, "header announces " + std::to_string(m) + " edges, found " + std::to_string(black));
  for (Vertex v : dead) {
    if (!g.is_alive(v)) throw ParseError(lineno, "vertex " + std::to_string(v) + " removed twice");
    if (g.degree(v) != 0 || g.red_degree(v) != 0) throw ParseError(lineno, "removed vertex " + std::to_string(v) + " has edges");
    g.remove_vertex(v);
  }
  return g;
}

inline Trigraph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_graph(in);
}

// Writes black edges, then "r u v" red edges, then "d v" for each removed vertex.
inline void write_graph(std::ostream& out, const Trigraph& g) {
  out << g.order() << ' ' << g.black_edge_count() << '\n';
  for (const Edge& e : g.edges(EdgeColor::kBlack)) out << e.u << ' ' << e.v << '\n';
  for (const Edge& e : g.edges(EdgeColor::kRed)) out << "r " << e.u << ' ' << e.v << '\n';
  for (Vertex v = 1; v <= g.order(); ++v)
    if (!g.is_alive(v)) out << "d " << v << '\n';
}

inline void write_graph(const std::string& path, const Trigraph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_graph(out, g);
}

}  // namespace tww
