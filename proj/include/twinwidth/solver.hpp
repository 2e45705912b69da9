#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "contraction.hpp"
#include "trigraph.hpp"

namespace tww {

struct GreedyResult {
  ContractionSequence sequence;
  std::size_t width = 0;
};

// At each step contracts the pair whose contraction gives the smallest maximum red degree;
// ties go to the lexicographically smallest pair.
inline GreedyResult greedy_sequence(const Trigraph& g) {
  Trigraph h = g;
  GreedyResult out;
  out.width = h.max_red_degree();
  const std::size_t n = h.order(), words = h.stride();
  std::vector<std::size_t> rdeg(n + 1, 0);
  std::map<std::size_t, Bitset> level;

  while (h.alive_count() > 1) {
    auto alive = h.alive_vertices();
    for (Vertex v : alive) rdeg[v] = h.red_degree(v);
    std::vector<Vertex> top(alive);
    std::partial_sort(top.begin(), top.begin() + std::min<std::size_t>(3, top.size()), top.end(),
                      [&](Vertex a, Vertex b) { return rdeg[a] > rdeg[b] || (rdeg[a] == rdeg[b] && a < b); });
    top.resize(std::min<std::size_t>(3, top.size()));
    level.clear();
    for (Vertex t : top)
      for (std::size_t lv : {rdeg[t], rdeg[t] == 0 ? std::size_t{0} : rdeg[t] - 1})
        if (!level.count(lv)) {
          Bitset b(n);
          for (Vertex v : alive)
            if (rdeg[v] == lv) b.set(v - 1);
          level.emplace(lv, std::move(b));
        }
    static const std::vector<Word> kEmpty;
    auto alive_words = h.alive_mask().words();

    std::size_t best = std::numeric_limits<std::size_t>::max();
    Vertex bu_best = 0, bv_best = 0;
    for (std::size_t i = 0; i < alive.size() && best > 0; ++i) {
      const Vertex u = alive[i];
      auto bu = h.black_row(u), ru = h.red_row(u);
      for (std::size_t j = i + 1; j < alive.size() && best > 0; ++j) {
        const Vertex v = alive[j];
        auto bv = h.black_row(v), rv = h.red_row(v);
        bool others = alive.size() > 2;
        std::size_t m_top = 0;
        for (Vertex t : top)
          if (t != u && t != v) {
            m_top = rdeg[t];
            break;
          }
        std::span<const Word> l0 = others ? level.at(m_top).words() : std::span<const Word>(kEmpty);
        std::span<const Word> l1 = others && m_top > 0 && level.count(m_top - 1) ? level.at(m_top - 1).words() : std::span<const Word>(kEmpty);
        std::size_t rdeg_w = 0;
        bool top_plus = false, top_stays = false, below_plus = false, pruned = false;
        for (std::size_t k = 0; k < words; ++k) {
          Word s = alive_words[k];
          if (k == ((u - 1) >> 6)) s &= ~(Word{1} << ((u - 1) & 63));
          if (k == ((v - 1) >> 6)) s &= ~(Word{1} << ((v - 1) & 63));
          Word nb = bu[k] & bv[k];
          Word nr = (bu[k] | bv[k] | ru[k] | rv[k]) & ~nb & s;
          Word plus = nr & ~ru[k] & ~rv[k];
          Word minus = ru[k] & rv[k] & s;
          rdeg_w += static_cast<std::size_t>(std::popcount(nr));
          if (rdeg_w > best) {
            pruned = true;
            break;
          }
          if (!l0.empty()) {
            top_plus |= (plus & l0[k]) != 0;
            top_stays |= (l0[k] & s & ~minus) != 0;
          }
          if (!l1.empty()) below_plus |= (plus & l1[k]) != 0;
        }
        if (pruned) continue;
        std::size_t rest = 0;
        if (others) rest = top_plus ? m_top + 1 : (top_stays || below_plus) ? m_top : m_top - 1;
        std::size_t result = std::max(rdeg_w, rest);
        if (result < best) {
          best = result;
          bu_best = u;
          bv_best = v;
        }
      }
    }
    h.contract_in_place(bu_best, bv_best);
    out.sequence.push(bu_best, bv_best);
    out.width = std::max(out.width, best);
  }
  return out;
}

// Blocks sorted by minimum, each sorted, concatenated with 0 as separator.
inline std::vector<Vertex> canonical_encoding(const VertexPartition& pi, std::size_t n) {
  std::vector<Vertex> out;
  for (const auto& b : pi.completion(n)) {
    if (!out.empty()) out.push_back(0);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

struct ExactResult {
  std::size_t value = 0;        // best width found (exact when exact == true)
  std::size_t lower_bound = 0;  // proven lower bound
  bool exact = false;
  ContractionSequence witness;  // verifies at value
  std::uint64_t nodes = 0;
};

enum class Decision { kNo, kYes, kUnknown };

struct DecisionResult {
  Decision answer = Decision::kUnknown;
  ContractionSequence witness;
  std::uint64_t nodes = 0;
};

struct SolverOptions {
  std::uint64_t node_budget = 50'000'000;
  std::size_t memo_cap = 1u << 22;  // entries; the table is cleared when full
};

namespace detail {

// Trigraph on at most 64 vertices as word masks, plus the class label of every original vertex.
struct SmallState {
  std::array<std::uint64_t, 64> black{};
  std::array<std::uint64_t, 64> red{};
  std::array<std::uint8_t, 64> label{};
  std::uint64_t alive = 0;
  std::uint8_t n = 0;

  static SmallState from(const Trigraph& g) {
    if (g.order() > 64) throw std::invalid_argument("exact solver supports at most 64 vertices, got " + std::to_string(g.order()));
    SmallState s;
    s.n = static_cast<std::uint8_t>(g.order());
    for (Vertex v = 1; v <= g.order(); ++v) {
      s.label[v - 1] = static_cast<std::uint8_t>(v - 1);
      if (!g.is_alive(v)) continue;
      s.alive |= std::uint64_t{1} << (v - 1);
      s.black[v - 1] = g.black_row(v)[0];
      s.red[v - 1] = g.red_row(v)[0];
    }
    return s;
  }

  std::size_t alive_count() const { return static_cast<std::size_t>(std::popcount(alive)); }

  std::size_t max_red() const {
    std::size_t m = 0;
    for (std::uint64_t a = alive; a; a &= a - 1) m = std::max(m, static_cast<std::size_t>(std::popcount(red[std::countr_zero(a)])));
    return m;
  }

  SmallState contract(unsigned u, unsigned v) const {
    SmallState s = *this;
    unsigned w = std::min(u, v), d = std::max(u, v);
    std::uint64_t wd = (std::uint64_t{1} << w) | (std::uint64_t{1} << d);
    std::uint64_t nb = black[w] & black[d] & ~wd;
    std::uint64_t nr = (black[w] | black[d] | red[w] | red[d]) & ~nb & ~wd;
    s.alive &= ~(std::uint64_t{1} << d);
    for (std::uint64_t a = s.alive; a; a &= a - 1) {
      unsigned x = static_cast<unsigned>(std::countr_zero(a));
      if (x == w) continue;
      s.black[x] = (s.black[x] & ~wd) | (((nb >> x) & 1U) << w);
      s.red[x] = (s.red[x] & ~wd) | (((nr >> x) & 1U) << w);
    }
    s.black[w] = nb;
    s.red[w] = nr;
    s.black[d] = 0;
    s.red[d] = 0;
    for (unsigned i = 0; i < n; ++i)
      if (s.label[i] == d) s.label[i] = static_cast<std::uint8_t>(w);
    return s;
  }

  // Class label per original vertex: a canonical encoding of the partition.
  std::string key() const { return std::string(reinterpret_cast<const char*>(label.data()), n); }
};

class BranchAndBound {
 public:
  BranchAndBound(const SmallState& root, const SolverOptions& opt) : root_(root), opt_(opt) {}

  Decision decide(std::size_t d, ContractionSequence& witness) {
    witness.steps.clear();
    if (root_.max_red() > d) return Decision::kNo;
    bool ok = dfs(root_, d, witness);
    if (exhausted_) return Decision::kUnknown;
    return ok ? Decision::kYes : Decision::kNo;
  }

  std::uint64_t nodes() const { return nodes_; }
  bool exhausted() const { return exhausted_; }

 private:
  bool dfs(const SmallState& s, std::size_t d, ContractionSequence& path) {
    if (exhausted_) return false;
    if (++nodes_ > opt_.node_budget) {
      exhausted_ = true;
      return false;
    }
    const std::size_t k = s.alive_count();
    if (k <= d + 2) {
      std::vector<Vertex> rest;
      for (std::uint64_t a = s.alive; a; a &= a - 1) rest.push_back(static_cast<Vertex>(std::countr_zero(a) + 1));
      finish_arbitrarily(rest, path);
      return true;
    }
    std::string key = s.key();
    if (auto it = failed_.find(key); it != failed_.end() && it->second >= d) return false;

    struct Child {
      std::size_t width;
      unsigned u, v;
    };
    std::vector<Child> children;
    for (std::uint64_t a = s.alive; a; a &= a - 1) {
      unsigned u = static_cast<unsigned>(std::countr_zero(a));
      for (std::uint64_t b = a & (a - 1); b; b &= b - 1) {
        unsigned v = static_cast<unsigned>(std::countr_zero(b));
        std::size_t w = s.contract(u, v).max_red();
        if (w <= d) children.push_back({w, u, v});
      }
    }
    std::stable_sort(children.begin(), children.end(), [](const Child& x, const Child& y) { return x.width < y.width; });
    for (const auto& c : children) {
      path.push(c.u + 1, c.v + 1);
      if (dfs(s.contract(c.u, c.v), d, path)) return true;
      path.steps.pop_back();
      if (exhausted_) return false;
    }
    if (failed_.size() >= opt_.memo_cap) failed_.clear();
    auto& slot = failed_[key];
    slot = std::max(slot, d);
    return false;
  }

  SmallState root_;
  SolverOptions opt_;
  std::unordered_map<std::string, std::size_t> failed_;  // largest d known to fail
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

inline std::size_t first_step_lower_bound(const SmallState& s) {
  std::size_t lb = s.max_red();
  if (s.alive_count() < 2) return lb;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::uint64_t a = s.alive; a; a &= a - 1) {
    unsigned u = static_cast<unsigned>(std::countr_zero(a));
    for (std::uint64_t b = a & (a - 1); b; b &= b - 1) best = std::min(best, s.contract(u, static_cast<unsigned>(std::countr_zero(b))).max_red());
  }
  return std::max(lb, best);
}

}  // namespace detail

inline DecisionResult decide_tww_le(const Trigraph& g, std::size_t d, const SolverOptions& opt = {}) {
  detail::BranchAndBound bb(detail::SmallState::from(g), opt);
  DecisionResult r;
  r.answer = bb.decide(d, r.witness);
  r.nodes = bb.nodes();
  if (r.answer != Decision::kYes) r.witness.steps.clear();
  return r;
}

inline ExactResult exact_twin_width(const Trigraph& g, const SolverOptions& opt = {}) {
  auto root = detail::SmallState::from(g);
  ExactResult r;
  auto greedy = greedy_sequence(g);
  r.value = greedy.width;
  r.witness = greedy.sequence;
  r.lower_bound = detail::first_step_lower_bound(root);
  if (r.lower_bound >= r.value) {
    r.exact = true;
    return r;
  }
  detail::BranchAndBound bb(root, opt);
  for (std::size_t d = r.lower_bound; d < r.value; ++d) {
    ContractionSequence w;
    Decision ans = bb.decide(d, w);
    if (ans == Decision::kYes) {
      r.value = d;
      r.witness = std::move(w);
      break;
    }
    if (ans == Decision::kUnknown) {
      r.nodes = bb.nodes();
      return r;
    }
    r.lower_bound = d + 1;
  }
  r.lower_bound = r.value;
  r.exact = true;
  r.nodes = bb.nodes();
  return r;
}

inline ExactResult exact_twin_width(const Trigraph& g, std::uint64_t node_budget) {
  SolverOptions opt;
  opt.node_budget = node_budget;
  return exact_twin_width(g, opt);
}

struct BruteForceResult {
  std::size_t value = 0;
  std::uint64_t sequences = 0;
};

// Minimum width over every full contraction sequence, by direct enumeration.
inline BruteForceResult brute_force_twin_width(const Trigraph& g) {
  if (g.alive_count() > 6) throw std::invalid_argument("brute force enumeration supports at most 6 vertices");
  BruteForceResult r;
  r.value = std::numeric_limits<std::size_t>::max();
  auto rec = [&](auto&& self, const Trigraph& h, std::size_t width) -> void {
    if (h.alive_count() == 1) {
      ++r.sequences;
      r.value = std::min(r.value, width);
      return;
    }
    auto alive = h.alive_vertices();
    for (std::size_t i = 0; i < alive.size(); ++i)
      for (std::size_t j = i + 1; j < alive.size(); ++j) {
        Trigraph next = contract(h, alive[i], alive[j]);
        self(self, next, std::max(width, next.max_red_degree()));
      }
  };
  rec(rec, g, g.max_red_degree());
  return r;
}

}  // namespace tww
