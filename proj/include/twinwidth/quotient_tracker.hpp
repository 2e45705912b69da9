#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitset.hpp"
#include "trigraph.hpp"

namespace tww {

// Maintains G/Π for a plain graph G under successive merges of classes, without
// materialising red edges. Each class is summarised by two rows over V(G):
// "any" (adjacent to some member) and "all" (adjacent to every member).
class QuotientTracker {
 public:
  struct MergeResult {
    Vertex survivor = 0;
    std::size_t merged_red_degree = 0;
    std::size_t max_red_degree = 0;
  };

  explicit QuotientTracker(const Trigraph& g, std::size_t cache_min_size = 8)
      : g_(&g), n_(g.order()), words_(g.stride()), cache_min_(std::max<std::size_t>(cache_min_size, 2)) {
    if (!g.is_plain()) throw std::invalid_argument("quotient tracking needs a graph without red edges");
    members_.resize(n_);
    owner_.assign(n_, kNone);
    list_.assign(n_, kNone);
    label_of_list_.assign(n_, kNone);
    multi_pos_.assign(n_, kNone);
    rdeg_.assign(n_, 0);
    hist_.assign(n_ + 1, 0);
    single_ = g.alive_mask();
    alive_ = g.alive_mask();
    for_each_bit(alive_.words(), [&](std::size_t i) {
      members_[i].push_back(static_cast<std::uint32_t>(i));
      owner_[i] = static_cast<std::uint32_t>(i);
      list_[i] = static_cast<std::uint32_t>(i);
      label_of_list_[i] = static_cast<std::uint32_t>(i);
    });
    classes_ = g.alive_count();
    hist_[0] = classes_;
    buf_.assign(4, std::vector<Word>(words_));
  }

  std::size_t order() const noexcept { return n_; }
  std::size_t class_count() const noexcept { return classes_; }
  bool is_class(Vertex label) const noexcept { return label >= 1 && label <= n_ && alive_.test(label - 1); }
  std::size_t class_size(Vertex label) const { return mem(checked(label)).size(); }
  std::size_t red_degree(Vertex label) const { return rdeg_[checked(label)]; }
  std::size_t max_red_degree() const noexcept { return max_; }

  // Label of the class containing vertex v (an original vertex of G).
  Vertex class_of(Vertex v) const {
    if (v < 1 || v > n_ || owner_[v - 1] == kNone) throw std::out_of_range("vertex " + std::to_string(v) + " not tracked");
    return label_of_list_[owner_[v - 1]] + 1;
  }

  std::vector<Vertex> members(Vertex label) const {
    std::vector<Vertex> out;
    for (auto x : mem(checked(label))) out.push_back(x + 1);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Vertex> class_labels() const {
    std::vector<Vertex> out;
    for_each_bit(alive_.words(), [&](std::size_t i) { out.push_back(static_cast<Vertex>(i + 1)); });
    return out;
  }

  // Class-size histogram: size -> number of classes.
  std::map<std::size_t, std::size_t> size_histogram() const {
    std::map<std::size_t, std::size_t> h;
    for_each_bit(alive_.words(), [&](std::size_t i) { ++h[mem(static_cast<std::uint32_t>(i)).size()]; });
    return h;
  }

  EdgeColor color(Vertex a, Vertex b) const {
    std::uint32_t ai = checked(a), bi = checked(b);
    if (ai == bi) return EdgeColor::kNone;
    auto r = rows(bi, 0);
    return class_color(mem(ai), r);
  }

  MergeResult merge(Vertex u, Vertex v) {
    auto [wi, di] = checked_pair(u, v);
    auto ru = rows(wi, 0), rv = rows(di, 2);
    const std::size_t merged_size = mem(wi).size() + mem(di).size();
    std::vector<Word> any_w, all_w;
    if (merged_size >= cache_min_) {
      any_w.resize(words_);
      all_w.resize(words_);
      for (std::size_t k = 0; k < words_; ++k) {
        any_w[k] = ru.any[k] | rv.any[k];
        all_w[k] = ru.all[k] & rv.all[k];
      }
    }
    std::size_t rdeg_w = scan(wi, di, ru, rv, [&](std::uint32_t x, int delta) { bump(x, delta); });

    unhist(wi);
    unhist(di);
    std::uint32_t big = list_[wi], small = list_[di];
    if (members_[big].size() < members_[small].size()) std::swap(big, small);
    for (auto x : members_[small]) {
      owner_[x] = big;
      members_[big].push_back(x);
    }
    std::vector<std::uint32_t>().swap(members_[small]);
    list_[wi] = big;
    list_[di] = kNone;
    label_of_list_[big] = wi;
    label_of_list_[small] = kNone;
    single_.reset(wi);
    single_.reset(di);
    alive_.reset(di);
    drop_multi(di);
    add_multi(wi);
    cache_.erase(di);
    if (merged_size >= cache_min_) cache_[wi] = Cached{std::move(any_w), std::move(all_w)};
    --classes_;
    rdeg_[wi] = static_cast<std::uint32_t>(rdeg_w);
    ++hist_[rdeg_w];
    max_ = std::max(max_, rdeg_w);
    while (max_ > 0 && hist_[max_] == 0) --max_;
    return {static_cast<Vertex>(wi + 1), rdeg_w, max_};
  }

  // Outcome of merge(u, v) without changing any state.
  MergeResult preview(Vertex u, Vertex v) const {
    auto [wi, di] = checked_pair(u, v);
    auto ru = rows(wi, 0), rv = rows(di, 2);

    auto count_at = [&](std::size_t lvl) {
      std::size_t c = hist_[lvl];
      if (rdeg_[wi] == lvl) --c;
      if (rdeg_[di] == lvl) --c;
      return c;
    };
    std::size_t top = max_;
    bool others = false;
    for (std::size_t lvl = max_ + 1; lvl-- > 0;) {
      if (count_at(lvl) > 0) {
        top = lvl;
        others = true;
        break;
      }
    }
    bool plus_at_top = false, plus_below_top = false;
    std::size_t minus_at_top = 0;
    std::size_t rdeg_w = scan(wi, di, ru, rv, [&](std::uint32_t x, int delta) {
      if (!others) return;
      std::size_t r = rdeg_[x];
      if (delta > 0 && r == top) plus_at_top = true;
      if (delta > 0 && top > 0 && r == top - 1) plus_below_top = true;
      if (delta < 0 && r == top) ++minus_at_top;
    });
    std::size_t rest = 0;
    if (others) {
      if (plus_at_top) rest = top + 1;
      else if (minus_at_top < count_at(top) || plus_below_top) rest = top;
      else rest = top - 1;
    }
    return {static_cast<Vertex>(wi + 1), rdeg_w, std::max(rdeg_w, rest)};
  }

  // Materialises G/Π as a trigraph (classes keep their labels).
  Trigraph to_trigraph() const {
    Trigraph h(n_);
    for (std::size_t i = 0; i < n_; ++i)
      if (!alive_.test(i)) h.remove_vertex(static_cast<Vertex>(i + 1));
    auto labels = class_labels();
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (std::size_t j = i + 1; j < labels.size(); ++j) h.set_color(labels[i], labels[j], color(labels[i], labels[j]));
    return h;
  }

 private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  struct RowView {
    std::span<const Word> any;
    std::span<const Word> all;
  };
  struct Cached {
    std::vector<Word> any;
    std::vector<Word> all;
  };

  const std::vector<std::uint32_t>& mem(std::uint32_t label) const { return members_[list_[label]]; }

  std::uint32_t checked(Vertex label) const {
    if (!is_class(label)) throw std::invalid_argument("vertex " + std::to_string(label) + " is not alive");
    return label - 1;
  }

  std::pair<std::uint32_t, std::uint32_t> checked_pair(Vertex u, Vertex v) const {
    std::uint32_t ui = checked(u), vi = checked(v);
    if (ui == vi) throw std::invalid_argument("cannot contract vertex " + std::to_string(u) + " with itself");
    return {std::min(ui, vi), std::max(ui, vi)};
  }

  RowView rows(std::uint32_t c, std::size_t slot) const {
    const auto& m = mem(c);
    if (m.size() == 1) {
      auto r = g_->black_row(m.front() + 1);
      return {r, r};
    }
    if (auto it = cache_.find(c); it != cache_.end()) return {it->second.any, it->second.all};
    auto& any = buf_[slot];
    auto& all = buf_[slot + 1];
    auto first = g_->black_row(m.front() + 1);
    std::copy(first.begin(), first.end(), any.begin());
    std::copy(first.begin(), first.end(), all.begin());
    for (std::size_t t = 1; t < m.size(); ++t) {
      auto r = g_->black_row(m[t] + 1);
      for (std::size_t k = 0; k < words_; ++k) {
        any[k] |= r[k];
        all[k] &= r[k];
      }
    }
    return {any, all};
  }

  static EdgeColor class_color(const std::vector<std::uint32_t>& xs, const RowView& r) {
    bool not_black = false, not_absent = false;
    for (auto x : xs) {
      if (!test_bit(r.all, x)) not_black = true;
      if (test_bit(r.any, x)) not_absent = true;
      if (not_black && not_absent) return EdgeColor::kRed;
    }
    return not_black ? EdgeColor::kNone : EdgeColor::kBlack;
  }

  // Red degree of the merged class; reports each other class whose red degree changes.
  template <class OnDelta>
  std::size_t scan(std::uint32_t wi, std::uint32_t di, const RowView& ru, const RowView& rv, OnDelta&& on_delta) const {
    std::size_t rdeg_w = 0;
    auto single = single_.words();
    for (std::size_t k = 0; k < words_; ++k) {
      Word s = single[k];
      if (k == (wi >> 6)) s &= ~(Word{1} << (wi & 63));
      if (k == (di >> 6)) s &= ~(Word{1} << (di & 63));
      if (!s) continue;
      Word red_u = ru.any[k] & ~ru.all[k];
      Word red_v = rv.any[k] & ~rv.all[k];
      Word red_w = (ru.any[k] | rv.any[k]) & ~(ru.all[k] & rv.all[k]);
      rdeg_w += static_cast<std::size_t>(std::popcount(red_w & s));
      for_each_bit(red_w & ~red_u & ~red_v & s, k * 64, [&](std::size_t x) { on_delta(static_cast<std::uint32_t>(x), +1); });
      for_each_bit(red_u & red_v & s, k * 64, [&](std::size_t x) { on_delta(static_cast<std::uint32_t>(x), -1); });
    }
    for (auto x : multi_) {
      if (x == wi || x == di) continue;
      EdgeColor cu = class_color(mem(x), ru), cv = class_color(mem(x), rv);
      bool red_w = !((cu == EdgeColor::kBlack && cv == EdgeColor::kBlack) || (cu == EdgeColor::kNone && cv == EdgeColor::kNone));
      int delta = (red_w ? 1 : 0) - (cu == EdgeColor::kRed ? 1 : 0) - (cv == EdgeColor::kRed ? 1 : 0);
      rdeg_w += red_w ? 1 : 0;
      if (delta != 0) on_delta(x, delta);
    }
    return rdeg_w;
  }

  void bump(std::uint32_t x, int delta) {
    --hist_[rdeg_[x]];
    rdeg_[x] = static_cast<std::uint32_t>(static_cast<int>(rdeg_[x]) + delta);
    ++hist_[rdeg_[x]];
    if (rdeg_[x] > max_) max_ = rdeg_[x];
  }

  void unhist(std::uint32_t x) { --hist_[rdeg_[x]]; }

  void add_multi(std::uint32_t x) {
    if (multi_pos_[x] != kNone) return;
    multi_pos_[x] = static_cast<std::uint32_t>(multi_.size());
    multi_.push_back(x);
  }

  void drop_multi(std::uint32_t x) {
    std::uint32_t pos = multi_pos_[x];
    if (pos == kNone) return;
    std::uint32_t last = multi_.back();
    multi_[pos] = last;
    multi_pos_[last] = pos;
    multi_.pop_back();
    multi_pos_[x] = kNone;
  }

  const Trigraph* g_;
  std::size_t n_;
  std::size_t words_;
  std::size_t cache_min_;
  std::vector<std::vector<std::uint32_t>> members_;  // indexed by list id
  std::vector<std::uint32_t> owner_;      // vertex -> member list
  std::vector<std::uint32_t> list_;       // class label -> member list
  std::vector<std::uint32_t> label_of_list_;
  std::vector<std::uint32_t> multi_;
  std::vector<std::uint32_t> multi_pos_;
  std::vector<std::uint32_t> rdeg_;
  std::vector<std::size_t> hist_;
  std::size_t max_ = 0;
  std::size_t classes_ = 0;
  Bitset single_;
  Bitset alive_;
  std::unordered_map<std::uint32_t, Cached> cache_;
  mutable std::vector<std::vector<Word>> buf_;
};

}  // namespace tww
