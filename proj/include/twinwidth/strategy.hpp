#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "contraction.hpp"
#include "numerics.hpp"
#include "quotient_tracker.hpp"
#include "trigraph.hpp"

namespace tww {

struct StrategyParams {
  std::size_t n = 0;
  double p = 0.5, q = 0.5, eps = 0.0, delta = 0.0;
  double alpha = 0.0;
  std::size_t m = 0;  // |B|, B = [1, m]
  std::size_t a = 0;
  std::size_t s = 0;
  std::size_t r = 0;
  double c = 0.0, ell = 0.0;
  double lambda1 = 0, lambda2 = 0, lambda2_prime = 0, lambda3 = 0;
  double mu1 = 0, mu2 = 0, rho2 = 0, rho3 = 0, nu2 = 0, nu3 = 0, nu4 = 0;
  std::array<double, 8> eight{};  // the eight width terms (a)..(h)
  double bound = 0.0;             // their maximum

  std::size_t a_count() const noexcept { return n - m; }
};

namespace detail {

// floor that tolerates values a few ulps below an integer.
inline std::size_t robust_floor(double x) { return static_cast<std::size_t>(std::floor(x + 1e-9 * std::max(1.0, std::fabs(x)))); }

}  // namespace detail

inline StrategyParams schedule_params(std::size_t n, double p, double eps, double delta) {
  detail::require(p > 0.0 && p < 1.0, "0 < p < 1");
  detail::require(eps > 0.0 && eps < 0.5, "0 < eps < 1/2");
  detail::require(delta > 0.0 && delta < 1.0, "0 < delta < 1");
  detail::require(n >= 4, "n >= 4");
  StrategyParams P;
  const double dn = static_cast<double>(n);
  P.n = n;
  P.p = p;
  P.q = 1.0 - p;
  P.eps = eps;
  P.delta = delta;
  P.alpha = alpha(p);
  const double pq = p * P.q;
  const double n_pow = std::pow(dn, 1.0 - delta);
  P.m = n - detail::robust_floor(n_pow);
  P.a = detail::robust_floor(P.alpha * dn);
  P.s = detail::robust_floor(std::pow(dn, 0.5 + eps));
  P.r = (P.m + P.a) / 2;

  const std::string at = " (n=" + std::to_string(n) + ", m=" + std::to_string(P.m) + ", a=" + std::to_string(P.a) +
                         ", s=" + std::to_string(P.s) + ")";
  detail::require(2 * P.a <= P.m, "2a <= m" + at);
  detail::require(P.m <= 3 * P.a, "m <= 3a" + at);
  detail::require(2.0 * P.alpha * dn <= static_cast<double>(P.m), "2*alpha*n <= m" + at);
  detail::require(P.m + 2 * P.s <= n, "m <= n - 2s" + at);

  const double dm = static_cast<double>(P.m), ds = static_cast<double>(P.s);
  P.c = std::sqrt(2.0 * pq * (1.0 - 2.0 * pq) * (3.0 - 6.0 * eps - 4.0 * delta));
  P.ell = 2.0 * std::sqrt(dn);
  const double slack = std::pow(dn, 0.5 + eps / 2.0);
  P.lambda1 = 2.0 * pq * dm - P.c * std::sqrt(dm * std::log(dm));
  P.lambda2 = 2.0 * pq * n_pow + std::sqrt(dn);
  P.lambda2_prime = 2.0 * pq * n_pow - 2.0 * pq * pq * ds + std::sqrt(dn);
  P.lambda3 = pq * dn + std::pow(dn, 0.5 + eps);
  P.mu1 = pq * dm + slack;
  P.mu2 = 2.0 * pq * dm + slack;
  P.rho2 = 2.0 * pq * (n_pow - 2.0 * ds) + one_minus_powers(p, 4) * ds + slack;
  P.rho3 = 3.0 * pq * (n_pow - 2.0 * ds) + one_minus_powers(p, 6) * ds + slack;
  P.nu2 = 2.0 * pq * dm + slack;
  P.nu3 = 2.0 * pq * dn - 3.0 * pq * n_pow + slack;
  P.nu4 = (one_minus_powers(p, 8) * (3.0 * P.alpha - 1.0) + one_minus_powers(p, 12) * (1.0 - 2.0 * P.alpha)) * dn + slack;

  const double l3 = 3.0 * P.ell;
  P.eight = {dn - ds - static_cast<double>(P.r) + l3,
             ds + P.mu1,
             P.lambda1 + P.lambda2,
             P.lambda2_prime + P.mu2 + l3,
             ds + P.lambda3,
             P.rho2 + P.nu2 + l3,
             P.rho3 + P.nu3 + l3,
             dn - dm - ds + P.nu4 + l3};
  P.bound = *std::max_element(P.eight.begin(), P.eight.end());
  return P;
}

namespace detail {

inline void require_bset_args(std::size_t m, std::size_t a, std::size_t i) {
  if (!(2 * a <= m && m <= 3 * a)) throw PreconditionError("precondition violated: 2a <= m <= 3a (m=" + std::to_string(m) + ", a=" + std::to_string(a) + ")");
  if (i < 1 || i > (m + a) / 2)
    throw std::out_of_range("index " + std::to_string(i) + " outside [1, " + std::to_string((m + a) / 2) + "]");
}

}  // namespace detail

// B^{m,a}_i, sorted.
inline std::vector<Vertex> b_set(std::size_t m, std::size_t a, std::size_t i) {
  detail::require_bset_args(m, a, i);
  std::vector<Vertex> out;
  if (i <= a) {
    out = {static_cast<Vertex>(2 * i - 1), static_cast<Vertex>(2 * i)};
  } else if (i <= m - a) {
    out = b_set(m, a, i - a);
    out.push_back(static_cast<Vertex>(2 * a + (i - a)));
  } else {
    std::size_t j = (m - 2 * a) + 2 * (i - (m - a)) - 1;
    out = b_set(m, a, j);
    auto other = b_set(m, a, j + 1);
    out.insert(out.end(), other.begin(), other.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Maximal sets among B_1, ..., B_i, ordered by their minimum.
inline std::vector<std::vector<Vertex>> b_family(std::size_t m, std::size_t a, std::size_t i) {
  detail::require_bset_args(m, a, i);
  const std::size_t b = m - 2 * a;
  std::vector<char> absorbed(a + 1, 0);
  std::vector<std::vector<Vertex>> out;
  for (std::size_t k = a + 1; k <= std::min(i, m - a); ++k) absorbed[k - a] = 1;
  for (std::size_t k = m - a + 1; k <= i; ++k) {
    std::size_t j = b + 2 * (k - (m - a)) - 1;
    absorbed[j] = absorbed[j + 1] = 1;
  }
  for (std::size_t k = 1; k <= i; ++k)
    if (k > a || !absorbed[k]) out.push_back(b_set(m, a, k));
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
  return out;
}

// Which vertices a chosen pair (u, v) removes from further consideration besides u and v.
enum class PartnerRule {
  kEither,  // any w with r(u, w) or r(v, w) below threshold
  kBoth,    // any w with both r(u, w) and r(v, w) below threshold
  kNone,    // only u and v
};

struct APairSelection {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  bool shortfall = false;
  std::uint64_t low_pair_count = 0;  // pairs in A with r <= threshold
};

// Bipartite r(u, v) = |(N(u) xor N(v)) ∩ B| for u, v in A, via compacted rows over B.
class BipartiteRows {
 public:
  BipartiteRows(const Trigraph& g, const std::vector<Vertex>& a_side, const std::vector<Vertex>& b_side)
      : a_(a_side), words_(words_for(b_side.size())), rows_(a_side.size() * words_, 0) {
    std::vector<char> in_a(g.order() + 1, 0);
    for (Vertex v : a_side) {
      g.require_alive(v);
      in_a[v] = 1;
    }
    for (Vertex v : b_side) {
      g.require_alive(v);
      if (in_a[v]) throw std::invalid_argument("sides overlap at vertex " + std::to_string(v));
    }
    bool prefix = true;
    for (std::size_t j = 0; j < b_side.size(); ++j) prefix = prefix && b_side[j] == j + 1;
    for (std::size_t t = 0; t < a_side.size(); ++t) {
      auto src = g.black_row(a_side[t]);
      Word* dst = rows_.data() + t * words_;
      if (prefix) {
        std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(words_), dst);
        if (b_side.size() % 64) dst[words_ - 1] &= (Word{1} << (b_side.size() % 64)) - 1;
      } else {
        for (std::size_t j = 0; j < b_side.size(); ++j)
          if (test_bit(src, b_side[j] - 1)) dst[j >> 6] |= Word{1} << (j & 63);
      }
    }
  }

  std::size_t size() const noexcept { return a_.size(); }
  Vertex label(std::size_t t) const { return a_[t]; }

  std::size_t r(std::size_t s, std::size_t t) const {
    const Word* x = rows_.data() + s * words_;
    const Word* y = rows_.data() + t * words_;
    std::size_t c = 0;
    for (std::size_t k = 0; k < words_; ++k) c += static_cast<std::size_t>(std::popcount(x[k] ^ y[k]));
    return c;
  }

 private:
  std::vector<Vertex> a_;
  std::size_t words_;
  std::vector<Word> rows_;
};

// Greedily picks disjoint pairs in A with bipartite r <= threshold, in ascending (r, u, v) order.
inline APairSelection select_a_pairs(const Trigraph& g, const std::vector<Vertex>& a_side, const std::vector<Vertex>& b_side,
                                     std::size_t target, double threshold, PartnerRule rule = PartnerRule::kEither) {
  if (!g.is_plain()) throw std::invalid_argument("select_a_pairs needs a graph without red edges");
  BipartiteRows rows(g, a_side, b_side);
  const std::size_t k = rows.size();
  std::vector<std::tuple<std::size_t, std::uint32_t, std::uint32_t>> low;  // (r, s, t) with s < t in label order
  std::vector<std::size_t> order(k);
  for (std::size_t t = 0; t < k; ++t) order[t] = t;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return rows.label(x) < rows.label(y); });
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      std::size_t r = rows.r(order[i], order[j]);
      if (static_cast<double>(r) <= threshold) low.emplace_back(r, static_cast<std::uint32_t>(order[i]), static_cast<std::uint32_t>(order[j]));
    }
  APairSelection out;
  out.low_pair_count = low.size();
  std::sort(low.begin(), low.end(), [&](const auto& x, const auto& y) {
    return std::make_tuple(std::get<0>(x), rows.label(std::get<1>(x)), rows.label(std::get<2>(x))) <
           std::make_tuple(std::get<0>(y), rows.label(std::get<1>(y)), rows.label(std::get<2>(y)));
  });
  std::vector<std::vector<std::uint32_t>> partners(k);
  if (rule != PartnerRule::kNone)
    for (const auto& [r, s, t] : low) {
      partners[s].push_back(t);
      partners[t].push_back(s);
    }
  std::vector<char> removed(k, 0);
  for (const auto& [r, s, t] : low) {
    if (out.pairs.size() >= target) break;
    if (removed[s] || removed[t]) continue;
    out.pairs.emplace_back(rows.label(s), rows.label(t));
    removed[s] = removed[t] = 1;
    if (rule == PartnerRule::kEither) {
      for (auto w : partners[s]) removed[w] = 1;
      for (auto w : partners[t]) removed[w] = 1;
    } else if (rule == PartnerRule::kBoth) {
      std::vector<char> near_s(k, 0);
      for (auto w : partners[s]) near_s[w] = 1;
      for (auto w : partners[t])
        if (near_s[w]) removed[w] = 1;
    }
  }
  out.shortfall = out.pairs.size() < target;
  return out;
}

// A-side context for frozen-class detection: the partition of A after the pair phase.
struct ASidePartition {
  Bitset singles;                                  // A vertices not in a selected pair
  std::vector<std::pair<Vertex, Vertex>> pairs;

  ASidePartition(const Trigraph& g, const std::vector<Vertex>& a_side, const std::vector<std::pair<Vertex, Vertex>>& chosen)
      : singles(g.order()), pairs(chosen) {
    for (Vertex v : a_side) singles.set(v - 1);
    for (auto [u, v] : chosen) {
      singles.reset(u - 1);
      singles.reset(v - 1);
    }
  }
};

// Red degree of the B-side class S in G[A, B] quotiented by the A-side partition.
inline std::size_t a_side_red_degree(const Trigraph& g, const ASidePartition& ap, const std::vector<Vertex>& s) {
  const std::size_t words = g.stride();
  std::vector<Word> any(words, 0), all(words, ~Word{0});
  for (Vertex x : s) {
    auto row = g.black_row(x);
    for (std::size_t k = 0; k < words; ++k) {
      any[k] |= row[k];
      all[k] &= row[k];
    }
  }
  std::size_t red = 0;
  auto single = ap.singles.words();
  for (std::size_t k = 0; k < words; ++k) red += static_cast<std::size_t>(std::popcount(any[k] & ~all[k] & single[k]));
  for (auto [u, v] : ap.pairs) {
    bool black = test_bit(all, u - 1) && test_bit(all, v - 1);
    bool none = !test_bit(any, u - 1) && !test_bit(any, v - 1);
    if (!black && !none) ++red;
  }
  return red;
}

struct FrozenClass {
  std::vector<Vertex> members;
  std::size_t step = 0;  // B-step at which the breach was found
  std::size_t a_side_red_degree = 0;
  double threshold = 0.0;
};

struct FrozenReport {
  std::vector<FrozenClass> frozen;
  std::size_t frozen_vertices = 0;  // |L|
};

// Classes of size 2 or 3 whose A-side red degree exceeds slack * rho_{|S|}.
inline FrozenReport detect_frozen(const Trigraph& g, const ASidePartition& ap, const std::vector<std::vector<Vertex>>& classes, double rho2,
                                  double rho3, double slack = 1.1, std::size_t step = 0) {
  FrozenReport rep;
  for (const auto& cls : classes) {
    if (cls.size() != 2 && cls.size() != 3) continue;
    double thr = slack * (cls.size() == 2 ? rho2 : rho3);
    std::size_t rd = a_side_red_degree(g, ap, cls);
    if (static_cast<double>(rd) > thr) {
      rep.frozen.push_back({cls, step, rd, thr});
      rep.frozen_vertices += cls.size();
    }
  }
  return rep;
}

struct ScheduleOptions {
  double freeze_slack = 1.1;
  PartnerRule partner_rule = PartnerRule::kEither;
  std::optional<double> a_threshold;  // defaults to lambda1
  bool retry_skipped = true;
};

struct SkippedMerge {
  std::size_t step = 0;             // B-step index i
  std::vector<Vertex> target;       // B_i
  Vertex responsible = 0;           // smallest member of the frozen class that blocked it
  bool retried = false;
  bool retry_succeeded = false;
};

struct ScheduleStep {
  int phase = 0;
  Vertex u = 0, v = 0;
  std::size_t merged_red_degree = 0;
  std::size_t max_red_degree = 0;
  std::size_t frozen_count = 0;
};

struct ScheduleTrace {
  StrategyParams params;
  APairSelection a_pairs;
  std::vector<FrozenClass> frozen;
  std::size_t frozen_vertices = 0;
  std::vector<SkippedMerge> skipped;
  std::vector<ScheduleStep> steps;
  std::array<std::size_t, 3> phase_end{};  // contractions completed after phases 1, 2, 3
  std::size_t width = 0;
  bool size_identity_holds = true;
};

namespace detail {

class ScheduleRunner {
 public:
  ScheduleRunner(const Trigraph& g, ScheduleTrace& trace, ContractionSequence& seq)
      : q_(g), trace_(trace), seq_(seq), hist_(g.alive_count()), size_(g.order() + 1, 1), n_(g.alive_count()) {}

  QuotientTracker& tracker() { return q_; }

  void merge(int phase, Vertex u, Vertex v) {
    auto r = q_.merge(u, v);
    Vertex w = std::min(u, v), d = std::max(u, v);
    hist_.merge(size_[w], size_[d]);
    size_[w] += size_[d];
    size_[d] = 0;
    if (hist_.weighted_sum() != n_) trace_.size_identity_holds = false;
    seq_.push(u, v);
    trace_.steps.push_back({phase, u, v, r.merged_red_degree, r.max_red_degree, trace_.frozen.size()});
    trace_.width = std::max(trace_.width, r.max_red_degree);
  }

 private:
  QuotientTracker q_;
  ScheduleTrace& trace_;
  ContractionSequence& seq_;
  SizeHistogram hist_;
  std::vector<std::size_t> size_;
  std::size_t n_;
};

// Splits target into the two current classes it is the union of, if it is.
inline std::optional<std::pair<Vertex, Vertex>> two_class_split(const QuotientTracker& q, const std::vector<Vertex>& target) {
  std::vector<Vertex> labels;
  for (Vertex x : target) {
    Vertex c = q.class_of(x);
    if (std::find(labels.begin(), labels.end(), c) == labels.end()) labels.push_back(c);
  }
  if (labels.size() != 2) return std::nullopt;
  if (q.class_size(labels[0]) + q.class_size(labels[1]) != target.size()) return std::nullopt;
  return std::make_pair(labels[0], labels[1]);
}

}  // namespace detail

// Phase 1 contracts selected A pairs, phase 2 realises B_1, ..., B_r while skipping sets
// that meet a frozen class, phase 3 finishes the remaining classes.
inline std::pair<ContractionSequence, ScheduleTrace> run_paper_schedule(const Trigraph& g, const StrategyParams& params,
                                                                       const ScheduleOptions& opt = {}) {
  if (g.order() != params.n) throw std::invalid_argument("graph has " + std::to_string(g.order()) + " vertices, params expect " + std::to_string(params.n));
  if (g.alive_count() != g.order()) throw std::invalid_argument("schedule needs a graph with every vertex alive");
  if (!g.is_plain()) throw std::invalid_argument("schedule needs a graph without red edges");
  const std::size_t n = params.n, m = params.m, a = params.a;

  ContractionSequence seq;
  ScheduleTrace trace;
  trace.params = params;
  detail::ScheduleRunner run(g, trace, seq);
  auto& q = run.tracker();

  std::vector<Vertex> a_side, b_side;
  for (Vertex v = 1; v <= m; ++v) b_side.push_back(v);
  for (Vertex v = static_cast<Vertex>(m + 1); v <= n; ++v) a_side.push_back(v);

  // Phase 1.
  trace.a_pairs = select_a_pairs(g, a_side, b_side, params.s, opt.a_threshold.value_or(params.lambda1), opt.partner_rule);
  for (auto [u, v] : trace.a_pairs.pairs) run.merge(1, u, v);
  trace.phase_end[0] = seq.size();

  // Phase 2.
  ASidePartition ap(g, a_side, trace.a_pairs.pairs);
  std::vector<std::uint32_t> frozen_of(n + 1, 0);  // 1 + index into trace.frozen
  auto blocked_by = [&](const std::vector<Vertex>& target) -> Vertex {
    for (Vertex x : target)
      if (frozen_of[x]) return trace.frozen[frozen_of[x] - 1].members.front();
    return 0;
  };
  for (std::size_t i = 1; i <= params.r; ++i) {
    auto target = b_set(m, a, i);
    if (Vertex blocker = blocked_by(target)) {
      trace.skipped.push_back({i, target, blocker, false, false});
      continue;
    }
    auto split = detail::two_class_split(q, target);
    if (!split) throw std::logic_error("B-step " + std::to_string(i) + " does not join two current classes");
    if (target.size() == 2 || target.size() == 3) {
      auto rep = detect_frozen(g, ap, {target}, params.rho2, params.rho3, opt.freeze_slack, i);
      if (!rep.frozen.empty()) {
        trace.frozen.push_back(rep.frozen.front());
        trace.frozen_vertices += target.size();
        for (Vertex x : target) frozen_of[x] = static_cast<std::uint32_t>(trace.frozen.size());
        trace.skipped.push_back({i, target, target.front(), false, false});
        continue;
      }
    }
    run.merge(2, split->first, split->second);
  }
  if (opt.retry_skipped) {
    for (auto& sk : trace.skipped) {
      sk.retried = true;
      auto split = detail::two_class_split(q, sk.target);
      if (!split) continue;
      if (q.preview(split->first, split->second).max_red_degree > trace.width) continue;
      run.merge(2, split->first, split->second);
      sk.retry_succeeded = true;
    }
  }
  trace.phase_end[1] = seq.size();

  // Phase 3: any merge is safe once the class count leaves no room to exceed the running width;
  // otherwise take a greedy step, accepting the first pair that keeps the running width.
  while (q.class_count() > 1) {
    auto labels = q.class_labels();
    if (labels.size() - 2 <= trace.width) {
      run.merge(3, labels[0], labels[1]);
      continue;
    }
    std::size_t best = std::numeric_limits<std::size_t>::max();
    Vertex bu = 0, bv = 0;
    for (std::size_t x = 0; x < labels.size() && best > trace.width; ++x)
      for (std::size_t y = x + 1; y < labels.size() && best > trace.width; ++y) {
        std::size_t w = q.preview(labels[x], labels[y]).max_red_degree;
        if (w < best) {
          best = w;
          bu = labels[x];
          bv = labels[y];
        }
      }
    run.merge(3, bu, bv);
  }
  trace.phase_end[2] = seq.size();
  return {std::move(seq), std::move(trace)};
}

inline void write_schedule_trace_csv(std::ostream& out, const ScheduleTrace& t) {
  out << "phase,step,max_rdeg,frozen_count\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) out << t.steps[i].phase << ',' << i + 1 << ',' << t.steps[i].max_red_degree << ',' << t.steps[i].frozen_count << '\n';
}

}  // namespace tww
