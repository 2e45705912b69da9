#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "quotient_tracker.hpp"
#include "trigraph.hpp"

namespace tww {

struct ContractionStep {
  Vertex u = 0;
  Vertex v = 0;
  friend bool operator==(const ContractionStep&, const ContractionStep&) = default;
};

struct ContractionSequence {
  std::vector<ContractionStep> steps;

  std::size_t size() const noexcept { return steps.size(); }
  bool empty() const noexcept { return steps.empty(); }
  void push(Vertex u, Vertex v) { steps.push_back({u, v}); }
  friend bool operator==(const ContractionSequence&, const ContractionSequence&) = default;
};

// A step that cannot be replayed; step() is 1-based.
class SequenceError : public std::invalid_argument {
 public:
  SequenceError(std::size_t step, const std::string& what)
      : std::invalid_argument("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

struct SequenceTrace {
  std::size_t n = 0;                    // vertices alive before the first step
  std::vector<Vertex> initial_vertices;
  std::size_t initial_max_red_degree = 0;
  std::vector<ContractionStep> steps;
  std::vector<std::size_t> merged_red_degree;
  std::vector<std::size_t> max_red_degree;
  std::size_t width = 0;
  bool complete = false;                // reached a single vertex
  bool size_identity_holds = true;      // sum_i i*C_{s,i} == n at every step
};

enum class ReplayEngine { kAuto, kQuotient, kDirect };

namespace detail {

class SizeHistogram {
 public:
  explicit SizeHistogram(std::size_t n) { counts_[1] = n; }
  void merge(std::size_t a, std::size_t b) {
    drop(a);
    drop(b);
    ++counts_[a + b];
  }
  std::size_t weighted_sum() const {
    std::size_t s = 0;
    for (auto [size, count] : counts_) s += size * count;
    return s;
  }

 private:
  void drop(std::size_t size) {
    auto it = counts_.find(size);
    if (--it->second == 0) counts_.erase(it);
  }
  std::map<std::size_t, std::size_t> counts_;
};

}  // namespace detail

inline SequenceTrace apply_sequence(const Trigraph& g, const ContractionSequence& seq, ReplayEngine engine = ReplayEngine::kAuto) {
  if (engine == ReplayEngine::kAuto) engine = g.is_plain() ? ReplayEngine::kQuotient : ReplayEngine::kDirect;
  if (engine == ReplayEngine::kQuotient && !g.is_plain()) throw std::invalid_argument("quotient replay needs a graph without red edges");

  SequenceTrace t;
  t.initial_vertices = g.alive_vertices();
  t.n = t.initial_vertices.size();
  t.initial_max_red_degree = g.max_red_degree();
  t.width = t.initial_max_red_degree;
  t.steps = seq.steps;
  t.merged_red_degree.reserve(seq.size());
  t.max_red_degree.reserve(seq.size());

  detail::SizeHistogram hist(t.n);
  std::vector<std::size_t> size(g.order() + 1, 1);
  std::size_t alive = t.n;
  auto check_step = [&](std::size_t pos, const ContractionStep& st, auto&& is_alive) {
    if (st.u == st.v) throw SequenceError(pos, "pair (" + std::to_string(st.u) + "," + std::to_string(st.v) + ") is not two distinct vertices");
    for (Vertex x : {st.u, st.v})
      if (!is_alive(x)) throw SequenceError(pos, "vertex " + std::to_string(x) + " is not alive");
  };
  auto record = [&](const ContractionStep& st, std::size_t merged, std::size_t max_r) {
    Vertex w = std::min(st.u, st.v), d = std::max(st.u, st.v);
    hist.merge(size[w], size[d]);
    size[w] += size[d];
    size[d] = 0;
    --alive;
    if (hist.weighted_sum() != t.n) t.size_identity_holds = false;
    t.merged_red_degree.push_back(merged);
    t.max_red_degree.push_back(max_r);
    t.width = std::max(t.width, max_r);
  };

  if (engine == ReplayEngine::kQuotient) {
    QuotientTracker q(g);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const auto& st = seq.steps[i];
      check_step(i + 1, st, [&](Vertex x) { return q.is_class(x); });
      auto r = q.merge(st.u, st.v);
      record(st, r.merged_red_degree, r.max_red_degree);
    }
  } else {
    Trigraph h = g;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const auto& st = seq.steps[i];
      check_step(i + 1, st, [&](Vertex x) { return h.is_alive(x); });
      Vertex w = h.contract_in_place(st.u, st.v);
      record(st, h.red_degree(w), h.max_red_degree());
    }
  }
  t.complete = alive == 1;
  return t;
}

inline bool verify_width(const Trigraph& g, const ContractionSequence& seq, std::size_t d) {
  auto t = apply_sequence(g, seq);
  return t.complete && t.width <= d;
}

// C_{s,i}: class sizes after the first s-1 steps (s = 1 is the initial graph).
inline std::map<std::size_t, std::size_t> class_histogram(const SequenceTrace& t, std::size_t s) {
  if (s < 1 || s > t.steps.size() + 1)
    throw std::out_of_range("step index " + std::to_string(s) + " outside [1, " + std::to_string(t.steps.size() + 1) + "]");
  std::map<Vertex, std::size_t> size;
  for (Vertex v : t.initial_vertices) size[v] = 1;
  for (std::size_t i = 0; i + 1 < s; ++i) {
    Vertex w = std::min(t.steps[i].u, t.steps[i].v), d = std::max(t.steps[i].u, t.steps[i].v);
    size[w] += size[d];
    size.erase(d);
  }
  std::map<std::size_t, std::size_t> hist;
  for (auto [v, sz] : size) ++hist[sz];
  return hist;
}

inline void write_sequence(std::ostream& out, const ContractionSequence& seq) {
  for (const auto& st : seq.steps) out << st.u << ' ' << st.v << '\n';
}

inline void write_sequence(const std::string& path, const ContractionSequence& seq) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_sequence(out, seq);
}

inline ContractionSequence read_sequence(std::istream& in) {
  ContractionSequence seq;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long long u = 0, v = 0;
    std::string extra;
    if (!(ls >> u >> v) || (ls >> extra)) throw ParseError(lineno, "expected 'u v', got '" + line + "'");
    if (u < 1 || v < 1 || u > UINT32_MAX || v > UINT32_MAX) throw ParseError(lineno, "vertex out of range");
    if (u == v) throw ParseError(lineno, "self-pair " + std::to_string(u) + " " + std::to_string(v));
    seq.push(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  return seq;
}

inline ContractionSequence read_sequence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_sequence(in);
}

inline void write_trace_csv(std::ostream& out, const SequenceTrace& t) {
  out << "step,u,v,merged_rdeg,max_rdeg\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i)
    out << i + 1 << ',' << t.steps[i].u << ',' << t.steps[i].v << ',' << t.merged_red_degree[i] << ',' << t.max_red_degree[i] << '\n';
}

// Completes a partial sequence by merging the two smallest remaining labels.
inline void finish_arbitrarily(std::vector<Vertex> alive, ContractionSequence& seq) {
  std::sort(alive.begin(), alive.end());
  for (std::size_t i = 1; i < alive.size(); ++i) seq.push(alive.front(), alive[i]);
}

}  // namespace tww
