#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "bitset.hpp"
#include "trigraph.hpp"

namespace tww {

// Raised when inputs violate a stated precondition; the message names the inequality.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require(bool ok, const std::string& inequality) {
  if (!ok) throw PreconditionError("precondition violated: " + inequality);
}

inline std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace detail

// 1 - x^k - (1-x)^k, accurate for x near 0 or 1.
inline double one_minus_powers(double x, int k) {
  double s = std::min(x, 1.0 - x);
  return -std::expm1(k * std::log1p(-s)) - std::pow(s, k);
}

inline double alpha(double x) {
  detail::require(x > 0.0 && x < 1.0, "0 < x < 1 (x = " + detail::num(x) + ")");
  double s = std::min(x, 1.0 - x);
  return s * (1.0 - s) / (2.0 * one_minus_powers(x, 3) - one_minus_powers(x, 6));
}

inline double beta(double x) {
  detail::require(x > 0.0 && x < 1.0, "0 < x < 1 (x = " + detail::num(x) + ")");
  double s = std::min(x, 1.0 - x);
  double f8 = one_minus_powers(x, 8), f12 = one_minus_powers(x, 12);
  return (2.0 * s * (1.0 - s) + f8 - f12) / (3.0 * f8 - 2.0 * f12);
}

inline double alpha2(double z) {
  detail::require(z > 0.0 && z < 1.0, "0 < z < 1 (z = " + detail::num(z) + ")");
  return 1.0 / (z * (9.0 - 2.0 * z));
}

// Closed form of beta in z = x(1-x).
inline double beta2(double z) {
  detail::require(z > 0.0 && z < 1.0, "0 < z < 1 (z = " + detail::num(z) + ")");
  double num = ((((2.0 * z - 36.0) * z + 103.0) * z - 96.0) * z + 34.0) * z - 2.0;
  double den = 4.0 * z * ((((z - 18.0) * z + 51.0) * z - 44.0) * z + 12.0);
  return num / den;
}

// Same sign as alpha(x) - beta(x) on (0, 1/2].
inline double alpha_beta_sign_form(double x) {
  double a = alpha(x), f8 = one_minus_powers(x, 8), f12 = one_minus_powers(x, 12);
  return f8 * (3.0 * a - 1.0) + f12 * (1.0 - 2.0 * a) - 2.0 * x * (1.0 - x);
}

inline constexpr double kPStarLow = 0.4012;
inline constexpr double kPStarHigh = 0.4013;

// Root of alpha - beta by bisection on the bracket (0.4012, 0.4013).
inline double p_star(double tol = 1e-12) {
  detail::require(tol > 0.0, "tol > 0");
  double lo = kPStarLow, hi = kPStarHigh;
  // alpha - beta is positive below the root and negative above it.
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (alpha(mid) - beta(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

struct Prediction {
  std::string formula;
  double value = 0.0;
  std::string omitted_terms;
  bool clamped = false;
};

inline Prediction predicted_dense_width(double n, double p) {
  detail::require(p > 0.0 && p < 1.0, "0 < p < 1");
  detail::require(n >= 2.0, "n >= 2");
  double pq = p * (1.0 - p);
  double v = 2.0 * pq * n - std::sqrt(6.0 * pq * (1.0 - 2.0 * pq) * n * std::log(n));
  return {"2pqn - sqrt(6pq(1-2pq) n ln n)", v, "o(sqrt(n log n))", false};
}

// Default slack g(n) = n^0.55 for the dense lower bound.
inline double default_slack(double n) { return std::pow(n, 0.55); }

inline Prediction predicted_lower_dense(double n, double p, double g) {
  detail::require(p > 0.0 && p < 1.0, "0 < p < 1");
  detail::require(n > 2.0, "n > 2");
  double pq = p * (1.0 - p);
  double v = 2.0 * pq * (n - 2.0) - std::sqrt(6.0 * pq * (1.0 - 2.0 * pq) * (n - 2.0) * std::log(n)) - g;
  return {"2pq(n-2) - sqrt(6pq(1-2pq)(n-2) ln n) - g(n)", v, "none; g(n) supplied = " + detail::num(g), false};
}

inline Prediction predicted_sparse_upper(double m_edges) {
  detail::require(m_edges >= 2.0, "m >= 2");
  double q = std::pow(m_edges, 0.25);
  double v = std::sqrt(3.0 * m_edges) + q * std::sqrt(std::log(m_edges)) / (4.0 * std::pow(3.0, 0.25)) + 1.5 * q;
  return {"sqrt(3m) + m^(1/4) sqrt(ln m) / (4 3^(1/4)) + 3 m^(1/4) / 2", v, "none", false};
}

inline Prediction predicted_sparse_lower(double n, double p, double delta) {
  detail::require(delta > 0.0 && delta <= 4.0 / 7.0, "0 < delta <= 4/7");
  detail::require(n >= 1.0, "n >= 1");
  detail::require(p >= 1.0 / n && p <= 0.5, "1/n <= p <= 1/2");
  double v = (1.0 - delta) * n * p - 4.0 * (1.0 - delta) / delta;
  Prediction out{"(1-delta) n p - 4(1-delta)/delta", v, "holds with high probability only", false};
  if (v < 0.0) {
    out.value = 0.0;
    out.clamped = true;
  }
  return out;
}

// log C(n, k) p^k (1-p)^(n-k) for 0 < p < 1.
inline double log_binom_term(std::uint64_t n, std::uint64_t k, double p) {
  double dn = static_cast<double>(n), dk = static_cast<double>(k);
  return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0) + dk * std::log(p) + (dn - dk) * std::log1p(-p);
}

namespace detail {

inline double log_sum_terms(std::uint64_t n, double p, std::uint64_t lo, std::uint64_t hi) {
  double mx = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  terms.reserve(hi - lo + 1);
  for (std::uint64_t i = lo; i <= hi; ++i) {
    terms.push_back(log_binom_term(n, i, p));
    mx = std::max(mx, terms.back());
  }
  double s = 0.0;
  for (double t : terms) s += std::exp(t - mx);
  return std::min(1.0, std::exp(mx + std::log(s)));
}

}  // namespace detail

// Pr[Bin(n, p) <= k].
inline double exact_binom_cdf(std::uint64_t n, double p, std::uint64_t k) {
  detail::require(p >= 0.0 && p <= 1.0, "0 <= p <= 1");
  detail::require(k <= n, "0 <= k <= n");
  if (k == n || p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;
  return detail::log_sum_terms(n, p, 0, k);
}

// Pr[Bin(n, p) >= k].
inline double exact_binom_sf(std::uint64_t n, double p, std::uint64_t k) {
  detail::require(p >= 0.0 && p <= 1.0, "0 <= p <= 1");
  detail::require(k <= n + 1, "k <= n + 1");
  if (k == 0) return 1.0;
  if (k > n || p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  return detail::log_sum_terms(n, p, k, n);
}

struct TailBoundQuery {
  std::uint64_t n = 0;
  double p = 0.5;
  double eps = 0.0;
};

// Upper bound on Pr[X <= (p - eps) n]; requires 0 < eps <= 3p/10.
inline double binom_upper_bound(const TailBoundQuery& q) {
  detail::require(q.p > 0.0 && q.p < 1.0, "0 < p < 1");
  detail::require(q.eps > 0.0, "0 < eps");
  detail::require(q.eps <= 0.3 * q.p, "eps <= 3p/10");
  double pq = q.p * (1.0 - q.p), n = static_cast<double>(q.n), e = q.eps;
  return std::exp(-n * e * e / (2.0 * pq) + n * e * e * e / (2.0 * pq * pq));
}

// Lower bound on Pr[X <= (p - eps) n]; requires n >= 4 and 1/sqrt(n) <= eps <= min(p/2, 1-p).
inline double binom_lower_bound(const TailBoundQuery& q) {
  detail::require(q.p > 0.0 && q.p < 1.0, "0 < p < 1");
  detail::require(q.n >= 4, "n >= 4");
  double n = static_cast<double>(q.n), e = q.eps, pq = q.p * (1.0 - q.p);
  detail::require(e >= 1.0 / std::sqrt(n), "eps >= 1/sqrt(n)");
  detail::require(e <= std::min(q.p / 2.0, 1.0 - q.p), "eps <= min(p/2, 1-p)");
  double expo = -n * e * e / (2.0 * pq) - 3.0 * std::sqrt(n * e * e) / (2.0 * pq) - 4.0 * n * e * e * e / (pq * pq);
  return std::exp(expo) / (2.0 * std::sqrt(2.0));
}

inline bool upper_bound_applies(const TailBoundQuery& q) { return q.p > 0.0 && q.p < 1.0 && q.eps > 0.0 && q.eps <= 0.3 * q.p; }

inline bool lower_bound_applies(const TailBoundQuery& q) {
  return q.p > 0.0 && q.p < 1.0 && q.n >= 4 && q.eps >= 1.0 / std::sqrt(static_cast<double>(q.n)) && q.eps <= std::min(q.p / 2.0, 1.0 - q.p);
}

// The largest k with k <= (p - eps) n, guarding against rounding just below an integer.
inline std::uint64_t tail_cutoff(const TailBoundQuery& q) {
  double x = (q.p - q.eps) * static_cast<double>(q.n);
  if (x < 0.0) return 0;
  return static_cast<std::uint64_t>(std::floor(x + 1e-9 * std::max(1.0, x)));
}

inline double kl_div(double x, double y) {
  detail::require(x >= 0.0 && x <= 1.0, "0 <= x <= 1");
  detail::require(y > 0.0 && y < 1.0, "0 < y < 1");
  double a = x == 0.0 ? 0.0 : x * std::log(x / y);
  double b = x == 1.0 ? 0.0 : (1.0 - x) * std::log((1.0 - x) / (1.0 - y));
  return a + b;
}

struct LemmaCheck {
  std::string lemma;
  std::string instance;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct PqLemmaReport {
  std::size_t checks = 0;
  std::vector<LemmaCheck> violations;
  double min_slack = std::numeric_limits<double>::infinity();  // smallest rhs - lhs
  double max_slack = -std::numeric_limits<double>::infinity();
  bool ok() const { return violations.empty(); }
};

// Non-strict inequalities allow 1e-12 for rounding, since several hold with equality.
inline PqLemmaReport check_pq_lemmas(double p, int k_max) {
  detail::require(p >= 0.0 && p <= 1.0, "0 <= p <= 1");
  detail::require(k_max >= 2, "k_max >= 2");
  constexpr double kTol = 1e-12;
  PqLemmaReport r;
  const double pq = p * (1.0 - p);
  auto f = [&](int k) { return p == 0.0 || p == 1.0 ? 0.0 : one_minus_powers(p, k); };
  auto record = [&](const std::string& lemma, const std::string& inst, double lhs, double rhs, bool strict) {
    ++r.checks;
    double slack = rhs - lhs;
    r.min_slack = std::min(r.min_slack, slack);
    r.max_slack = std::max(r.max_slack, slack);
    bool ok = strict ? lhs < rhs : lhs <= rhs + kTol;
    if (!ok) r.violations.push_back({lemma, inst, lhs, rhs});
  };
  const std::string at = "p=" + detail::num(p);
  for (int k = 3; k <= k_max; ++k) {
    double c = (std::ldexp(1.0, k) - 2.0 * k - 2.0) / (k * (k - 1.0));
    record("ratio decrease", at + " k=" + std::to_string(k), f(k) / k, f(k - 1) / (k - 1.0) - c * std::pow(pq, k / 2.0), false);
  }
  for (int k = 2; k <= k_max; ++k) {
    double c = (k - 4.0) * std::ldexp(1.0, k - 2) + 2.0;
    record("pq upper bound", at + " k=" + std::to_string(k), f(k), k * pq - c * std::pow(pq, k / 2.0), false);
  }
  const bool strict = p > 0.0 && p < 1.0;
  for (int m = 2; m <= k_max; ++m)
    for (int n = 2; n <= k_max; ++n)
      record("strict subadditivity", at + " m=" + std::to_string(m) + " n=" + std::to_string(n), f(m + n), f(m) + f(n), strict);
  for (int n = 1; n <= k_max; ++n) {
    double sum = 1.0, binom = 1.0;
    for (int k = 1; k <= n; ++k) {
      binom = binom * (n - k + 1) / k;
      sum += binom;
      record("binomial sum", "n=" + std::to_string(n) + " k=" + std::to_string(k), sum, std::pow(std::numbers::e * n / k, k), false);
    }
  }
  return r;
}

// Number of unordered pairs with r_G(u, v) < threshold.
inline std::uint64_t count_low_pairs(const Trigraph& g, double threshold) {
  if (!g.is_plain()) throw std::invalid_argument("count_low_pairs needs a graph without red edges");
  auto alive = g.alive_vertices();
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < alive.size(); ++i)
    for (std::size_t j = i + 1; j < alive.size(); ++j)
      if (static_cast<double>(g.contraction_red_degree(alive[i], alive[j])) < threshold) ++count;
  return count;
}

struct LowerBoundCertificate {
  double b = 0.0;
  double d = 0.0;
  std::uint64_t low_pair_count = 0;
  bool certified = false;
  double certified_value = 0.0;  // tww > certified_value when certified
};

// If fewer than b pairs have r < b + d (and |V| >= b + 2), then tww(G) > d.
inline LowerBoundCertificate certified_lower_bound(const Trigraph& g, double b, double d) {
  detail::require(b > 0.0, "b > 0");
  detail::require(d > 0.0, "d > 0");
  detail::require(static_cast<double>(g.alive_count()) >= b + 2.0, "|V| >= b + 2");
  LowerBoundCertificate c;
  c.b = b;
  c.d = d;
  c.low_pair_count = count_low_pairs(g, b + d);
  c.certified = static_cast<double>(c.low_pair_count) < b;
  c.certified_value = c.certified ? d : 0.0;
  return c;
}

// Peels vertices of degree <= |E(H)|/|V(H)| until none is left; the result has
// minimum degree above |E(G)|/|V(G)|. Removed vertices become dead.
inline Trigraph min_degree_subgraph(const Trigraph& g) {
  if (!g.is_plain()) throw std::invalid_argument("min_degree_subgraph needs a graph without red edges");
  if (g.black_edge_count() == 0) throw std::invalid_argument("min_degree_subgraph needs at least one edge");
  Trigraph h = g;
  bool removed = true;
  while (removed) {
    removed = false;
    double ratio = static_cast<double>(h.black_edge_count()) / static_cast<double>(h.alive_count());
    for (Vertex v : h.alive_vertices())
      if (static_cast<double>(h.degree(v)) <= ratio) {
        h.remove_vertex(v);
        removed = true;
        break;
      }
  }
  return h;
}

namespace detail {

inline std::uint64_t binom_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<std::uint64_t>(r);
}

}  // namespace detail

// Number of subgraphs isomorphic to K_{2,m}. For m = 2 each K_{2,2} has two possible
// "pair" sides, so pair/common-neighbour incidences are halved.
inline std::uint64_t count_k2m(const Trigraph& g, std::size_t m_side) {
  if (!g.is_plain()) throw std::invalid_argument("count_k2m needs a graph without red edges");
  if (m_side < 2) throw std::invalid_argument("count_k2m needs m >= 2");
  auto alive = g.alive_vertices();
  std::uint64_t incidences = 0;
  for (std::size_t i = 0; i < alive.size(); ++i)
    for (std::size_t j = i + 1; j < alive.size(); ++j) {
      auto a = g.black_row(alive[i]), b = g.black_row(alive[j]);
      std::uint64_t common = 0;
      for (std::size_t k = 0; k < a.size(); ++k) common += static_cast<std::uint64_t>(std::popcount(a[k] & b[k]));
      incidences += detail::binom_u64(common, m_side);
    }
  return m_side == 2 ? incidences / 2 : incidences;
}

inline bool has_k2m(const Trigraph& g, std::size_t m_side) {
  if (!g.is_plain()) throw std::invalid_argument("has_k2m needs a graph without red edges");
  if (m_side < 2) throw std::invalid_argument("has_k2m needs m >= 2");
  auto alive = g.alive_vertices();
  for (std::size_t i = 0; i < alive.size(); ++i)
    for (std::size_t j = i + 1; j < alive.size(); ++j) {
      auto a = g.black_row(alive[i]), b = g.black_row(alive[j]);
      std::size_t common = 0;
      for (std::size_t k = 0; k < a.size(); ++k) common += static_cast<std::size_t>(std::popcount(a[k] & b[k]));
      if (common >= m_side) return true;
    }
  return false;
}

}  // namespace tww
