// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "twinwidth/twinwidth.hpp"

using namespace tww;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

Outcome with_limit(Outcome o, double elapsed, double limit) {
  if (elapsed >= limit) {
    o.pass = false;
    o.detail += fmt("; over the %.0f s limit", limit);
  }
  return o;
}

Outcome oracle_equivalence() {
  auto t0 = Clock::now();
  std::size_t mismatches = 0, graphs = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    std::size_t n = 4 + seed % 3;
    double p = 0.2 + 0.6 * static_cast<double>((seed * 7) % 11) / 10.0;
    auto g = gnp({n, p, seed});
    auto e = exact_twin_width(g);
    auto b = brute_force_twin_width(g);
    mismatches += !e.exact || e.value != b.value;
    ++graphs;
  }
  double t = seconds_since(t0);
  return with_limit({mismatches == 0, fmt("%zu graphs, %zu mismatches, %.2f s", graphs, mismatches, t)}, t, 60);
}

Outcome cograph_zero() {
  auto t0 = Clock::now();
  std::size_t nonzero = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto g = random_cograph(1 + seed % 10, seed);
    auto r = exact_twin_width(g);
    nonzero += !r.exact || r.value != 0;
  }
  double t = seconds_since(t0);
  return with_limit({nonzero == 0, fmt("100 cographs, %zu with nonzero width, %.2f s", nonzero, t)}, t, 60);
}

Outcome complement_invariance() {
  auto t0 = Clock::now();
  std::size_t bad = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    std::size_t n = 2 + seed % 6;
    auto g = gnp({n, 0.5, 1000 + seed});
    auto a = exact_twin_width(g), b = exact_twin_width(complement(g));
    bad += !a.exact || !b.exact || a.value != b.value;
  }
  double t = seconds_since(t0);
  return with_limit({bad == 0, fmt("200 graphs, %zu disagreements, %.2f s", bad, t)}, t, 120);
}

Outcome fixed_values() {
  std::size_t p4 = brute_force_twin_width(oracle::path(4)).value;
  std::size_t c5 = brute_force_twin_width(oracle::cycle(5)).value;
  bool cliques = true;
  for (std::size_t n = 1; n <= 6; ++n) cliques = cliques && brute_force_twin_width(oracle::clique(n)).value == 0;
  return {p4 == 1 && c5 == 2 && cliques, fmt("P4=%zu C5=%zu K1..K6 all zero: %s", p4, c5, cliques ? "yes" : "no")};
}

Outcome p_star_bracket() {
  double ps = p_star(1e-9);
  bool bracket = ps > 0.4012 && ps < 0.4013;
  std::size_t wrong = 0;
  for (int i = 1; i <= 500; ++i) {
    double x = 0.5 * i / 500.0;
    double d = alpha(x) - beta(x);
    wrong += (d > 0) != (ps - x > 0);
  }
  return {bracket && wrong == 0, fmt("p* = %.10f, %zu sign mismatches on 500 points", ps, wrong)};
}

Outcome identities() {
  auto t0 = Clock::now();
  auto gap = [](double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); };
  double worst_a = 0, worst_b = 0, worst_f = 0;
  for (int i = 1; i <= 2000; ++i) {
    double x = i / 2001.0, z = x * (1 - x);
    worst_a = std::max(worst_a, gap(alpha(x), alpha2(z)));
    worst_b = std::max(worst_b, gap(beta(x), beta2(z)));
    worst_f = std::max(worst_f, std::fabs(one_minus_powers(x, 6) - (6 * z - z * z * (9 - 2 * z))));
  }
  double t = seconds_since(t0);
  bool ok = worst_a <= 1e-12 && worst_b <= 1e-12 && worst_f <= 1e-12;
  return with_limit({ok, fmt("max gaps alpha %.2e, beta %.2e, sixth powers %.2e, %.3f s", worst_a, worst_b, worst_f, t)}, t, 1);
}

Outcome lemma_suites() {
  auto t0 = Clock::now();
  std::size_t checks = 0, violations = 0;
  std::string first;
  for (int i = 0; i <= 200; ++i) {
    auto r = check_pq_lemmas(i / 200.0, 16);
    checks += r.checks;
    violations += r.violations.size();
    if (first.empty() && !r.ok()) first = r.violations[0].lemma + " " + r.violations[0].instance;
  }
  double t = seconds_since(t0);
  return with_limit({violations == 0, fmt("%zu checks, %zu violations%s%s, %.2f s", checks, violations, first.empty() ? "" : ", first ", first.c_str(), t)}, t, 5);
}

Outcome tail_sandwich() {
  auto t0 = Clock::now();
  std::size_t upper = 0, lower = 0, both = 0, violations = 0;
  for (std::uint64_t n : {16u, 64u, 256u, 1024u, 4096u})
    for (double p : {0.3, 0.4, 0.5}) {
      std::vector<double> eps;
      for (int k = 1; k <= 4; ++k) eps.push_back(0.3 * p * k / 4.0);
      double lo = 1.0 / std::sqrt(static_cast<double>(n)), hi = std::min(p / 2.0, 1.0 - p);
      if (lo <= hi)
        for (int k = 0; k < 4; ++k) eps.push_back(lo + (hi - lo) * k / 3.0);
      double top = std::min(hi, 0.3 * p);
      if (lo <= top)
        for (int k = 0; k < 4; ++k) eps.push_back(lo + (top - lo) * k / 3.0);
      for (double e : eps) {
        TailBoundQuery q{n, p, e};
        double cdf = oracle::binom_cdf_dp(n, p, tail_cutoff(q));
        bool u = upper_bound_applies(q), l = lower_bound_applies(q);
        if (u) {
          ++upper;
          violations += cdf > binom_upper_bound(q);
        }
        if (l) {
          ++lower;
          violations += binom_lower_bound(q) > cdf;
        }
        both += u && l;
      }
    }
  double t = seconds_since(t0);
  return with_limit({violations == 0, fmt("%zu upper checks, %zu lower checks, %zu full sandwiches, %zu violations, %.2f s", upper, lower, both,
                                          violations, t)},
                    t, 10);
}

Outcome certificate_triangle() {
  std::size_t certified = 0, violations = 0, samples = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    std::size_t n = seed % 2 ? 40 : 60;
    auto g = gnp({n, 0.5, seed});
    double dn = static_cast<double>(n), b = default_slack(dn), d = predicted_lower_dense(dn, 0.5, b).value;
    if (d <= 0) continue;
    auto c = certified_lower_bound(g, b, d);
    auto w = greedy_sequence(g).width;
    ++samples;
    if (c.certified) {
      ++certified;
      violations += !(c.certified_value < static_cast<double>(w));
    }
  }
  std::size_t small_certified = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    std::size_t n = 5 + seed % 3;
    auto g = gnp({n, 0.5, 500 + seed});
    auto exact = exact_twin_width(g).value;
    for (double b = 1; b + 2 <= static_cast<double>(n); ++b)
      for (double d : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        auto c = certified_lower_bound(g, b, d);
        if (!c.certified) continue;
        ++small_certified;
        violations += !(c.certified_value < static_cast<double>(exact));
      }
  }
  return {violations == 0, fmt("%zu/%zu dense samples certified, %zu certificates on 1000 graphs with n <= 7, %zu violations", certified, samples,
                                small_certified, violations)};
}

Outcome schedule_validity() {
  const std::size_t n = 100000;
  const std::uint64_t seed = 1;
  auto t0 = Clock::now();
  auto params = schedule_params(n, 0.5, 0.1, 0.25);
  auto g = gnp({n, 0.5, seed});
  auto [seq, trace] = run_paper_schedule(g, params);
  double run_s = seconds_since(t0);
  bool verified = verify_width(g, seq, trace.width);
  double total_s = seconds_since(t0);
  double bound = n / 2.0 + std::sqrt(n * std::log(static_cast<double>(n)));
  std::size_t peak_step = 0;
  for (std::size_t i = 0; i < trace.steps.size() && !peak_step; ++i)
    if (trace.steps[i].max_red_degree == trace.width) peak_step = i + 1;
  bool ok = verified && trace.size_identity_holds && static_cast<double>(trace.width) <= bound && total_s < 300;
  std::string trend;
  for (std::size_t m : {40000u, 70000u}) {
    try {
      auto pm = schedule_params(m, 0.5, 0.1, 0.25);
      auto gm = gnp({m, 0.5, seed});
      auto [s, t] = run_paper_schedule(gm, pm);
      trend += fmt(" n=%zu width/n=%.4f;", m, static_cast<double>(t.width) / static_cast<double>(m));
    } catch (const PreconditionError& e) {
      trend += fmt(" n=%zu infeasible (%s);", m, e.what());
    }
  }
  trend += fmt(" n=%zu width/n=%.4f", n, static_cast<double>(trace.width) / static_cast<double>(n));
  return {ok, fmt("width %zu (first reached at step %zu, phase %d), bound %.0f, lemma bound %.0f, verified %s, size identity %s, a-pairs %zu "
                  "(shortfall %s), frozen %zu, skipped %zu, schedule %.1f s, with verification %.1f s; trend (reported):%s",
                  trace.width, peak_step, peak_step ? trace.steps[peak_step - 1].phase : 0, bound, params.bound, verified ? "yes" : "no",
                  trace.size_identity_holds ? "yes" : "no", trace.a_pairs.pairs.size(), trace.a_pairs.shortfall ? "yes" : "no", trace.frozen.size(),
                  trace.skipped.size(), run_s, total_s, trend.c_str())};
}

Outcome lower_bound_concentration() {
  auto t0 = Clock::now();
  const std::size_t n = 2000;
  const double dn = n, hi = 2 * 0.25 * dn, lo = hi - 5 * std::sqrt(dn * std::log(dn));
  std::size_t inside = 0;
  std::string mins;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto g = gnp({n, 0.5, seed});
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Vertex> pick(1, n);
    std::size_t best = SIZE_MAX;
    for (int i = 0; i < 100000; ++i) {
      Vertex u = pick(rng), v = pick(rng);
      if (u == v) {
        --i;
        continue;
      }
      best = std::min(best, g.contraction_red_degree(u, v));
    }
    inside += static_cast<double>(best) >= lo && static_cast<double>(best) <= hi;
    mins += (mins.empty() ? "" : " ") + std::to_string(best);
  }
  double t = seconds_since(t0);
  return with_limit({inside >= 9, fmt("window [%.1f, %.1f], minima %s, %zu/10 inside, %.1f s", lo, hi, mins.c_str(), inside, t)}, t, 120);
}

Outcome csv_determinism() {
  auto cfg = config_from_json(nlohmann::json::parse(R"({
    "grid": [{"n": 9, "p": 0.5}, {"n": 50, "p": 0.5}, {"n": 200, "p": 0.3}],
    "strategies": ["greedy", "exact"],
    "seeds": [1, 2, 3, 4, 5]
  })"));
  auto render = [&] {
    std::ostringstream out;
    write_experiment_csv(out, run_experiment(cfg), false);
    return out.str();
  };
  auto a = render(), b = render();
  return {a == b, fmt("%zu bytes per run, identical: %s", a.size(), a == b ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> all = {
      {"oracle equivalence", oracle_equivalence},
      {"cograph zero", cograph_zero},
      {"complement invariance", complement_invariance},
      {"fixed small values", fixed_values},
      {"p* bracket and sign", p_star_bracket},
      {"closed-form identities", identities},
      {"inequality suites", lemma_suites},
      {"tail-bound sandwich", tail_sandwich},
      {"certificate soundness", certificate_triangle},
      {"schedule validity", schedule_validity},
      {"dense lower-bound concentration", lower_bound_concentration},
      {"CSV determinism", csv_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Outcome o;
    try {
      o = all[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, all[i].name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", all.size() - failed, all.size());
  return failed == 0 ? 0 : 1;
}
