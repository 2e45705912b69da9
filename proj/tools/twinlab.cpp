#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "twinwidth/twinwidth.hpp"

namespace {

using nlohmann::json;

constexpr int kDomainError = 1;
constexpr int kVerifyFailed = 2;

json prediction_json(const tww::Prediction& p, json inputs) {
  json j{{"formula", p.formula}, {"inputs", std::move(inputs)}, {"value", p.value}, {"omitted_terms", p.omitted_terms}};
  if (p.clamped) j["clamped"] = true;
  return j;
}

json plain_json(std::string formula, json inputs, double value, std::string omitted = "none") {
  return {{"formula", std::move(formula)}, {"inputs", std::move(inputs)}, {"value", value}, {"omitted_terms", std::move(omitted)}};
}

template <class F>
void with_output(const std::string& path, F&& f) {
  if (path.empty() || path == "-") {
    f(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  f(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twinlab: trigraph contraction, twin-width solvers and random-graph experiments"};
  app.require_subcommand(1);
  int code = 0;

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random graph");
  std::string gen_kind = "gnp", gen_out;
  std::size_t gen_n = 10, gen_a = 0, gen_b = 0;
  double gen_p = 0.5;
  std::uint64_t gen_seed = 0;
  gen->add_option("--kind", gen_kind, "gnp | bipartite | cograph")->check(CLI::IsMember({"gnp", "bipartite", "cograph"}));
  gen->add_option("--n", gen_n, "number of vertices");
  gen->add_option("--a", gen_a, "bipartite: size of A (labels b+1..b+a)");
  gen->add_option("--b", gen_b, "bipartite: size of B (labels 1..b)");
  gen->add_option("--p", gen_p, "edge probability");
  gen->add_option("--seed", gen_seed, "64-bit seed");
  gen->add_option("--out", gen_out, "output graph file (default stdout)");
  gen->callback([&] {
    tww::Trigraph g = gen_kind == "gnp"         ? tww::gnp({gen_n, gen_p, gen_seed})
                      : gen_kind == "bipartite" ? tww::bipartite_gnp(gen_a, gen_b, gen_p, gen_seed).graph
                                                : tww::random_cograph(gen_n, gen_seed);
    with_output(gen_out, [&](std::ostream& o) { tww::write_graph(o, g); });
  });

  // contract
  auto* con = app.add_subcommand("contract", "contract one pair or replay a sequence, writing the resulting trigraph");
  std::string con_graph, con_seq, con_out, con_trace;
  std::vector<tww::Vertex> con_pair;
  con->add_option("graph", con_graph, "graph file")->required();
  con->add_option("--pair", con_pair, "contract u v")->expected(2);
  con->add_option("--seq", con_seq, "sequence file to replay");
  con->add_option("--out", con_out, "resulting trigraph (default stdout)");
  con->add_option("--trace", con_trace, "per-step CSV trace");
  con->callback([&] {
    auto g = tww::read_graph(con_graph);
    tww::ContractionSequence seq;
    if (!con_pair.empty()) seq.push(con_pair[0], con_pair[1]);
    if (!con_seq.empty())
      for (const auto& st : tww::read_sequence(con_seq).steps) seq.steps.push_back(st);
    if (seq.empty()) throw std::invalid_argument("nothing to contract: give --pair or --seq");
    auto trace = tww::apply_sequence(g, seq, tww::ReplayEngine::kDirect);
    for (const auto& st : seq.steps) g.contract_in_place(st.u, st.v);
    if (!con_trace.empty()) with_output(con_trace, [&](std::ostream& o) { tww::write_trace_csv(o, trace); });
    with_output(con_out, [&](std::ostream& o) { tww::write_graph(o, g); });
    std::cerr << "width " << trace.width << '\n';
  });

  // verify
  auto* ver = app.add_subcommand("verify", "check that a sequence is complete and keeps red degree <= d");
  std::string ver_graph, ver_seq;
  std::size_t ver_d = 0;
  ver->add_option("graph", ver_graph, "graph file")->required();
  ver->add_option("sequence", ver_seq, "sequence file")->required();
  ver->add_option("--d", ver_d, "width bound")->required();
  ver->callback([&] {
    auto g = tww::read_graph(ver_graph);
    auto t = tww::apply_sequence(g, tww::read_sequence(ver_seq));
    json j{{"width", t.width}, {"complete", t.complete}, {"d", ver_d}, {"ok", t.complete && t.width <= ver_d}};
    std::cout << j.dump() << '\n';
    if (!(t.complete && t.width <= ver_d)) code = kVerifyFailed;
  });

  // exact
  auto* ex = app.add_subcommand("exact", "exact twin-width by branch and bound");
  std::string ex_graph, ex_witness;
  std::uint64_t ex_budget = tww::SolverOptions{}.node_budget;
  ex->add_option("graph", ex_graph, "graph file")->required();
  ex->add_option("--budget", ex_budget, "search node budget");
  ex->add_option("--witness", ex_witness, "write the witness sequence here");
  ex->callback([&] {
    tww::SolverOptions opt;
    opt.node_budget = ex_budget;
    auto r = tww::exact_twin_width(tww::read_graph(ex_graph), opt);
    if (!ex_witness.empty()) tww::write_sequence(ex_witness, r.witness);
    std::cout << json{{"value", r.value}, {"lower_bound", r.lower_bound}, {"exact", r.exact}, {"nodes", r.nodes}, {"witness", ex_witness}}.dump()
              << '\n';
  });

  // greedy
  auto* gr = app.add_subcommand("greedy", "greedy contraction sequence");
  std::string gr_graph, gr_witness;
  gr->add_option("graph", gr_graph, "graph file")->required();
  gr->add_option("--witness", gr_witness, "write the sequence here");
  gr->callback([&] {
    auto r = tww::greedy_sequence(tww::read_graph(gr_graph));
    if (!gr_witness.empty()) tww::write_sequence(gr_witness, r.sequence);
    std::cout << json{{"value", r.width}, {"steps", r.sequence.size()}, {"witness", gr_witness}}.dump() << '\n';
  });

  // paper-schedule
  auto* ps = app.add_subcommand("paper-schedule", "run the explicit dense schedule on G(n, p)");
  std::size_t ps_n = 100000;
  double ps_p = 0.5, ps_eps = 0.1, ps_delta = 0.25, ps_slack = 1.1;
  std::uint64_t ps_seed = 1;
  std::string ps_seq, ps_trace, ps_graph;
  ps->add_option("--n", ps_n, "number of vertices");
  ps->add_option("--p", ps_p, "edge probability");
  ps->add_option("--eps", ps_eps, "epsilon");
  ps->add_option("--delta", ps_delta, "delta");
  ps->add_option("--seed", ps_seed, "graph seed");
  ps->add_option("--graph", ps_graph, "use this graph file instead of G(n, p)");
  ps->add_option("--freeze-slack", ps_slack, "multiplier on rho2, rho3");
  ps->add_option("--out-seq", ps_seq, "sequence file");
  ps->add_option("--out-trace", ps_trace, "trace CSV (phase,step,max_rdeg,frozen_count)");
  ps->callback([&] {
    auto g = ps_graph.empty() ? tww::gnp({ps_n, ps_p, ps_seed}) : tww::read_graph(ps_graph);
    auto params = tww::schedule_params(g.order(), ps_p, ps_eps, ps_delta);
    tww::ScheduleOptions opt;
    opt.freeze_slack = ps_slack;
    auto [seq, trace] = tww::run_paper_schedule(g, params, opt);
    if (!ps_seq.empty()) tww::write_sequence(ps_seq, seq);
    if (!ps_trace.empty()) with_output(ps_trace, [&](std::ostream& o) { tww::write_schedule_trace_csv(o, trace); });
    json j{{"n", params.n},
           {"m", params.m},
           {"a", params.a},
           {"s", params.s},
           {"r", params.r},
           {"a_pairs", trace.a_pairs.pairs.size()},
           {"a_pair_shortfall", trace.a_pairs.shortfall},
           {"frozen_classes", trace.frozen.size()},
           {"frozen_vertices", trace.frozen_vertices},
           {"skipped", trace.skipped.size()},
           {"phase_end", trace.phase_end},
           {"width", trace.width},
           {"lemma_bound", params.bound},
           {"size_identity_holds", trace.size_identity_holds}};
    std::cout << j.dump() << '\n';
  });

  // predict
  auto* pr = app.add_subcommand("predict", "closed-form width predictions as JSON");
  std::string pr_kind;
  double pr_n = 0, pr_p = 0.5, pr_g = -1, pr_m = 0, pr_delta = 0.5;
  pr->add_option("kind", pr_kind, "dense | lower-dense | sparse-upper | sparse-lower")
      ->required()
      ->check(CLI::IsMember({"dense", "lower-dense", "sparse-upper", "sparse-lower"}));
  pr->add_option("--n", pr_n, "number of vertices");
  pr->add_option("--p", pr_p, "edge probability");
  pr->add_option("--g", pr_g, "slack g(n) for lower-dense (default n^0.55)");
  pr->add_option("--m", pr_m, "edge count for sparse-upper");
  pr->add_option("--delta", pr_delta, "delta for sparse-lower");
  pr->callback([&] {
    json j;
    if (pr_kind == "dense") {
      j = prediction_json(tww::predicted_dense_width(pr_n, pr_p), {{"n", pr_n}, {"p", pr_p}});
    } else if (pr_kind == "lower-dense") {
      double g = pr_g < 0 ? tww::default_slack(pr_n) : pr_g;
      j = prediction_json(tww::predicted_lower_dense(pr_n, pr_p, g), {{"n", pr_n}, {"p", pr_p}, {"g", g}, {"g_default", pr_g < 0 ? "n^0.55" : "supplied"}});
    } else if (pr_kind == "sparse-upper") {
      j = prediction_json(tww::predicted_sparse_upper(pr_m), {{"m", pr_m}});
    } else {
      j = prediction_json(tww::predicted_sparse_lower(pr_n, pr_p, pr_delta), {{"n", pr_n}, {"p", pr_p}, {"delta", pr_delta}});
    }
    std::cout << j.dump(2) << '\n';
  });

  // bounds
  auto* bd = app.add_subcommand("bounds", "threshold functions and binomial tail bounds as JSON");
  std::string bd_kind;
  std::uint64_t bd_n = 100, bd_k = 0;
  double bd_p = 0.5, bd_eps = 0.1, bd_x = 0.5, bd_tol = 1e-12;
  bd->add_option("kind", bd_kind, "upper | lower | cdf | kl | alpha | beta | p-star")
      ->required()
      ->check(CLI::IsMember({"upper", "lower", "cdf", "kl", "alpha", "beta", "p-star"}));
  bd->add_option("--n", bd_n, "trials");
  bd->add_option("--p", bd_p, "success probability");
  bd->add_option("--eps", bd_eps, "deviation");
  bd->add_option("--k", bd_k, "cdf cutoff");
  bd->add_option("--x", bd_x, "argument for alpha, beta, kl");
  bd->add_option("--tol", bd_tol, "bisection tolerance for p-star");
  bd->callback([&] {
    json j;
    tww::TailBoundQuery q{bd_n, bd_p, bd_eps};
    json qin{{"n", bd_n}, {"p", bd_p}, {"eps", bd_eps}};
    if (bd_kind == "upper") {
      j = plain_json("exp(-n eps^2/(2pq) + n eps^3/(2p^2q^2))", qin, tww::binom_upper_bound(q));
      j["event"] = "X <= (p-eps)n";
      j["exact_cdf"] = tww::exact_binom_cdf(bd_n, bd_p, tww::tail_cutoff(q));
    } else if (bd_kind == "lower") {
      j = plain_json("(1/(2 sqrt 2)) exp(-n eps^2/(2pq) - 3 sqrt(n eps^2)/(2pq) - 4 n eps^3/(p^2q^2))", qin, tww::binom_lower_bound(q));
      j["event"] = "X <= (p-eps)n";
      j["exact_cdf"] = tww::exact_binom_cdf(bd_n, bd_p, tww::tail_cutoff(q));
    } else if (bd_kind == "cdf") {
      j = plain_json("sum_{i<=k} C(n,i) p^i (1-p)^(n-i)", {{"n", bd_n}, {"p", bd_p}, {"k", bd_k}}, tww::exact_binom_cdf(bd_n, bd_p, bd_k));
    } else if (bd_kind == "kl") {
      j = plain_json("x ln(x/p) + (1-x) ln((1-x)/(1-p))", {{"x", bd_x}, {"p", bd_p}}, tww::kl_div(bd_x, bd_p));
    } else if (bd_kind == "alpha") {
      j = plain_json("alpha(x)", {{"x", bd_x}}, tww::alpha(bd_x));
    } else if (bd_kind == "beta") {
      j = plain_json("beta(x)", {{"x", bd_x}}, tww::beta(bd_x));
    } else {
      j = plain_json("root of alpha - beta in (0.4012, 0.4013) by bisection", {{"tol", bd_tol}}, tww::p_star(bd_tol));
    }
    std::cout << j.dump(2) << '\n';
  });

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a JSON-configured batch and write CSV");
  std::string exp_config, exp_out;
  bool exp_no_runtime = false;
  exp->add_option("--config", exp_config, "config JSON")->required();
  exp->add_option("--out", exp_out, "CSV path (overrides the config's output; '-' for stdout)");
  exp->add_flag("--no-runtime", exp_no_runtime, "leave the runtime_ms column empty");
  exp->callback([&] {
    auto cfg = tww::load_config(exp_config);
    if (!exp_out.empty()) cfg.output = exp_out;
    auto rows = tww::run_experiment(cfg);
    with_output(cfg.output, [&](std::ostream& o) { tww::write_experiment_csv(o, rows, !exp_no_runtime); });
    for (const auto& r : rows)
      if (r.status == "error") std::cerr << "n=" << r.n << " p=" << r.p << " seed=" << r.seed << " " << r.strategy << ": " << r.message << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kDomainError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return code;
}
