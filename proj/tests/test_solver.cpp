#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "twinwidth/numerics.hpp"
#include "twinwidth/random.hpp"
#include "twinwidth/solver.hpp"

using namespace tww;

TEST(ExactTwinWidth, Examples) {
  EXPECT_EQ(exact_twin_width(oracle::clique(6)).value, 0u);
  EXPECT_EQ(exact_twin_width(oracle::path(4)).value, 1u);
  auto c5 = exact_twin_width(oracle::cycle(5));
  EXPECT_EQ(c5.value, 2u);
  EXPECT_TRUE(c5.exact);
  EXPECT_TRUE(verify_width(oracle::cycle(5), c5.witness, 2));
}

TEST(DecideTwwLe, Examples) {
  EXPECT_EQ(decide_tww_le(oracle::path(4), 0).answer, Decision::kNo);
  auto yes = decide_tww_le(oracle::path(4), 1);
  EXPECT_EQ(yes.answer, Decision::kYes);
  EXPECT_TRUE(verify_width(oracle::path(4), yes.witness, 1));
  EXPECT_EQ(decide_tww_le(oracle::cycle(5), 1).answer, Decision::kNo);
}

TEST(DecideTwwLe, BudgetExhaustionIsFlagged) {
  auto g = gnp({14, 0.5, 3});
  SolverOptions opt;
  opt.node_budget = 5;
  EXPECT_EQ(decide_tww_le(g, 2, opt).answer, Decision::kUnknown);
  auto r = exact_twin_width(g, std::uint64_t{5});
  EXPECT_FALSE(r.exact);
  EXPECT_LE(r.lower_bound, r.value);
  EXPECT_TRUE(verify_width(g, r.witness, r.value));
}

TEST(BruteForce, Examples) {
  EXPECT_EQ(brute_force_twin_width(oracle::clique(4)).value, 0u);
  auto c5 = brute_force_twin_width(oracle::cycle(5));
  EXPECT_EQ(c5.value, 2u);
  EXPECT_EQ(c5.sequences, 180u);
  EXPECT_EQ(brute_force_twin_width(complement(oracle::path(4))).value, 1u);
  EXPECT_THROW(brute_force_twin_width(oracle::path(7)), std::invalid_argument);
}

TEST(BruteForce, AgreesWithNaiveRecursion) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = oracle::random_graph(2 + rng() % 5, 0.5, rng);
    EXPECT_EQ(brute_force_twin_width(g).value, oracle::naive_tww(oracle::Naive::from(g), 0));
  }
}

TEST(ExactTwinWidth, MatchesBruteForceOnRandomGraphs) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 150; ++trial) {
    auto g = oracle::random_graph(4 + trial % 3, 0.2 + 0.6 * (trial % 7) / 6.0, rng);
    auto e = exact_twin_width(g);
    ASSERT_TRUE(e.exact);
    ASSERT_EQ(e.value, brute_force_twin_width(g).value);
  }
}

TEST(ExactTwinWidth, MatchesNaiveOnTrigraphs) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = oracle::random_graph(7, 0.5, rng);
    g = contract(g, 1 + rng() % 3, 4 + rng() % 4);
    EXPECT_EQ(exact_twin_width(g).value, oracle::naive_tww(oracle::Naive::from(g), g.max_red_degree()));
  }
}

TEST(ExactTwinWidth, WitnessIsTight) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = oracle::random_graph(8, 0.5, rng);
    auto e = exact_twin_width(g);
    ASSERT_TRUE(e.exact);
    EXPECT_TRUE(verify_width(g, e.witness, e.value));
    if (e.value > 0) {
      EXPECT_EQ(decide_tww_le(g, e.value - 1).answer, Decision::kNo);
    }
    EXPECT_LE(e.value, greedy_sequence(g).width);
  }
}

TEST(ExactTwinWidth, ComplementInvariance) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = oracle::random_graph(7, 0.5, rng);
    EXPECT_EQ(exact_twin_width(g).value, exact_twin_width(complement(g)).value);
  }
}

TEST(ExactTwinWidth, SmallMemoStillExact) {
  SolverOptions opt;
  opt.memo_cap = 4;
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = oracle::random_graph(7, 0.5, rng);
    EXPECT_EQ(exact_twin_width(g, opt).value, exact_twin_width(g).value);
  }
}

TEST(ExactTwinWidth, RejectsLargeGraphs) { EXPECT_THROW(exact_twin_width(Trigraph(65)), std::invalid_argument); }

TEST(CanonicalEncoding, IndependentOfBlockOrder) {
  VertexPartition a{{{3, 1}, {5, 4}}}, b{{{4, 5}, {1, 3}}};
  EXPECT_EQ(canonical_encoding(a, 6), canonical_encoding(b, 6));
  EXPECT_EQ(canonical_encoding(a, 6), (std::vector<Vertex>{1, 3, 0, 2, 0, 4, 5, 0, 6}));
}

TEST(Greedy, Examples) {
  EXPECT_EQ(greedy_sequence(oracle::clique(7)).width, 0u);
  auto p4 = greedy_sequence(oracle::path(4));
  EXPECT_EQ(p4.width, 1u);
  EXPECT_TRUE(verify_width(oracle::path(4), p4.sequence, 1));
}

TEST(Greedy, MatchesNaiveGreedy) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 2 + rng() % 25;
    auto g = oracle::random_graph(n, 0.5, rng);
    if (trial % 3 == 0 && n > 3) g = contract(g, 1, 2);
    auto got = greedy_sequence(g);
    // naive: try every pair, keep the first strict improvement in lexicographic order
    Trigraph h = g;
    ContractionSequence want;
    std::size_t width = h.max_red_degree();
    while (h.alive_count() > 1) {
      auto alive = h.alive_vertices();
      std::size_t best = SIZE_MAX;
      Vertex bu = 0, bv = 0;
      for (std::size_t i = 0; i < alive.size(); ++i)
        for (std::size_t j = i + 1; j < alive.size(); ++j) {
          std::size_t w = contract(h, alive[i], alive[j]).max_red_degree();
          if (w < best) {
            best = w;
            bu = alive[i];
            bv = alive[j];
          }
        }
      h.contract_in_place(bu, bv);
      want.push(bu, bv);
      width = std::max(width, best);
    }
    ASSERT_EQ(got.sequence, want);
    ASSERT_EQ(got.width, width);
  }
}

TEST(Greedy, AtLeastCertifiedLowerBound) {
  auto g = gnp({60, 0.5, 2});
  double b = std::pow(60.0, 0.55), d = predicted_lower_dense(60, 0.5, b).value;
  auto cert = certified_lower_bound(g, b, d);
  auto w = greedy_sequence(g).width;
  if (cert.certified) {
    EXPECT_LT(cert.certified_value, static_cast<double>(w));
  }
  EXPECT_TRUE(verify_width(g, greedy_sequence(g).sequence, w));
}
