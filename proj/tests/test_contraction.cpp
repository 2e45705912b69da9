#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "twinwidth/contraction.hpp"

using namespace tww;

namespace {

ContractionSequence seq_of(std::initializer_list<std::pair<Vertex, Vertex>> steps) {
  ContractionSequence s;
  for (auto [u, v] : steps) s.push(u, v);
  return s;
}

std::size_t weighted(const std::map<std::size_t, std::size_t>& h) {
  std::size_t s = 0;
  for (auto [i, c] : h) s += i * c;
  return s;
}

}  // namespace

TEST(ApplySequence, CliqueHasWidthZero) {
  auto t = apply_sequence(oracle::clique(4), seq_of({{1, 2}, {1, 3}, {1, 4}}));
  EXPECT_EQ(t.width, 0u);
  EXPECT_TRUE(t.complete);
}

TEST(ApplySequence, PathReplay) {
  auto t = apply_sequence(oracle::path(4), seq_of({{1, 2}, {1, 3}, {1, 4}}));
  EXPECT_EQ(t.merged_red_degree[0], 1u);
  EXPECT_EQ(t.max_red_degree, (std::vector<std::size_t>{1, 1, 0}));
  EXPECT_EQ(t.width, 1u);
}

TEST(ApplySequence, CycleReplay) {
  auto seq = seq_of({{1, 2}, {3, 4}, {1, 5}, {1, 3}});
  auto t = apply_sequence(oracle::cycle(5), seq);
  EXPECT_EQ(t.width, 2u);
  EXPECT_TRUE(verify_width(oracle::cycle(5), seq, 2));
  EXPECT_FALSE(verify_width(oracle::cycle(5), seq, 1));
}

TEST(ApplySequence, DoesNotMutateInput) {
  auto g = oracle::cycle(5);
  auto copy = g;
  apply_sequence(g, seq_of({{1, 2}}));
  EXPECT_EQ(g, copy);
}

TEST(ApplySequence, ReportsOffendingStep) {
  try {
    apply_sequence(oracle::path(4), seq_of({{1, 2}, {2, 3}}));
    FAIL();
  } catch (const SequenceError& e) {
    EXPECT_EQ(e.step(), 2u);
  }
  EXPECT_THROW(apply_sequence(oracle::path(4), seq_of({{1, 9}})), SequenceError);
}

TEST(ApplySequence, EnginesAgree) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 2 + rng() % 80;
    auto g = oracle::random_graph(n, 0.5, rng);
    ContractionSequence seq;
    std::vector<Vertex> alive = g.alive_vertices();
    while (alive.size() > 1) {
      std::size_t i = rng() % alive.size(), j = i;
      while (j == i) j = rng() % alive.size();
      Vertex u = alive[i], v = alive[j];
      seq.push(u, v);
      std::erase(alive, std::max(u, v));
    }
    auto a = apply_sequence(g, seq, ReplayEngine::kQuotient);
    auto b = apply_sequence(g, seq, ReplayEngine::kDirect);
    ASSERT_EQ(a.max_red_degree, b.max_red_degree);
    ASSERT_EQ(a.merged_red_degree, b.merged_red_degree);
    ASSERT_EQ(a.width, b.width);
    ASSERT_TRUE(a.complete && b.complete);
    ASSERT_TRUE(a.size_identity_holds && b.size_identity_holds);
  }
}

TEST(ApplySequence, StartsFromTrigraphWidth) {
  auto g = contract(oracle::path(4), 2, 3);
  auto t = apply_sequence(g, seq_of({{1, 2}, {1, 4}}));
  EXPECT_EQ(t.initial_max_red_degree, 2u);
  EXPECT_EQ(t.width, 2u);
  EXPECT_THROW(apply_sequence(g, {}, ReplayEngine::kQuotient), std::invalid_argument);
}

TEST(VerifyWidth, Examples) {
  EXPECT_TRUE(verify_width(oracle::clique(4), seq_of({{1, 2}, {1, 3}, {1, 4}}), 0));
  // every full sequence of P4 has width at least 1
  std::vector<Vertex> order = {1, 2, 3, 4};
  do {
    ContractionSequence s;
    s.push(std::min(order[0], order[1]), std::max(order[0], order[1]));
    std::vector<Vertex> rest = {std::min(order[0], order[1]), order[2], order[3]};
    s.push(rest[0], rest[1]);
    s.push(std::min(rest[0], rest[1]), rest[2]);
    EXPECT_FALSE(verify_width(oracle::path(4), s, 0));
  } while (std::next_permutation(order.begin(), order.end()));
  EXPECT_FALSE(verify_width(oracle::clique(4), seq_of({{1, 2}}), 0));
}

TEST(ClassHistogram, Examples) {
  auto g = oracle::cycle(5);
  auto t = apply_sequence(g, seq_of({{1, 2}, {1, 3}}));
  EXPECT_EQ(class_histogram(t, 1), (std::map<std::size_t, std::size_t>{{1, 5}}));
  EXPECT_EQ(class_histogram(t, 2), (std::map<std::size_t, std::size_t>{{1, 3}, {2, 1}}));
  EXPECT_EQ(class_histogram(t, 3), (std::map<std::size_t, std::size_t>{{1, 2}, {3, 1}}));
  EXPECT_THROW(class_histogram(t, 0), std::out_of_range);
  EXPECT_THROW(class_histogram(t, 4), std::out_of_range);
}

TEST(ClassHistogram, WeightedSumIsOrderAtEveryStep) {
  std::mt19937_64 rng(6);
  auto g = oracle::random_graph(30, 0.4, rng);
  ContractionSequence seq;
  std::vector<Vertex> alive = g.alive_vertices();
  while (alive.size() > 1) {
    std::shuffle(alive.begin(), alive.end(), rng);
    seq.push(alive[0], alive[1]);
    std::erase(alive, std::max(alive[0], alive[1]));
  }
  auto t = apply_sequence(g, seq);
  EXPECT_TRUE(t.size_identity_holds);
  for (std::size_t s = 1; s <= seq.size() + 1; ++s) EXPECT_EQ(weighted(class_histogram(t, s)), 30u);
}

TEST(SequenceIo, RoundTripAndErrors) {
  auto seq = seq_of({{1, 2}, {3, 4}, {1, 5}, {1, 3}});
  std::stringstream ss;
  write_sequence(ss, seq);
  EXPECT_EQ(read_sequence(ss), seq);

  std::istringstream empty("");
  EXPECT_TRUE(read_sequence(empty).empty());

  std::istringstream self("1 2\n1 1\n");
  try {
    read_sequence(self);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream junk("1 2 3\n");
  EXPECT_THROW(read_sequence(junk), ParseError);
}

TEST(TraceCsv, Columns) {
  auto t = apply_sequence(oracle::path(4), seq_of({{2, 3}, {1, 2}, {1, 4}}));
  std::ostringstream out;
  write_trace_csv(out, t);
  EXPECT_EQ(out.str(), "step,u,v,merged_rdeg,max_rdeg\n1,2,3,2,2\n2,1,2,1,1\n3,1,4,0,0\n");
}

TEST(FinishArbitrarily, CompletesAnyPartialSequence) {
  auto g = oracle::cycle(7);
  auto seq = seq_of({{2, 5}});
  Trigraph h = contract(g, 2, 5);
  finish_arbitrarily(h.alive_vertices(), seq);
  EXPECT_TRUE(apply_sequence(g, seq).complete);
}
