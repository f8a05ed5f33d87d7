#include <gtest/gtest.h>

#include <random>

#include "support/fixtures.hpp"
#include "traintrack/graph.hpp"

namespace tt = traintrack;

namespace {
  tt::Letters L(std::string const& s, std::size_t rank = 2) {
    return tt::parse_letters(s, rank);
  }

  // Theta-like graph: two vertices, three edges 0->1.
  tt::Graph theta() { return tt::Graph(2, {{0, 1}, {0, 1}, {0, 1}}, {"x", "y", "z"}); }
}  // namespace

TEST(Graph, RoseHasOneVertexAndRankLoops) {
  auto const g = tt::Graph::rose(3);
  EXPECT_TRUE(g.is_rose());
  EXPECT_EQ(g.rank(), 3u);
  EXPECT_EQ(g.directions(0).size(), 6u);
}

TEST(Graph, BettiNumberOfTheta) {
  auto const g = theta();
  EXPECT_EQ(g.rank(), 2u);
  EXPECT_EQ(g.directions(0).size(), 3u);
  EXPECT_EQ(g.directions(1).size(), 3u);
}

TEST(Graph, RejectsDisconnectedAndWrongRank) {
  EXPECT_THROW(tt::Graph(2, {{0, 0}, {1, 1}}), tt::InputError);
  EXPECT_THROW(tt::Graph(2, {{0, 1}, {1, 0}}, {}, 3), tt::InputError);
  EXPECT_THROW(tt::Graph(1, {{0, 1}}), tt::InputError);
}

TEST(Tighten, EdgeAndReverseCancel) {
  auto const g = tt::Graph::rose(2);
  EXPECT_TRUE(tt::tighten(g, L("aA")).empty());
}

TEST(Tighten, InnerPairCancels) {
  auto const g = tt::Graph::rose(3);
  EXPECT_EQ(tt::to_string(tt::tighten(g, L("abBc", 3)).edges()), "ac");
}

TEST(Tighten, FullCancellationOnTheRose) {
  EXPECT_TRUE(tt::tighten(tt::Graph::rose(2), L("abBA")).empty());
}

TEST(Tighten, RejectsNonComposablePath) {
  auto const g = theta();
  // x then y both start at vertex 0, but x ends at 1.
  tt::Letters p{tt::Letter::generator(0), tt::Letter::generator(1)};
  EXPECT_THROW(tt::tighten(g, p), tt::InputError);
}

TEST(Tighten, IdempotentAndLengthNonIncreasing) {
  auto const   g = tt::Graph::rose(3);
  std::mt19937 rng(21);
  tt::Metric const d({0.3, 1.7, 2.2});
  for (int i = 0; i < 300; ++i) {
    auto const raw  = L(oracle::random_raw_word(rng, 3, 1 + rng() % 20), 3);
    auto const once = tt::tighten(g, raw);
    EXPECT_EQ(tt::tighten(g, once.edges()), once);
    EXPECT_LE(tt::path_length(once, d), tt::path_length(raw, d) + 1e-12);
    EXPECT_LE(once.size(), raw.size());
  }
}

TEST(PathLength, EmptyPathIsZero) {
  EXPECT_EQ(tt::path_length(tt::EdgePath{}, tt::Metric::unit(2)), 0.0);
}

TEST(PathLength, UnitMetric) {
  EXPECT_EQ(tt::path_length(L("ab"), tt::Metric::unit(2)), 2.0);
}

TEST(PathLength, FibonacciEigenmetricSumsToOne) {
  double const     phi = oracle::golden();
  tt::Metric const d({1.0 / phi, 1.0 / (phi * phi)});
  EXPECT_NEAR(tt::path_length(L("ab"), d), 1.0, 1e-12);
  EXPECT_NEAR(tt::path_length(L("AB"), d), 1.0, 1e-12);
}

TEST(Metric, RejectsNonPositiveLengths) {
  EXPECT_THROW(tt::Metric({1.0, 0.0}), tt::InputError);
  EXPECT_THROW(tt::Metric({-1.0}), tt::InputError);
}

TEST(Metric, ScalingScalesLengths) {
  auto const d = tt::Metric({0.5, 2.0}).scaled(3.0);
  EXPECT_DOUBLE_EQ(d.lengths()[0], 1.5);
  EXPECT_DOUBLE_EQ(d.lengths()[1], 6.0);
}

TEST(CyclicWordToLoop, SingleEdge) {
  auto const p = tt::cyclic_word_to_loop(fx::cyc("a"), tt::Graph::rose(2));
  EXPECT_EQ(tt::to_string(p.edges()), "a");
}

TEST(CyclicWordToLoop, MixedOrientation) {
  auto const p = tt::cyclic_word_to_loop(fx::cyc("aB"), tt::Graph::rose(2));
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0], tt::Letter::generator(0));
  EXPECT_EQ(p[1], tt::Letter::generator(1, true));
}

TEST(CyclicWordToLoop, EmptyWordGivesEmptyPath) {
  EXPECT_TRUE(tt::cyclic_word_to_loop(fx::cyc("1"), tt::Graph::rose(2)).empty());
}

TEST(CyclicWordToLoop, RequiresARose) {
  EXPECT_THROW(tt::cyclic_word_to_loop(fx::cyc("a"), theta()), tt::InputError);
}

TEST(MakeLoop, ClosedPathInTheta) {
  auto const g = theta();
  tt::Letters p{tt::Letter::generator(0), tt::Letter::generator(1, true)};
  EXPECT_EQ(tt::make_loop(g, p).size(), 2u);
  tt::Letters open{tt::Letter::generator(0)};
  EXPECT_THROW(tt::make_loop(g, open), tt::InputError);
}
