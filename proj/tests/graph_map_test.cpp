#include <gtest/gtest.h>

#include <random>

#include "support/fixtures.hpp"
#include "traintrack/graph_map.hpp"

namespace tt = traintrack;

namespace {
  tt::Letters L(std::string const& s, std::size_t rank = 2) {
    return tt::parse_letters(s, rank);
  }

  std::vector<std::vector<std::int64_t>> oracle_rows(oracle::Images const& img) {
    auto const m = oracle::occurrence_matrix(img);
    std::vector<std::vector<std::int64_t>> out;
    for (auto const& row : m) {
      out.emplace_back(row.begin(), row.end());
    }
    return out;
  }

  tt::EdgePath P(std::string const& s, std::size_t rank = 2) {
    return tt::tighten(tt::Graph::rose(rank), L(s, rank));
  }

  tt::Turn turn(std::string const& s) {
    auto const l = L(s, 4);
    return tt::Turn::make(l[0], l[1]);
  }
}  // namespace

TEST(GraphMap, RejectsEmptyAndUntightImages) {
  auto const g = tt::Graph::rose(2);
  EXPECT_THROW(tt::GraphMap(g, {L("ab"), {}}), tt::InputError);
  EXPECT_THROW(tt::GraphMap(g, {L("aAb"), L("a")}), tt::InputError);
  EXPECT_THROW(tt::GraphMap(g, {L("ab")}), tt::InputError);
}

TEST(GraphMap, InfersVertexImagesOnSubdividedRose) {
  auto const in = fx::load("fibonacci_subdivided.map");
  ASSERT_TRUE(in.map);
  auto const& f = *in.map;
  EXPECT_EQ(f.domain().vertex_count(), 2u);
  EXPECT_EQ(f.vertex_image(0), 0u);
  // p ends at vertex 1 and f(p) = p q ends at vertex 0.
  EXPECT_EQ(f.vertex_image(1), 0u);
}

TEST(MapPath, SingleEdge) {
  auto const f = fx::rose(fx::fibonacci);
  EXPECT_EQ(tt::to_string(tt::map_path(f, P("a")).edges()), "ab");
}

TEST(MapPath, ConcatenatesAndTightens) {
  auto const f = fx::rose(fx::fibonacci);
  EXPECT_EQ(tt::to_string(tt::map_path(f, P("ab")).edges()), "aba");
}

TEST(MapPath, SecondIterateOfConjugatedFibonacciCancels) {
  auto const f  = fx::rose(fx::fibonacci_conj_b);
  auto const p2 = tt::map_path(f, tt::map_path(f, P("a")));
  auto const expected = oracle::substitute(fx::fibonacci_conj_b,
                                           oracle::substitute(fx::fibonacci_conj_b, "a"));
  EXPECT_EQ(tt::to_string(p2.edges()), expected);
  EXPECT_EQ(expected, "aab");
  EXPECT_LT(p2.size(), oracle::substitute_raw(fx::fibonacci_conj_b, "Babb").size());
}

TEST(MapPath, AgreesWithSubstitutionOracle) {
  auto const   f = fx::rose(fx::fibonacci_conj_b);
  std::mt19937 rng(13);
  for (int i = 0; i < 200; ++i) {
    auto const w = oracle::random_reduced_word(rng, 2, 1 + rng() % 12);
    EXPECT_EQ(tt::to_string(tt::map_path(f, P(w)).edges()),
              oracle::substitute(fx::fibonacci_conj_b, w).empty()
                  ? "1"
                  : oracle::substitute(fx::fibonacci_conj_b, w));
  }
}

TEST(MapPath, IteratedMatchesPowerMap) {
  auto const   f  = fx::rose(fx::rank4);
  auto const   f3 = tt::power(f, 3);
  std::mt19937 rng(17);
  for (int i = 0; i < 100; ++i) {
    auto const w = P(oracle::random_reduced_word(rng, 4, 1 + rng() % 6), 4);
    EXPECT_EQ(tt::map_path_iterated(f, w, 3), tt::map_path(f3, w));
  }
}

TEST(MapPath, BudgetIsEnforced) {
  auto const f = fx::rose(fx::fibonacci);
  EXPECT_THROW((void)tt::map_path_iterated(f, P("a"), 40, 1000), tt::BudgetExceeded);
}

TEST(TransitionMatrix, Fibonacci) {
  auto const a = tt::transition_matrix(fx::rose(fx::fibonacci));
  EXPECT_EQ(a.rows(), oracle_rows(fx::fibonacci));
  EXPECT_EQ(a, tt::TransitionMatrix(2, {1, 1, 1, 0}));
}

TEST(TransitionMatrix, IdentityMap) {
  EXPECT_EQ(tt::transition_matrix(fx::rose(fx::identity2)), tt::TransitionMatrix::identity(2));
}

TEST(TransitionMatrix, Rank4SwapFibonacci) {
  auto const a = tt::transition_matrix(fx::rose(fx::rank4));
  EXPECT_EQ(a, tt::TransitionMatrix(4, {0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0}));
  EXPECT_EQ(a.rows(), oracle_rows(fx::rank4));
}

TEST(TransitionMatrix, CountsBothOrientations) {
  auto const a = tt::transition_matrix(fx::rose(fx::fibonacci_conj_b));
  EXPECT_EQ(a.rows(), oracle_rows(fx::fibonacci_conj_b));
  EXPECT_EQ(a.at(1, 0), 3);
}

TEST(TransitionMatrix, OfCompositionIsProduct) {
  auto const f = fx::rose(fx::rank4);
  EXPECT_EQ(tt::transition_matrix(tt::power(f, 2)), tt::transition_matrix(f).power(2));
}

TEST(Irreducible, Examples) {
  EXPECT_TRUE(tt::is_irreducible(tt::transition_matrix(fx::rose(fx::fibonacci))));
  EXPECT_FALSE(tt::is_irreducible(tt::transition_matrix(fx::rose(fx::linear))));
  EXPECT_TRUE(tt::is_irreducible(tt::transition_matrix(fx::rose(fx::rank4))));
  EXPECT_FALSE(tt::is_irreducible(tt::TransitionMatrix(1)));
}

TEST(InvariantSubgraph, Examples) {
  auto const lin = tt::find_invariant_subgraph(tt::TransitionMatrix(2, {1, 1, 0, 1}));
  ASSERT_TRUE(lin);
  EXPECT_EQ(*lin, std::vector<std::size_t>{0});
  EXPECT_FALSE(tt::find_invariant_subgraph(tt::TransitionMatrix(2, {1, 1, 1, 0})));
  auto const id = tt::find_invariant_subgraph(tt::TransitionMatrix::identity(2));
  ASSERT_TRUE(id);
  EXPECT_EQ(*id, std::vector<std::size_t>{0});
}

TEST(TakenTurns, Fibonacci) {
  auto const t = tt::taken_turns(fx::rose(fx::fibonacci));
  EXPECT_EQ(t, std::set<tt::Turn>{turn("Ab")});
}

TEST(TakenTurns, IdentityTakesNone) {
  EXPECT_TRUE(tt::taken_turns(fx::rose(fx::identity2)).empty());
}

TEST(TakenTurns, Rank4OnlyImageOfC) {
  EXPECT_EQ(tt::taken_turns(fx::rose(fx::rank4)), std::set<tt::Turn>{turn("Ab")});
}

TEST(TrainTrack, FibonacciTurnOrbit) {
  auto const f = fx::rose(fx::fibonacci);
  auto const v = tt::is_train_track(f);
  EXPECT_TRUE(v.train_track);
  EXPECT_FALSE(v.witness);
  // {A,b} -> {B,a} -> {A,a} -> {B,a}
  EXPECT_EQ(tt::derivative(f, turn("Ab")), turn("Ba"));
  EXPECT_EQ(tt::derivative(f, turn("Ba")), turn("Aa"));
  EXPECT_EQ(tt::derivative(f, turn("Aa")), turn("Ba"));
  EXPECT_EQ(v.closure_size, 3u);
  EXPECT_EQ(oracle::brute_force_failing_iterate(fx::fibonacci), 0);
}

TEST(TrainTrack, ConjugatedFibonacciFailsAtSecondIterate) {
  auto const v = tt::is_train_track(fx::rose(fx::fibonacci_conj_b));
  ASSERT_FALSE(v.train_track);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(v.witness->iterate, 2u);
  EXPECT_TRUE(v.witness->orbit.back().degenerate());
  EXPECT_EQ(oracle::brute_force_failing_iterate(fx::fibonacci_conj_b), 2);
}

TEST(TrainTrack, WitnessOrbitFollowsTheDerivative) {
  auto const f = fx::rose(fx::fibonacci_conj_b);
  auto const w = *tt::is_train_track(f).witness;
  for (std::size_t i = 1; i < w.orbit.size(); ++i) {
    EXPECT_EQ(tt::derivative(f, w.orbit[i - 1]), w.orbit[i]);
  }
  auto const img = f.image(w.edge);
  EXPECT_EQ(tt::turn_between(img[w.position - 1], img[w.position]), w.orbit.front());
}

TEST(TrainTrack, PositiveRank4IsATrainTrack) {
  EXPECT_TRUE(tt::is_train_track(fx::rose(fx::rank4)).train_track);
}

TEST(TrainTrack, AgreesWithBruteForceOnRandomMaps) {
  std::mt19937 rng(23);
  int          checked = 0;
  for (int i = 0; i < 400; ++i) {
    oracle::Images img{oracle::random_reduced_word(rng, 2, 1 + rng() % 4),
                       oracle::random_reduced_word(rng, 2, 1 + rng() % 4)};
    auto const f = fx::rose(img);
    auto const v = tt::is_train_track(f);
    int const  b = oracle::brute_force_failing_iterate(img, 8);
    if (v.train_track) {
      EXPECT_EQ(b, 0) << img[0] << " " << img[1];
    } else if (v.witness->iterate <= 8) {
      EXPECT_EQ(static_cast<std::size_t>(b), v.witness->iterate) << img[0] << " " << img[1];
    }
    ++checked;
  }
  EXPECT_EQ(checked, 400);
}

TEST(TrainTrack, IteratesOfTrainTracksNeverCancel) {
  for (auto const& e : oracle::rose_corpus()) {
    auto const f = fx::rose(e.images);
    if (!tt::is_train_track(f).train_track) {
      continue;
    }
    auto const a = tt::transition_matrix(f);
    for (std::size_t p = 0; p < e.images.size(); ++p) {
      for (std::size_t m = 1; m <= 10; ++m) {
        auto const path = tt::map_path_iterated(
            f, tt::tighten(f.domain(), {{tt::Letter::generator(static_cast<std::uint32_t>(p))}}), m);
        auto const        am   = a.power(m);
        std::int64_t      col  = 0;
        for (std::size_t r = 0; r < am.size(); ++r) {
          col += am.at(r, p);
        }
        EXPECT_EQ(static_cast<std::int64_t>(path.size()), col) << e.file << " m=" << m;
      }
    }
  }
}

TEST(IllegalTurns, FibonacciHasOnlyTheTurnMappedToDegenerate) {
  auto const ill = tt::illegal_turns(fx::rose(fx::fibonacci));
  // D(a) = D(b) = a, so {a, b} maps to {a, a}.
  EXPECT_EQ(ill, std::set<tt::Turn>{turn("ab")});
}

TEST(Compose, MatchesSequentialApplication) {
  auto const   f = fx::rose(fx::fibonacci);
  auto const   g = fx::rose(fx::fibonacci_conj_b);
  auto const   gf = tt::compose(g, f);
  std::mt19937 rng(31);
  for (int i = 0; i < 100; ++i) {
    auto const w = P(oracle::random_reduced_word(rng, 2, 1 + rng() % 8));
    EXPECT_EQ(tt::map_path(gf, w), tt::map_path(g, tt::map_path(f, w)));
  }
}
