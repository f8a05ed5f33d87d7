#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "traintrack/limit_metric.hpp"
#include "traintrack/pipeline.hpp"

namespace tt = traintrack;

namespace {
  struct Eigen {
    double              lambda;
    std::vector<double> nu;
  };

  Eigen oracle_eigen(oracle::Images const& img) {
    auto const a = oracle::occurrence_matrix(img);
    Eigen      e{oracle::largest_root(a), {}};
    e.nu       = oracle::null_vector(a, e.lambda, true);
    double s   = 0;
    for (double v : e.nu) {
      s += v;
    }
    for (double& v : e.nu) {
      v /= s;
    }
    return e;
  }

  // lambda^-m |f^m(w)|_nu by explicit string iteration.
  double oracle_normalized(oracle::Images const& img, std::string w, std::size_t m) {
    auto const e     = oracle_eigen(img);
    double     scale = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      w = oracle::cyclic_core(oracle::substitute_raw(img, w));
      scale /= e.lambda;
    }
    double len = 0;
    for (char c : w) {
      len += e.nu[static_cast<std::size_t>(std::tolower(c) - 'a')];
    }
    return len * scale;
  }
}  // namespace

TEST(TranslationLength, Examples) {
  auto const data = fx::data(fx::fibonacci);
  EXPECT_EQ(tt::translation_length(fx::cyc("1"), data.metric), 0.0);
  EXPECT_NEAR(tt::translation_length(fx::cyc("a"), data.metric), 0.618034, 1e-6);
  EXPECT_EQ(tt::translation_length(fx::cyc("aB"), tt::Metric::unit(2)), 2.0);
  EXPECT_EQ(tt::translation_length(fx::cyc("abA"), tt::Metric::unit(2)), 1.0);
}

TEST(NormalizedSequence, FibonacciFollowsBinet) {
  auto const   data = fx::data(fx::fibonacci);
  auto const   seq  = tt::normalized_sequence(data.map, fx::cyc("a"), data.metric,
                                              data.pf.lambda, 25);
  double const phi  = oracle::golden();
  double const na = 1 / phi, nb = 1 / (phi * phi);
  for (auto const& t : seq.terms) {
    int const m = static_cast<int>(t.m);
    EXPECT_NEAR(t.raw, oracle::fib(m + 1) * na + oracle::fib(m) * nb, 1e-9 * t.raw);
  }
  for (std::size_t m = 1; m < seq.terms.size(); ++m) {
    EXPECT_LE(seq.terms[m].normalized, seq.terms[m - 1].normalized + 1e-12);
  }
  // (phi nu_a + nu_b) / sqrt 5 = 1 / phi
  EXPECT_NEAR((phi * na + nb) / std::sqrt(5.0), 1 / phi, 1e-15);
  EXPECT_NEAR(seq.terms.back().normalized, 1 / phi, 1e-9);
}

TEST(NormalizedSequence, IdentityIsConstant) {
  auto const id  = tt::Automorphism::identity(2);
  auto const seq = tt::normalized_sequence(id, fx::cyc("aB"), tt::Metric::unit(2), 1.0, 10);
  for (auto const& t : seq.terms) {
    EXPECT_EQ(t.raw, 2.0);
    EXPECT_EQ(t.normalized, 2.0);
  }
}

TEST(NormalizedSequence, LinearGrowthIsUnbounded) {
  auto const psi = fx::automorphism(fx::linear);
  auto const seq = tt::normalized_sequence(psi, fx::cyc("b"), tt::Metric::unit(2), 1.0, 12);
  for (auto const& t : seq.terms) {
    // cyclically b a^m
    EXPECT_EQ(t.raw, static_cast<double>(t.m + 1));
  }
}

TEST(NormalizedSequence, BudgetTruncatesAndFlags) {
  auto const data = fx::data(fx::fibonacci);
  auto const seq  = tt::normalized_sequence(data.map, fx::cyc("a"), data.metric,
                                            data.pf.lambda, 60, 1000);
  EXPECT_TRUE(seq.truncated);
  EXPECT_LT(seq.terms.size(), 61u);
}

TEST(LimitLength, FibonacciGeneratorIsInverseGolden) {
  auto const data = fx::data(fx::fibonacci);
  auto const r    = tt::limit_length(data, fx::cyc("a"));
  EXPECT_NEAR(r.limit, 1 / oracle::golden(), 1e-9);
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.classification.exponential());
  EXPECT_NEAR(r.classification.rate, oracle::golden(), 1e-9);
  EXPECT_NEAR(tt::limit_length(data, fx::cyc("b")).limit, 1 / std::pow(oracle::golden(), 2), 1e-9);
}

TEST(LimitLength, PositiveWordsKeepTheirEigenLength) {
  auto const data = fx::data(fx::fibonacci);
  for (std::string w : {"ab", "aab", "abab", "aabab"}) {
    auto const x = fx::cyc(w);
    EXPECT_NEAR(tt::limit_length(data, x).limit, tt::translation_length(x, data.metric), 1e-9);
  }
}

TEST(LimitLength, MatchesExplicitIterationOracle) {
  for (auto const& img : {fx::fibonacci, fx::rank4}) {
    auto const data = fx::data(img);
    std::size_t const rank = img.size();
    for (auto const& w : oracle::cyclic_classes(rank, rank == 2 ? 4 : 2)) {
      double const expect = oracle_normalized(img, w, rank == 2 ? 22 : 30);
      auto const   r      = tt::limit_length(data, fx::cyc(w, rank));
      if (expect > 1e-3) {
        EXPECT_NEAR(r.limit, expect, 1e-8) << w;
      } else {
        // Bounded classes: the finite-m value still decays like lambda^-m.
        EXPECT_LT(r.limit, 1e-6) << w;
        EXPECT_LT(expect, 1e-4) << w;
      }
    }
  }
}

TEST(LimitLength, FibonacciCommutatorIsPeriodic) {
  // The conjugacy class of [a, b] is fixed up to inversion, so its lengths
  // stay bounded and the limit vanishes.
  std::string w = "abAB";
  for (int m = 0; m < 30; ++m) {
    w = oracle::cyclic_core(oracle::substitute_raw(fx::fibonacci, w));
    EXPECT_EQ(w.size(), 4u);
  }
  auto const data = fx::data(fx::fibonacci);
  auto const r    = tt::limit_length(data, fx::cyc("abAB"));
  EXPECT_LT(r.limit, 1e-6);
  EXPECT_FALSE(r.classification.exponential());
  EXPECT_EQ(r.classification.degree, 0u);
}

TEST(LimitLength, ConvergesWithinTolerance) {
  auto const data = fx::data(fx::rank4);
  auto const r    = tt::limit_length(data, fx::cyc("aC", 4));
  EXPECT_EQ(r.stride, 2u);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.cauchy_gap, 1e-9);
}

TEST(PerBlock, SingleBlockIsTheLimit) {
  auto const data = fx::data(fx::fibonacci);
  auto const r    = tt::limit_length(data, fx::cyc("aB"));
  ASSERT_EQ(r.per_block.size(), 1u);
  EXPECT_NEAR(r.per_block[0], r.limit, 1e-12);
}

TEST(PerBlock, Rank4MixedWordSplitsBetweenBlocks) {
  auto const data = fx::data(fx::rank4);
  auto const r    = tt::limit_length(data, fx::cyc("ac", 4));
  ASSERT_EQ(r.per_block.size(), 2u);
  EXPECT_GT(r.per_block[0], 0.0);
  EXPECT_GT(r.per_block[1], 0.0);
  EXPECT_NEAR(r.per_block[0] + r.per_block[1], r.limit, 1e-12);
}

TEST(PerBlock, Rank4WordInOneBlockHasOneSidedSupport) {
  auto const data = fx::data(fx::rank4);
  auto const pb   = tt::per_block_lengths(data, fx::cyc("a", 4));
  EXPECT_GT(pb[0], 0.0);
  EXPECT_EQ(pb[1], 0.0);
  auto const pc = tt::per_block_lengths(data, fx::cyc("cd", 4));
  EXPECT_EQ(pc[0], 0.0);
  EXPECT_GT(pc[1], 0.0);
}

TEST(ClassifyGrowth, Examples) {
  auto const fib = tt::classify_growth(fx::automorphism(fx::fibonacci), fx::cyc("a"));
  EXPECT_TRUE(fib.exponential());
  EXPECT_NEAR(fib.rate, oracle::golden(), 1e-3);

  auto const lin = tt::classify_growth(fx::automorphism(fx::linear), fx::cyc("b"));
  EXPECT_FALSE(lin.exponential());
  EXPECT_EQ(lin.degree, 1u);

  auto const id = tt::classify_growth(tt::Automorphism::identity(2), fx::cyc("a"));
  EXPECT_FALSE(id.exponential());
  EXPECT_EQ(id.degree, 0u);

  auto const fixed = tt::classify_growth(fx::automorphism(fx::linear), fx::cyc("a"));
  EXPECT_EQ(fixed.degree, 0u);
}

TEST(ClassifyGrowth, QuadraticGrowth) {
  // a -> a, b -> ba, c -> cb: |f^m(c)| grows like m^2 / 2.
  auto const g = tt::classify_growth(fx::automorphism({"a", "ba", "cb"}), fx::cyc("c", 3));
  EXPECT_FALSE(g.exponential());
  EXPECT_EQ(g.degree, 2u);
}

TEST(ClassifyGrowth, Rank4GrowsAtSquareRootGolden) {
  auto const g = tt::classify_growth(fx::automorphism(fx::rank4), fx::cyc("a", 4));
  EXPECT_TRUE(g.exponential());
  EXPECT_NEAR(g.rate, std::sqrt(oracle::golden()), 1e-2);
}

TEST(ClassifyGrowth, BudgetTruncationIsFlagged) {
  tt::ClassifyOptions opt;
  opt.budget = 500;
  auto const g = tt::classify_growth(fx::automorphism(fx::fibonacci), fx::cyc("a"), opt);
  EXPECT_TRUE(g.truncated);
  EXPECT_TRUE(g.exponential());
}

TEST(Homothety, FibonacciShortWords) {
  auto const data = fx::data(fx::fibonacci);
  auto const h    = tt::homothety_check(data, tt::cyclic_word_sweep(2, 3));
  EXPECT_GT(h.words_checked, 0u);
  EXPECT_LT(h.max_relative_error, 1e-6);
}

TEST(Homothety, Rank4ShortWords) {
  auto const       data = fx::data(fx::rank4);
  tt::LimitOptions opt;
  opt.M = 60;
  auto const h = tt::homothety_check(data, tt::cyclic_word_sweep(4, 3), opt);
  EXPECT_GT(h.words_checked, 0u);
  EXPECT_LT(h.max_relative_error, 1e-5);
}

TEST(Homothety, PermutationIsExact) {
  auto const data = fx::data(fx::swap);
  EXPECT_FALSE(data.expanding());
  auto const h = tt::homothety_check(data, tt::cyclic_word_sweep(2, 2));
  EXPECT_EQ(h.max_relative_error, 0.0);
  for (auto const& x : tt::cyclic_word_sweep(2, 3)) {
    EXPECT_EQ(tt::translation_length(tt::image_loop(data.map, x), data.metric),
              tt::translation_length(x, data.metric));
  }
}

TEST(Monotonicity, StridedSequencesNeverIncrease) {
  for (auto const& img : {fx::fibonacci, oracle::Images{"ba", "a"}, fx::rank4}) {
    auto const        data = fx::data(img);
    std::size_t const len  = img.size() == 2 ? 6 : 3;
    for (auto const& x : tt::cyclic_word_sweep(img.size(), len)) {
      auto const r = tt::limit_length(data, x);
      for (std::size_t j = 1; j < r.strided.size(); ++j) {
        EXPECT_LE(r.strided[j], r.strided[j - 1] + 1e-9 * std::max(1.0, r.strided[j - 1]));
      }
    }
  }
}

TEST(CyclicSweep, MatchesOracleEnumeration) {
  for (std::size_t rank : {2u, 3u}) {
    auto const lib = fx::all_words(tt::cyclic_word_sweep(rank, 4));
    auto const ref = oracle::cyclic_classes(rank, 4);
    EXPECT_EQ(std::set<std::string>(lib.begin(), lib.end()),
              std::set<std::string>(ref.begin(), ref.end()));
    EXPECT_EQ(lib.size(), ref.size());
  }
}
