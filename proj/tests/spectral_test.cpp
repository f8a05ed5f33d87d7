#include <gtest/gtest.h>

#include <random>

#include "support/fixtures.hpp"
#include "traintrack/spectral.hpp"

namespace tt = traintrack;

namespace {
  std::vector<double> normalized(std::vector<double> v) {
    double s = 0;
    for (double x : v) {
      s += x;
    }
    for (double& x : v) {
      x /= s;
    }
    return v;
  }

  tt::TransitionMatrix matrix(oracle::Images const& img) {
    return tt::transition_matrix(fx::rose(img));
  }
}  // namespace

TEST(PerronFrobenius, FibonacciMatchesCharacteristicPolynomial) {
  auto const pf  = tt::perron_frobenius(matrix(fx::fibonacci));
  double const l = oracle::largest_root(oracle::occurrence_matrix(fx::fibonacci));
  EXPECT_NEAR(l, oracle::golden(), 1e-12);
  EXPECT_NEAR(pf.lambda, l, 1e-9);
  // nu = (lambda, 1) / (lambda + 1)
  EXPECT_NEAR(pf.nu[0], l / (l + 1), 1e-9);
  EXPECT_NEAR(pf.nu[1], 1 / (l + 1), 1e-9);
  EXPECT_NEAR(pf.nu[0], 0.618034, 1e-6);
  EXPECT_NEAR(pf.nu[1], 0.381966, 1e-6);
  EXPECT_EQ(pf.k, 1u);
}

TEST(PerronFrobenius, PermutationHasLambdaOne) {
  auto const pf = tt::perron_frobenius(matrix(fx::swap));
  EXPECT_NEAR(pf.lambda, 1.0, 1e-12);
  EXPECT_NEAR(pf.nu[0], 0.5, 1e-12);
  EXPECT_NEAR(pf.nu[1], 0.5, 1e-12);
}

TEST(PerronFrobenius, Rank4IsSquareRootOfGolden) {
  auto const   pf = tt::perron_frobenius(matrix(fx::rank4));
  auto const   a  = oracle::occurrence_matrix(fx::rank4);
  double const l  = oracle::largest_root(a);
  EXPECT_NEAR(l, std::sqrt(oracle::golden()), 1e-10);
  EXPECT_NEAR(pf.lambda, l, 1e-8);
  auto const nu = normalized(oracle::null_vector(a, l, true));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(pf.nu[i], nu[i], 1e-8);
  }
}

TEST(PerronFrobenius, ResidualAndPositivity) {
  for (auto const& img : {fx::fibonacci, fx::rank4, fx::swap, fx::fibonacci_conj_b}) {
    auto const pf = tt::perron_frobenius(matrix(img));
    EXPECT_LT(pf.residual, 1e-9);
    double sum = 0;
    for (double v : pf.nu) {
      EXPECT_GT(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_GE(pf.lambda, 1.0 - 1e-12);
  }
}

TEST(PerronFrobenius, ReducibleMatrixIsRejected) {
  EXPECT_THROW(tt::perron_frobenius(matrix(fx::linear)), tt::PreconditionError);
}

TEST(PerronFrobenius, RandomPrimitiveMatricesAgreeWithOracle) {
  std::mt19937 rng(41);
  int          tested = 0;
  while (tested < 40) {
    std::size_t const         n = 2 + rng() % 3;
    std::vector<std::int64_t> e(n * n);
    for (auto& x : e) {
      x = static_cast<std::int64_t>(rng() % 3);
    }
    tt::TransitionMatrix const a(n, e);
    if (!tt::is_irreducible(a)) {
      continue;
    }
    oracle::Matrix m(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        m[i][j] = static_cast<double>(a.at(i, j));
      }
    }
    auto const pf = tt::perron_frobenius(a);
    EXPECT_NEAR(pf.lambda, oracle::largest_root(m), 1e-7);
    ++tested;
  }
}

TEST(PerronFrobenius, LambdaOneIffAllColumnSumsAreOne) {
  for (auto const& e : oracle::rose_corpus()) {
    auto const a = matrix(e.images);
    if (!tt::is_irreducible(a)) {
      continue;
    }
    bool unit = true;
    for (std::size_t j = 0; j < a.size(); ++j) {
      unit = unit && a.column_sum(j) == 1;
    }
    EXPECT_EQ(tt::perron_frobenius(a).lambda < 1 + 1e-9, unit) << e.file;
  }
}

TEST(CyclicIndex, FibonacciIsPrimitive) {
  auto const c = tt::cyclic_index(matrix(fx::fibonacci));
  EXPECT_EQ(c.k, 1u);
  ASSERT_EQ(c.blocks.size(), 1u);
  EXPECT_EQ(c.blocks[0], (std::vector<std::size_t>{0, 1}));
}

TEST(CyclicIndex, SwapHasTwoBlocks) {
  auto const c = tt::cyclic_index(matrix(fx::swap));
  EXPECT_EQ(c.k, 2u);
  EXPECT_EQ(c.blocks[0], std::vector<std::size_t>{0});
  EXPECT_EQ(c.blocks[1], std::vector<std::size_t>{1});
}

TEST(CyclicIndex, Rank4BlocksAreAbAndCd) {
  auto const c = tt::cyclic_index(matrix(fx::rank4));
  EXPECT_EQ(c.k, 2u);
  EXPECT_EQ(c.blocks[0], (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(c.blocks[1], (std::vector<std::size_t>{2, 3}));
}

TEST(CyclicIndex, BlocksAreMappedCyclically) {
  auto const a = matrix(fx::rank4);
  auto const c = tt::cyclic_index(a);
  // An arc f -> e (e occurs in the image of f) advances the block by one.
  for (std::size_t f = 0; f < a.size(); ++f) {
    for (std::size_t e = 0; e < a.size(); ++e) {
      if (a.at(e, f) > 0) {
        EXPECT_EQ(c.block_of[e], (c.block_of[f] + 1) % c.k);
      }
    }
  }
}

TEST(CyclicIndex, FirstReturnIsPrimitiveOnRank4) {
  auto const pf = tt::perron_frobenius(matrix(fx::rank4));
  EXPECT_EQ(pf.primitive_first_return, (std::vector<bool>{true, true}));
}

TEST(Eigenmetric, FibonacciIsAHomothety) {
  auto const f  = fx::rose(fx::fibonacci);
  auto const pf = tt::perron_frobenius(tt::transition_matrix(f));
  auto const d  = tt::eigenmetric(f, pf);
  EXPECT_NEAR(tt::path_length(f.image(std::size_t{0}), d), 1.0, 1e-9);
  EXPECT_NEAR(tt::path_length(f.image(std::size_t{0}), d), pf.lambda * d.lengths()[0], 1e-9);
  EXPECT_LT(tt::homothety_defect(f, pf), 1e-9);
}

TEST(Eigenmetric, PermutationIsAnIsometry) {
  auto const f  = fx::rose(fx::swap);
  auto const pf = tt::perron_frobenius(tt::transition_matrix(f));
  EXPECT_NEAR(pf.nu[0], 0.5, 1e-12);
  EXPECT_LT(tt::homothety_defect(f, pf), 1e-12);
}

TEST(Eigenmetric, Rank4EigenEquationAtColumnC) {
  auto const f  = fx::rose(fx::rank4);
  auto const pf = tt::perron_frobenius(tt::transition_matrix(f));
  EXPECT_NEAR(pf.nu[0] + pf.nu[1], pf.lambda * pf.nu[2], 1e-9);
  EXPECT_LT(tt::homothety_defect(f, pf), 1e-9);
}
