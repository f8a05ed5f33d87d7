#pragma once

// Translation lengths under iteration: normalized sequences, limit lengths
// in the limit forest, per-block factor lengths and growth classification.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "automorphism.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "graph_map.hpp"
#include "train_track.hpp"
#include "word.hpp"

namespace traintrack {

  inline double translation_length(CyclicWord const& x, Metric const& d) {
    return path_length(x.letters(), d);
  }

  // The loop f(x), cyclically tightened.
  inline CyclicWord image_loop(GraphMap const&   f,
                               CyclicWord const& x,
                               std::size_t       budget = kDefaultWordBudget) {
    return CyclicWord(cyclically_reduced(detail::map_letters(f, x.letters(), budget)));
  }

  struct LengthTerm {
    std::size_t m          = 0;
    double      raw        = 0.0;
    double      normalized = 0.0;
  };

  struct LengthSequence {
    CyclicWord              word;
    std::vector<LengthTerm> terms;
    bool                    truncated = false;
  };

  // Explicit iteration; terms stop early (flagged) when the budget is hit.
  inline LengthSequence normalized_sequence(GraphMap const&   f,
                                            CyclicWord const& x,
                                            Metric const&     d,
                                            double            lambda,
                                            std::size_t       M,
                                            std::size_t budget = kDefaultWordBudget) {
    LengthSequence seq{x, {}, false};
    CyclicWord     cur   = x;
    double         scale = 1.0;
    for (std::size_t m = 0;; ++m) {
      double const raw = translation_length(cur, d);
      seq.terms.push_back({m, raw, raw * scale});
      if (m == M) {
        break;
      }
      try {
        cur = image_loop(f, cur, budget);
      } catch (BudgetExceeded const&) {
        seq.truncated = true;
        break;
      }
      scale /= lambda;
    }
    return seq;
  }

  inline LengthSequence normalized_sequence(Automorphism const& psi,
                                            CyclicWord const&   x,
                                            Metric const&       d,
                                            double              lambda,
                                            std::size_t         M,
                                            std::size_t budget = kDefaultWordBudget) {
    return normalized_sequence(rose_map(psi), x, d, lambda, M, budget);
  }

  // Same sequence through the compressed engine, eigenmetric lengths.
  inline LengthSequence normalized_sequence(TrainTrackData const& tt,
                                            CyclicWord const&     x,
                                            std::size_t           M) {
    IterationTables const tables(tt.map, M);
    LevelLengths const    nu(tt.matrix, tt.pf.lambda, tt.pf.nu, M);
    IteratedLoop          loop(tables, x);
    LengthSequence        seq{x, {}, false};
    double                grow = 1.0;
    for (std::size_t m = 0;; ++m) {
      double const s = loop.scaled_length(nu);
      seq.terms.push_back({m, s * grow, s});
      if (m == M) {
        break;
      }
      loop.advance();
      grow *= tt.pf.lambda;
    }
    return seq;
  }

  ////////////////////////////////////////////////////////////////////////
  // Growth classification
  ////////////////////////////////////////////////////////////////////////

  enum class GrowthKind { Exponential, Polynomial };

  struct Growth {
    GrowthKind  kind   = GrowthKind::Polynomial;
    double      rate   = 1.0;  // Exponential
    std::size_t degree = 0;    // Polynomial
    double      statistic      = 0.0;
    std::size_t terms          = 0;  // iterates actually computed
    bool        truncated      = false;
    bool        low_confidence = false;

    [[nodiscard]] bool exponential() const noexcept {
      return kind == GrowthKind::Exponential;
    }
  };

  inline std::string to_string(Growth const& g) {
    char buf[64];
    if (g.exponential()) {
      std::snprintf(buf, sizeof buf, "Exponential(%.9g)", g.rate);
    } else {
      std::snprintf(buf, sizeof buf, "Polynomial(%zu)", g.degree);
    }
    return buf;
  }

  struct ClassifyOptions {
    std::size_t M          = 40;
    double      epsilon    = 0.05;
    double      gray_floor = 0.01;
    std::size_t escalate_M = 80;
    std::size_t budget     = kDefaultWordBudget;
    double      window_growth = 1.05;
  };

  namespace detail {
    // Values in the last window stay within 5% of the previous window.
    inline bool bounded_tail(std::vector<double> const& v, double growth) {
      if (v.size() < 4) {
        return false;
      }
      std::size_t const w    = std::min<std::size_t>(10, v.size() / 2);
      double            last = 0.0, prev = 0.0;
      for (std::size_t i = v.size() - w; i < v.size(); ++i) {
        last = std::max(last, std::abs(v[i]));
      }
      for (std::size_t i = v.size() - 2 * w; i < v.size() - w; ++i) {
        prev = std::max(prev, std::abs(v[i]));
      }
      return last <= growth * prev + 1e-9;
    }

    inline std::vector<double> differences(std::vector<double> v) {
      for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        v[i] = v[i + 1] - v[i];
      }
      if (!v.empty()) {
        v.pop_back();
      }
      return v;
    }

    inline std::size_t last_quartile_start(std::size_t n) {
      std::size_t const q = std::max<std::size_t>(2, (n + 1) / 4);
      return n + 1 > q ? std::max<std::size_t>(1, n + 1 - q) : 1;
    }

    // Cyclic word lengths of f^m(x) for m = 0..M, stopping at the budget.
    inline std::vector<double> cyclic_lengths(GraphMap const&   f,
                                              CyclicWord const& x,
                                              std::size_t       M,
                                              std::size_t       budget,
                                              bool&             truncated) {
      std::vector<double> out{static_cast<double>(x.size())};
      Letters             cur(x.letters().begin(), x.letters().end());
      truncated = false;
      for (std::size_t m = 1; m <= M; ++m) {
        try {
          cur = cyclically_reduced(map_letters(f, cur, budget));
        } catch (BudgetExceeded const&) {
          truncated = true;
          break;
        }
        out.push_back(static_cast<double>(cur.size()));
      }
      return out;
    }
  }  // namespace detail

  // Least d <= max_degree whose d-th differences are bounded, if any.
  inline std::optional<std::size_t>
  polynomial_degree(std::vector<double> const& lengths,
                    std::size_t                max_degree,
                    double                     window_growth = 1.05) {
    auto v = lengths;
    for (std::size_t d = 0; d <= max_degree; ++d) {
      if (detail::bounded_tail(v, window_growth)) {
        return d;
      }
      v = detail::differences(std::move(v));
    }
    return std::nullopt;
  }

  inline Growth classify_lengths(std::vector<double> const& L,
                                 std::size_t                rank,
                                 ClassifyOptions const&     opt) {
    Growth g;
    g.terms = L.empty() ? 0 : L.size() - 1;
    if (L.empty() || L.front() == 0.0) {
      return g;
    }
    if (auto d = polynomial_degree(L, rank, opt.window_growth)) {
      g.degree = *d;
      return g;
    }
    std::size_t const n     = L.size() - 1;
    std::size_t const start = detail::last_quartile_start(n);
    double            stat  = 0.0;
    std::size_t       cnt   = 0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t m = start; m <= n; ++m) {
      double const y = std::log(L[m]);
      stat += y / static_cast<double>(m);
      ++cnt;
      double const x = static_cast<double>(m);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    g.statistic = cnt ? stat / static_cast<double>(cnt) : 0.0;
    if (g.statistic > std::log1p(opt.epsilon)) {
      double const c     = static_cast<double>(cnt);
      double const denom = c * sxx - sx * sx;
      double const slope = denom > 0.0 ? (c * sxy - sx * sy) / denom : g.statistic;
      g.kind = GrowthKind::Exponential;
      g.rate = std::exp(slope);
      return g;
    }
    // No bounded difference and no clear exponential rate: estimate the
    // degree from the log-log slope over the second half.
    g.low_confidence = true;
    std::size_t const h = std::max<std::size_t>(1, n / 2);
    double const      a = std::log(static_cast<double>(h) + 1.0);
    double const      b = std::log(static_cast<double>(n) + 1.0);
    double const      s = b > a ? (std::log(L[n]) - std::log(L[h])) / (b - a) : 0.0;
    g.degree = static_cast<std::size_t>(
        std::clamp(std::round(s), 0.0, static_cast<double>(rank)));
    return g;
  }

  inline Growth classify_growth(GraphMap const&        f,
                                CyclicWord const&      x,
                                ClassifyOptions const& opt = {}) {
    std::size_t const rank = f.domain().rank();
    bool              truncated = false;
    auto L = detail::cyclic_lengths(f, x, opt.M, opt.budget, truncated);
    Growth g = classify_lengths(L, rank, opt);
    bool const gray = !g.exponential() && !truncated && g.low_confidence
                      && g.statistic > std::log1p(opt.gray_floor)
                      && opt.M < opt.escalate_M;
    if (gray) {
      L = detail::cyclic_lengths(f, x, opt.escalate_M, opt.budget, truncated);
      g = classify_lengths(L, rank, opt);
    }
    g.truncated = truncated;
    if (truncated) {
      g.low_confidence = true;
    }
    return g;
  }

  inline Growth classify_growth(Automorphism const&    psi,
                                CyclicWord const&      x,
                                ClassifyOptions const& opt = {}) {
    return classify_growth(rose_map(psi), x, opt);
  }

  ////////////////////////////////////////////////////////////////////////
  // Limit lengths
  ////////////////////////////////////////////////////////////////////////

  struct LimitOptions {
    std::size_t     M        = 40;  // strided terms; iterations = M * k
    double          tol      = 1e-9;
    double          zero_tol = 1e-6;
    double          slack    = 1e-9;
    ClassifyOptions classify;
  };

  struct LimitLengthReport {
    CyclicWord          word;
    double              limit      = 0.0;
    bool                converged  = false;
    double              cauchy_gap = 0.0;
    std::size_t         stride     = 1;
    std::vector<double> per_block;
    std::vector<double> strided;  // normalized eigenmetric lengths at m = jk
    Growth              classification;
  };

  namespace detail {
    struct StridedRun {
      std::vector<double>              total;
      std::vector<std::vector<double>> blocks;  // [block][j]
    };

    // Normalized lengths at m = 0, k, 2k, ..., Mk, total and per block.
    inline StridedRun strided_run(TrainTrackData const& tt,
                                  CyclicWord const&     x,
                                  std::size_t           M) {
      std::size_t const     k = tt.pf.k;
      std::size_t const     N = M * k;
      IterationTables const tables(tt.map, N);
      LevelLengths const    nu(tt.matrix, tt.pf.lambda, tt.pf.nu, N);
      std::vector<LevelLengths> masked;
      for (auto const& block : tt.pf.blocks) {
        std::vector<double> w(tt.pf.nu.size(), 0.0);
        for (auto e : block) {
          w[e] = tt.pf.nu[e];
        }
        masked.emplace_back(tt.matrix, tt.pf.lambda, std::move(w), N);
      }
      IteratedLoop loop(tables, x);
      StridedRun   run;
      run.blocks.resize(masked.size());
      for (std::size_t m = 0;; ++m) {
        if (m % k == 0) {
          run.total.push_back(loop.scaled_length(nu));
          for (std::size_t i = 0; i < masked.size(); ++i) {
            run.blocks[i].push_back(loop.scaled_length(masked[i]));
          }
        }
        if (m == N) {
          break;
        }
        loop.advance();
      }
      return run;
    }
  }  // namespace detail

  inline LimitLengthReport limit_length(TrainTrackData const& tt,
                                        CyclicWord const&     x,
                                        LimitOptions const&   opt = {}) {
    LimitLengthReport r;
    r.word   = x;
    r.stride = tt.pf.k;
    if (!tt.expanding()) {
      r.per_block.assign(tt.pf.k, 0.0);
      r.converged      = true;
      r.classification = classify_growth(tt.map, x, opt.classify);
      return r;
    }
    auto const run = detail::strided_run(tt, x, opt.M);
    for (std::size_t j = 1; j < run.total.size(); ++j) {
      double const prev = run.total[j - 1], cur = run.total[j];
      if (cur > prev + opt.slack * std::max(1.0, prev)) {
        throw ConsistencyError("strided normalized lengths of " + to_string(x)
                               + " increase at term " + std::to_string(j));
      }
    }
    r.strided = run.total;
    r.limit   = run.total.back();
    r.cauchy_gap =
        run.total.size() >= 2 ? run.total[run.total.size() - 2] - r.limit : 0.0;
    r.converged = r.cauchy_gap < opt.tol;
    for (auto const& b : run.blocks) {
      r.per_block.push_back(b.back());
    }
    if (r.limit > opt.zero_tol) {
      r.classification.kind  = GrowthKind::Exponential;
      r.classification.rate  = tt.pf.lambda;
      r.classification.terms = opt.M * tt.pf.k;
    } else {
      auto g = classify_growth(tt.map, x, opt.classify);
      if (g.exponential()) {
        g.kind           = GrowthKind::Polynomial;
        g.degree         = 0;
        g.low_confidence = true;
      }
      r.classification = g;
    }
    return r;
  }

  inline std::vector<double> per_block_lengths(TrainTrackData const& tt,
                                               CyclicWord const&     x,
                                               std::size_t           M = 40) {
    if (!tt.expanding()) {
      return std::vector<double>(tt.pf.k, 0.0);
    }
    auto const          run = detail::strided_run(tt, x, M);
    std::vector<double> out;
    for (auto const& b : run.blocks) {
      out.push_back(b.back());
    }
    return out;
  }

  struct HomothetyResult {
    double      max_relative_error = 0.0;
    CyclicWord  worst;
    std::size_t words_checked = 0;
  };

  // ||f(x)||_inf against lambda ||x||_inf over the given words; words whose
  // limit vanishes are skipped.
  inline HomothetyResult homothety_check(TrainTrackData const&          tt,
                                         std::vector<CyclicWord> const& words,
                                         LimitOptions const&            opt = {}) {
    HomothetyResult r;
    for (auto const& x : words) {
      if (!tt.expanding()) {
        ++r.words_checked;
        continue;
      }
      auto const lx = limit_length(tt, x, opt);
      if (lx.limit <= opt.zero_tol) {
        continue;
      }
      auto const   fx  = limit_length(tt, image_loop(tt.map, x), opt);
      double const err = std::abs(fx.limit - tt.pf.lambda * lx.limit)
                         / (tt.pf.lambda * lx.limit);
      ++r.words_checked;
      if (err >= r.max_relative_error) {
        r.max_relative_error = err;
        r.worst              = x;
      }
    }
    return r;
  }

}  // namespace traintrack
