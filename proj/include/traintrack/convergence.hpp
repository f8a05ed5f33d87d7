#pragma once

// Convergence constants relating an arbitrary edge metric to the limit
// factor metrics: c_i = lim lambda^(-mk) alt(f^(mk)(s)) / nu(s) over leaf
// segments s of block i, and the matching check on arbitrary loops.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "lamination.hpp"
#include "limit_metric.hpp"
#include "train_track.hpp"
#include "word.hpp"

namespace traintrack {

  struct ConvergenceOptions {
    std::size_t depth              = 30;  // m; iterations m * k
    std::size_t segments_per_block = 8;
    double      spread_limit       = 1e-4;
  };

  struct ConvergenceConstants {
    std::vector<double>              c;
    double                           max_spread = 0.0;
    std::vector<std::vector<double>> estimates;  // [block][segment]
    std::vector<std::vector<Letters>> segments;
  };

  namespace detail {
    // Distinct segments around the leaf center, growing alternately to the
    // right and the left.
    inline std::vector<Letters> central_segments(LeafPrefix const& leaf,
                                                 std::size_t       count) {
      std::vector<Letters> out;
      std::set<Letters>    seen;
      std::size_t const    c = leaf.center_in_window();
      std::size_t          lo = c, hi = c + 1;
      for (std::size_t step = 0; out.size() < count && step < 4 * count; ++step) {
        Letters s(leaf.window.begin() + static_cast<std::ptrdiff_t>(lo),
                  leaf.window.begin() + static_cast<std::ptrdiff_t>(hi));
        if (seen.insert(s).second) {
          out.push_back(std::move(s));
        }
        if (step % 2 == 0 && hi < leaf.window.size()) {
          ++hi;
        } else if (lo > 0) {
          --lo;
        } else if (hi < leaf.window.size()) {
          ++hi;
        } else {
          break;
        }
      }
      return out;
    }
  }  // namespace detail

  inline ConvergenceConstants convergence_constants(TrainTrackData const&     tt,
                                                    LeafCorpus const&         corpus,
                                                    Metric const&             alt,
                                                    ConvergenceOptions const& opt = {}) {
    if (!tt.expanding()) {
      throw PreconditionError("convergence_constants: map is not expanding");
    }
    if (alt.size() != tt.pf.nu.size()) {
      throw InputError("convergence_constants: metric does not match the graph");
    }
    std::size_t const  N = opt.depth * tt.pf.k;
    LevelLengths const s(tt.matrix, tt.pf.lambda, alt.lengths(), N);
    ConvergenceConstants out;
    for (std::size_t b = 0; b < corpus.block_count(); ++b) {
      auto segs = detail::central_segments(corpus.leaf(b), opt.segments_per_block);
      std::vector<double> est;
      for (auto const& seg : segs) {
        double num = 0.0, den = 0.0;
        for (Letter x : seg) {
          num += s.at(N, x.index());
          den += tt.pf.nu[x.index()];
        }
        est.push_back(num / den);
      }
      double mean = 0.0;
      for (double v : est) {
        mean += v;
      }
      mean /= static_cast<double>(est.size());
      for (double v : est) {
        out.max_spread = std::max(out.max_spread, std::abs(v - mean));
      }
      out.c.push_back(mean);
      out.estimates.push_back(std::move(est));
      out.segments.push_back(std::move(segs));
    }
    if (out.max_spread > opt.spread_limit) {
      throw ConsistencyError("convergence constants spread "
                             + std::to_string(out.max_spread)
                             + " exceeds limit");
    }
    return out;
  }

  struct UniformRow {
    CyclicWord word;
    double     alt_limit = 0.0;  // lim lambda^(-mk) alt(f^(mk)(x))
    double     predicted = 0.0;  // sum_i c_i per_block_i
  };

  struct UniformCheck {
    std::vector<UniformRow> rows;
    double                  max_error = 0.0;
  };

  inline UniformCheck uniform_constant_check(TrainTrackData const&          tt,
                                             ConvergenceConstants const&    cc,
                                             Metric const&                  alt,
                                             std::vector<CyclicWord> const& loops,
                                             std::size_t                    M = 40) {
    std::size_t const     k = tt.pf.k;
    std::size_t const     N = M * k;
    IterationTables const tables(tt.map, N);
    LevelLengths const    a(tt.matrix, tt.pf.lambda, alt.lengths(), N);
    UniformCheck          out;
    for (auto const& x : loops) {
      IteratedLoop loop(tables, x);
      for (std::size_t m = 0; m < N; ++m) {
        loop.advance();
      }
      UniformRow row{x, loop.scaled_length(a), 0.0};
      auto const per_block = per_block_lengths(tt, x, M);
      for (std::size_t i = 0; i < per_block.size(); ++i) {
        row.predicted += cc.c[i] * per_block[i];
      }
      out.max_error = std::max(out.max_error, std::abs(row.alt_limit - row.predicted)
                                                  / std::max(1.0, row.predicted));
      out.rows.push_back(std::move(row));
    }
    return out;
  }

}  // namespace traintrack
