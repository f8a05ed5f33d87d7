#pragma once

// Bounded cancellation: the Lip(f) vol bound and measured cancellation on
// split words.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "graph.hpp"
#include "graph_map.hpp"
#include "word.hpp"

namespace traintrack {

  inline double lipschitz(GraphMap const& f, Metric const& d) {
    double lip = 0.0;
    for (std::size_t p = 0; p < f.images().size(); ++p) {
      auto const e = OrientedEdge::generator(static_cast<std::uint32_t>(p));
      lip          = std::max(lip, path_length(f.image(p), d) / d.length(e));
    }
    return lip;
  }

  inline double volume(Graph const& g, Metric const& d) {
    if (d.size() != g.edge_pair_count()) {
      throw InputError("volume: metric does not match the graph");
    }
    double v = 0.0;
    for (double x : d.lengths()) {
      v += x;
    }
    return v;
  }

  struct CancellationBound {
    double                lip          = 0.0;
    double                vol          = 0.0;
    double                bound        = 0.0;
    std::optional<double> c_prime;  // bound / (lambda - 1) when expanding
    double                measured_max = 0.0;
  };

  inline CancellationBound cancellation_bound(GraphMap const&       f,
                                              Metric const&         d,
                                              std::optional<double> lambda = {}) {
    CancellationBound b;
    b.lip   = lipschitz(f, d);
    b.vol   = volume(f.domain(), d);
    b.bound = b.lip * b.vol;
    if (lambda && *lambda > 1.0 + 1e-9) {
      b.c_prime = b.bound / (*lambda - 1.0);
    }
    return b;
  }

  // Half the d-length lost when f(p) f(q) is tightened, maximized over the
  // split points of each sample path.
  inline double measure_cancellation(GraphMap const&             f,
                                     Metric const&               d,
                                     std::vector<Letters> const& samples) {
    double worst = 0.0;
    for (auto const& w : samples) {
      for (std::size_t i = 1; i < w.size(); ++i) {
        std::span<Letter const> s(w);
        auto const p  = detail::map_letters(f, s.first(i), kDefaultWordBudget);
        auto const q  = detail::map_letters(f, s.subspan(i), kDefaultWordBudget);
        Letters    pq = p;
        for (Letter x : q) {
          detail::push_reduced(pq, x);
        }
        // The cancelled letters are the last n letters of p.
        std::size_t const n = (p.size() + q.size() - pq.size()) / 2;
        double            c = 0.0;
        for (std::size_t j = p.size() - n; j < p.size(); ++j) {
          c += d.lengths()[p[j].index()];
        }
        worst = std::max(worst, c);
      }
    }
    return worst;
  }

  struct SampleOptions {
    std::size_t   count   = 200;
    std::size_t   min_len = 2;
    std::size_t   max_len = 12;
    std::uint64_t seed    = 0;
  };

  namespace detail {
    // Random tight edge paths; with legal_only every turn crossed is legal.
    inline std::vector<Letters> random_paths(GraphMap const&      f,
                                             SampleOptions const& opt,
                                             bool                 legal_only) {
      auto const&          g = f.domain();
      std::set<Turn> const illegal =
          legal_only ? illegal_turns(f) : std::set<Turn>{};
      std::mt19937_64      rng(opt.seed);
      std::vector<Letters> out;
      std::size_t const    dirs     = g.oriented_edge_count();
      std::size_t          attempts = 0;
      while (out.size() < opt.count && attempts < 100 * opt.count) {
        ++attempts;
        std::size_t const len =
            opt.min_len + static_cast<std::size_t>(rng() % (opt.max_len - opt.min_len + 1));
        Letters w{Letter::from_code(static_cast<std::uint32_t>(rng() % dirs))};
        while (w.size() < len) {
          auto const            v = g.terminus(w.back());
          std::vector<Letter> options;
          for (auto e : g.directions(v)) {
            if (e == w.back().inverse()) {
              continue;
            }
            if (legal_only && illegal.count(turn_between(w.back(), e))) {
              continue;
            }
            options.push_back(e);
          }
          if (options.empty()) {
            break;
          }
          w.push_back(options[rng() % options.size()]);
        }
        if (w.size() >= opt.min_len) {
          out.push_back(std::move(w));
        }
      }
      return out;
    }
  }  // namespace detail

  inline std::vector<Letters> sample_paths(GraphMap const&      f,
                                           SampleOptions const& opt = {}) {
    return detail::random_paths(f, opt, false);
  }

  inline std::vector<Letters> legal_sample_paths(GraphMap const&      f,
                                                 SampleOptions const& opt = {}) {
    return detail::random_paths(f, opt, true);
  }

}  // namespace traintrack
