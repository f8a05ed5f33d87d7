#pragma once

// Stable laminations of expanding irreducible train tracks, symbolically:
// eigen-seeds, leaf windows around the anchored fixed point, occurrence
// windows and leaf-segment search.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "detail/suffix_automaton.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "graph_map.hpp"
#include "limit_metric.hpp"
#include "train_track.hpp"
#include "word.hpp"

namespace traintrack {

  inline constexpr std::size_t kDefaultLeafRadius = std::size_t{1} << 18;

  struct LeafSeed {
    std::size_t edge    = 0;  // edge pair
    std::size_t power_k = 0;
    std::size_t anchor  = 0;  // position of the fixed occurrence in f^k(e)
    bool        positive = true;
  };

  // Smallest k <= k_cap such that f^k(e) contains e (up to orientation) at
  // least three times, for the first candidate edge achieving it. The anchor
  // is a positively oriented interior occurrence closest to the middle.
  inline LeafSeed find_eigen_seed(TrainTrackData const&           tt,
                                  std::size_t                     k_cap = 20,
                                  std::vector<std::size_t> const& candidates = {},
                                  std::size_t budget = kDefaultWordBudget) {
    if (!tt.expanding()) {
      throw PreconditionError("find_eigen_seed: map is not expanding");
    }
    std::vector<std::size_t> edges = candidates;
    if (edges.empty()) {
      edges.resize(tt.map.domain().edge_pair_count());
      std::iota(edges.begin(), edges.end(), std::size_t{0});
    }
    std::vector<Letters> cur;
    for (auto e : edges) {
      cur.push_back({OrientedEdge::generator(static_cast<std::uint32_t>(e))});
    }
    for (std::size_t k = 1; k <= k_cap; ++k) {
      for (std::size_t i = 0; i < edges.size(); ++i) {
        try {
          cur[i] = detail::map_letters(tt.map, cur[i], budget);
        } catch (BudgetExceeded const&) {
          throw PreconditionError("find_eigen_seed: iterates exceed budget at k = "
                                  + std::to_string(k));
        }
        auto const& w     = cur[i];
        std::size_t count = 0;
        for (Letter x : w) {
          count += x.index() == edges[i];
        }
        if (count < 3) {
          continue;
        }
        double const mid  = (static_cast<double>(w.size()) - 1.0) / 2.0;
        std::optional<std::size_t> best;
        for (std::size_t p = 1; p + 1 < w.size(); ++p) {
          if (w[p] == OrientedEdge::generator(static_cast<std::uint32_t>(edges[i]))
              && (!best
                  || std::abs(static_cast<double>(p) - mid)
                         < std::abs(static_cast<double>(*best) - mid))) {
            best = p;
          }
        }
        if (best) {
          return LeafSeed{edges[i], k, *best, true};
        }
      }
    }
    throw PreconditionError("find_eigen_seed: no seed with power <= "
                            + std::to_string(k_cap));
  }

  struct LeafPrefix {
    LeafSeed      seed;
    std::size_t   depth       = 0;
    std::uint64_t full_length = 0;  // |f^(k depth)(e)|
    std::uint64_t center      = 0;  // anchored edge, in full-leaf coordinates
    std::uint64_t offset      = 0;  // window start, in full-leaf coordinates
    Letters       window;
    bool          truncated = false;

    [[nodiscard]] std::size_t center_in_window() const noexcept {
      return static_cast<std::size_t>(center - offset);
    }
  };

  namespace detail {
    // len[n][pair] = |f^n(pair)|; throws once a length leaves uint64.
    inline std::vector<std::vector<std::uint64_t>>
    length_table(GraphMap const& f, std::size_t levels) {
      std::size_t const                       n = f.domain().edge_pair_count();
      std::vector<std::vector<std::uint64_t>> len(levels + 1,
                                                  std::vector<std::uint64_t>(n));
      std::fill(len[0].begin(), len[0].end(), 1);
      for (std::size_t l = 1; l <= levels; ++l) {
        for (std::size_t p = 0; p < n; ++p) {
          std::uint64_t s = 0;
          for (auto x : f.image(p)) {
            if (__builtin_add_overflow(s, len[l - 1][x.index()], &s)) {
              throw BudgetExceeded("leaf length overflows 64 bits", l - 1);
            }
          }
          len[l][p] = s;
        }
      }
      return len;
    }

    // Appends letters [lo, hi) of f^n(x).
    inline void extract(GraphMap const&                                f,
                        std::vector<std::vector<std::uint64_t>> const& len,
                        Letter                                         x,
                        std::size_t                                    n,
                        std::uint64_t                                  lo,
                        std::uint64_t                                  hi,
                        Letters&                                       out) {
      if (n == 0) {
        if (lo == 0 && hi >= 1) {
          out.push_back(x);
        }
        return;
      }
      std::uint64_t     at = 0;
      std::size_t const m  = f.image_length(x);
      for (std::size_t i = 0; i < m && at < hi; ++i) {
        Letter const        y  = f.image_at(x, i);
        std::uint64_t const ly = len[n - 1][y.index()];
        if (at + ly > lo) {
          std::uint64_t const a = lo > at ? lo - at : 0;
          std::uint64_t const b = std::min(hi - at, ly);
          extract(f, len, y, n - 1, a, b, out);
        }
        at += ly;
      }
    }

    inline std::vector<std::size_t> prefix_function(std::span<Letter const> s) {
      std::vector<std::size_t> pi(s.size(), 0);
      for (std::size_t i = 1; i < s.size(); ++i) {
        std::size_t k = pi[i - 1];
        while (k > 0 && s[i] != s[k]) {
          k = pi[k - 1];
        }
        if (s[i] == s[k]) {
          ++k;
        }
        pi[i] = k;
      }
      return pi;
    }

    // Start positions of pattern in text (KMP).
    inline std::vector<std::size_t> occurrences(std::span<Letter const> text,
                                                std::span<Letter const> pat) {
      std::vector<std::size_t> out;
      if (pat.empty() || pat.size() > text.size()) {
        return out;
      }
      auto const  pi = prefix_function(pat);
      std::size_t k  = 0;
      for (std::size_t i = 0; i < text.size(); ++i) {
        while (k > 0 && text[i] != pat[k]) {
          k = pi[k - 1];
        }
        if (text[i] == pat[k]) {
          ++k;
        }
        if (k == pat.size()) {
          out.push_back(i + 1 - k);
          k = pi[k - 1];
        }
      }
      return out;
    }
  }  // namespace detail

  // The depth-d leaf f^(kd)(e) is laid out so the anchored occurrence at
  // depth d+1 is the center of depth d; only a window of the given radius
  // around the center is spelled.
  inline LeafPrefix expand_leaf(TrainTrackData const& tt,
                                LeafSeed const&       seed,
                                std::size_t           depth,
                                std::size_t           radius = kDefaultLeafRadius,
                                std::size_t           budget = kDefaultWordBudget) {
    auto const&       f     = tt.map;
    std::size_t const k     = seed.power_k;
    auto const        len   = detail::length_table(f, k * depth);
    Letter const      e     = OrientedEdge::generator(static_cast<std::uint32_t>(seed.edge));
    Letters           alpha = {e};
    for (std::size_t i = 0; i < k; ++i) {
      alpha = detail::map_letters(f, alpha, budget);
    }
    alpha.resize(seed.anchor);
    std::uint64_t center = 0;
    for (std::size_t d = 0; d < depth; ++d) {
      std::uint64_t shift = 0;
      for (auto y : alpha) {
        shift += len[k * d][y.index()];
      }
      center += shift;
    }
    LeafPrefix out;
    out.seed        = seed;
    out.depth       = depth;
    out.full_length = len[k * depth][seed.edge];
    out.center      = center;
    std::uint64_t const lo = center > radius ? center - radius : 0;
    std::uint64_t const hi = std::min<std::uint64_t>(out.full_length,
                                                     center + radius + 1);
    if (hi - lo > budget) {
      throw BudgetExceeded("expand_leaf: window exceeds budget", depth);
    }
    out.offset    = lo;
    out.truncated = lo > 0 || hi < out.full_length;
    out.window.reserve(static_cast<std::size_t>(hi - lo));
    detail::extract(f, len, e, k * depth, lo, hi, out.window);
    if (out.window[out.center_in_window()] != e) {
      throw ConsistencyError("expand_leaf: anchor is not at the center");
    }
    return out;
  }

  // Letters around the center with '|' before the anchored edge.
  inline std::string format_leaf(Graph const& g, LeafPrefix const& leaf,
                                 std::size_t radius) {
    std::size_t const c  = leaf.center_in_window();
    std::size_t const lo = c > radius ? c - radius : 0;
    std::size_t const hi = std::min(leaf.window.size(), c + radius + 1);
    std::span<Letter const> w(leaf.window);
    return g.format(w.subspan(lo, c - lo)) + "|" + g.format(w.subspan(c, hi - c));
  }

  // True when leaf d sits inside leaf d+1 with the centers aligned, over the
  // part both windows cover.
  inline bool nested(LeafPrefix const& inner, LeafPrefix const& outer) {
    auto const ci = static_cast<std::int64_t>(inner.center_in_window());
    auto const co = static_cast<std::int64_t>(outer.center_in_window());
    for (std::size_t i = 0; i < inner.window.size(); ++i) {
      std::int64_t const j = static_cast<std::int64_t>(i) - ci + co;
      if (j < 0 || j >= static_cast<std::int64_t>(outer.window.size())) {
        if (!inner.truncated && !outer.truncated) {
          return false;
        }
        continue;
      }
      if (inner.window[i] != outer.window[static_cast<std::size_t>(j)]) {
        return false;
      }
    }
    return true;
  }

  // Word is a proper power u^r, r >= 2.
  inline bool is_proper_power(std::span<Letter const> s) {
    if (s.size() < 2) {
      return false;
    }
    auto const        pi = detail::prefix_function(s);
    std::size_t const p  = s.size() - pi.back();
    return p < s.size() && s.size() % p == 0;
  }

  struct QuasiperiodWindow {
    std::size_t L           = 0;
    bool        certified   = false;
    std::size_t occurrences = 0;
  };

  // Smallest L such that every length-L window of the prefix contains the
  // segment or its reverse. Certified when two such windows fit.
  inline QuasiperiodWindow quasiperiodicity_window(LeafPrefix const& leaf,
                                                   Letters const&    segment) {
    auto pos = detail::occurrences(leaf.window, segment);
    auto rev = detail::occurrences(leaf.window, detail::inverse_of(segment));
    pos.insert(pos.end(), rev.begin(), rev.end());
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    if (pos.empty()) {
      throw PreconditionError("quasiperiodicity_window: not a leaf segment");
    }
    std::size_t const s = segment.size();
    std::size_t const N = leaf.window.size();
    QuasiperiodWindow q;
    q.occurrences = pos.size();
    q.L           = std::max(pos.front() + s, N - pos.back());
    for (std::size_t j = 1; j < pos.size(); ++j) {
      q.L = std::max(q.L, pos[j] - pos[j - 1] - 1 + s);
    }
    q.certified = 2 * q.L <= N;
    return q;
  }

  ////////////////////////////////////////////////////////////////////////
  // Corpus: one leaf per block
  ////////////////////////////////////////////////////////////////////////

  struct LeafCorpusOptions {
    std::size_t depth  = 12;
    std::size_t radius = kDefaultLeafRadius;
    std::size_t k_cap  = 20;
    std::size_t budget = kDefaultWordBudget;
  };

  class LeafCorpus {
   public:
    LeafCorpus(TrainTrackData const& tt, LeafCorpusOptions const& opt = {})
        : nu_(tt.pf.nu), k_(tt.pf.k) {
      if (!tt.expanding()) {
        throw PreconditionError("leaf corpus: map is not expanding");
      }
      for (std::size_t b = 0; b < tt.pf.k; ++b) {
        auto const seed = find_eigen_seed(tt, opt.k_cap, tt.pf.blocks[b], opt.budget);
        leaves_.push_back(expand_leaf(tt, seed, opt.depth, opt.radius, opt.budget));
        automata_.emplace_back(leaves_.back().window);
      }
    }

    [[nodiscard]] std::size_t block_count() const noexcept { return k_; }
    [[nodiscard]] LeafPrefix const& leaf(std::size_t block) const {
      return leaves_.at(block);
    }
    [[nodiscard]] std::vector<LeafPrefix> const& leaves() const noexcept {
      return leaves_;
    }
    [[nodiscard]] std::vector<double> const& nu() const noexcept { return nu_; }

    // Block i maps into block i+1.
    [[nodiscard]] std::size_t image_block(std::size_t block) const noexcept {
      return (block + 1) % k_;
    }

    // The path or its reverse occurs in the block's leaf window.
    [[nodiscard]] bool occurs(std::size_t block, std::span<Letter const> p) const {
      auto const& sa = automata_.at(block);
      return sa.contains(p) || sa.contains(detail::inverse_of(p));
    }

    [[nodiscard]] detail::SuffixAutomaton const& automaton(std::size_t block) const {
      return automata_.at(block);
    }

   private:
    std::vector<double>                  nu_;
    std::size_t                          k_;
    std::vector<LeafPrefix>              leaves_;
    std::vector<detail::SuffixAutomaton> automata_;
  };

  struct LeafMatch {
    std::size_t block  = 0;
    double      length = 0.0;  // eigenmetric
    std::size_t edges  = 0;
  };

  // Longest subpath of the loop (read cyclically, both orientations) that
  // occurs in some leaf window.
  inline LeafMatch longest_leaf_segment(CyclicWord const& w,
                                        LeafCorpus const& corpus) {
    LeafMatch best;
    if (w.empty()) {
      return best;
    }
    std::size_t const n = w.size();
    for (int orient = 0; orient < 2; ++orient) {
      Letters q(w.letters().begin(), w.letters().end());
      if (orient == 1) {
        q = detail::inverse_of(q);
      }
      q.insert(q.end(), q.begin(), q.end());
      std::vector<double> prefix(q.size() + 1, 0.0);
      for (std::size_t i = 0; i < q.size(); ++i) {
        prefix[i + 1] = prefix[i] + corpus.nu()[q[i].index()];
      }
      for (std::size_t b = 0; b < corpus.block_count(); ++b) {
        corpus.automaton(b).match(q, [&](std::size_t i, std::size_t l) {
          l = std::min(l, n);
          if (l == 0) {
            return;
          }
          double const len = prefix[i + 1] - prefix[i + 1 - l];
          if (len > best.length + 1e-12) {
            best = {b, len, l};
          }
        });
      }
    }
    return best;
  }

  struct ProbeOptions {
    std::size_t M      = 20;
    std::size_t budget = kDefaultWordBudget;
  };

  struct ProbeResult {
    std::vector<double>      lengths;  // m = 0..(computed)
    std::vector<std::size_t> blocks;
    std::size_t              stride    = 1;
    bool                     truncated = false;
    bool                     grows     = false;
  };

  // Growth verdict over the terms at m = 0, k, 2k, ...: the last quartile is
  // strictly increasing and its mean exceeds three times the first quartile's.
  inline bool probe_grows(std::vector<double> const& lengths, std::size_t stride) {
    std::vector<double> s;
    for (std::size_t m = 0; m < lengths.size(); m += stride) {
      s.push_back(lengths[m]);
    }
    std::size_t const q = std::max<std::size_t>(2, s.size() / 4);
    if (s.size() < 2 * q) {
      return false;
    }
    for (std::size_t i = s.size() - q + 1; i < s.size(); ++i) {
      if (!(s[i] > s[i - 1])) {
        return false;
      }
    }
    double first = 0.0, last = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
      first += s[i];
      last += s[s.size() - q + i];
    }
    return last > 3.0 * first;
  }

  inline ProbeResult weak_limit_probe(GraphMap const&     f,
                                      CyclicWord const&   w,
                                      LeafCorpus const&   corpus,
                                      ProbeOptions const& opt = {}) {
    ProbeResult r;
    r.stride       = corpus.block_count();
    CyclicWord cur = w;
    for (std::size_t m = 0;; ++m) {
      auto const hit = longest_leaf_segment(cur, corpus);
      r.lengths.push_back(hit.length);
      r.blocks.push_back(hit.block);
      if (m == opt.M) {
        break;
      }
      try {
        cur = image_loop(f, cur, opt.budget);
      } catch (BudgetExceeded const&) {
        r.truncated = true;
        break;
      }
    }
    r.grows = probe_grows(r.lengths, r.stride);
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // Structural checks
  ////////////////////////////////////////////////////////////////////////

  // Seeds a leaf at every edge and merges leaves whose central segments
  // occur in one another; returns the number of classes.
  inline std::size_t count_leaf_orbits(TrainTrackData const& tt,
                                       std::size_t           radius  = 1024,
                                       std::size_t           segment = 32,
                                       std::size_t           k_cap   = 20) {
    std::size_t const       n = tt.map.domain().edge_pair_count();
    std::vector<LeafPrefix> leaves;
    for (std::size_t e = 0; e < n; ++e) {
      auto const  seed  = find_eigen_seed(tt, k_cap, {e});
      std::size_t depth = 1;
      auto        leaf  = expand_leaf(tt, seed, depth, radius);
      while (leaf.full_length < 2 * radius + 1 && depth < 64) {
        leaf = expand_leaf(tt, seed, ++depth, radius);
      }
      leaves.push_back(std::move(leaf));
    }
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) {
        x = parent[x] = parent[parent[x]];
      }
      return x;
    };
    std::vector<detail::SuffixAutomaton> sa;
    for (auto const& l : leaves) {
      sa.emplace_back(l.window);
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto const&       w  = leaves[i].window;
      std::size_t const c  = leaves[i].center_in_window();
      std::size_t const lo = c > segment ? c - segment : 0;
      std::size_t const hi = std::min(w.size(), c + segment + 1);
      std::span<Letter const> mid(w.data() + lo, hi - lo);
      auto const              rev = detail::inverse_of(mid);
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && (sa[j].contains(mid) || sa[j].contains(rev))) {
          parent[find(i)] = find(j);
        }
      }
    }
    std::size_t classes = 0;
    for (std::size_t i = 0; i < n; ++i) {
      classes += find(i) == i;
    }
    return classes;
  }

  // f carries the central part of each block leaf into the next block's leaf.
  inline bool block_permutation_check(TrainTrackData const& tt,
                                      LeafCorpus const&     corpus,
                                      std::size_t           segment = 64) {
    for (std::size_t b = 0; b < corpus.block_count(); ++b) {
      auto const&       leaf = corpus.leaf(b);
      std::size_t const c    = leaf.center_in_window();
      std::size_t const lo   = c > segment ? c - segment : 0;
      std::size_t const hi   = std::min(leaf.window.size(), c + segment + 1);
      std::span<Letter const> mid(leaf.window.data() + lo, hi - lo);
      auto const image = detail::map_letters(tt.map, mid, kDefaultWordBudget);
      std::size_t const next = corpus.image_block(b);
      for (Letter x : image) {
        if (tt.pf.block_of[x.index()] != next) {
          return false;
        }
      }
      if (!corpus.occurs(next, image)) {
        return false;
      }
    }
    return true;
  }

}  // namespace traintrack
