#pragma once

// Verified train tracks and a compressed iteration engine for loops.
//
// A loop under iteration is kept as a cyclic list of tokens (x, n), each
// standing for the tight path f^n(x). Advancing bumps every level; the only
// cancellation happens at token junctions, where tokens are peeled into
// their level n-1 children until the cancelling letters meet. Lengths are
// read off level tables, so no iterate is ever spelled out.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "graph_map.hpp"
#include "spectral.hpp"
#include "word.hpp"

namespace traintrack {

  struct TrainTrackData {
    GraphMap          map;
    TransitionMatrix  matrix;
    PFData            pf;
    Metric            metric;
    TrainTrackVerdict verdict;

    [[nodiscard]] bool expanding() const noexcept {
      return pf.lambda > 1.0 + 1e-9;
    }
  };

  inline TrainTrackData make_train_track_data(GraphMap               f,
                                              SpectralOptions const& opt = {}) {
    auto verdict = is_train_track(f);
    if (!verdict.train_track) {
      throw PreconditionError("map is not a train track");
    }
    auto a = transition_matrix(f);
    if (!is_irreducible(a)) {
      throw PreconditionError("transition matrix is reducible");
    }
    auto   pf = perron_frobenius(a, opt);
    Metric d  = eigenmetric(f, pf);
    return TrainTrackData{std::move(f), std::move(a), std::move(pf),
                          std::move(d), std::move(verdict)};
  }

  // First letters of f^n(x) for n up to a fixed level.
  class IterationTables {
   public:
    IterationTables(GraphMap const& f, std::size_t levels)
        : map_(&f), levels_(levels) {
      std::size_t const dirs = f.domain().oriented_edge_count();
      first_.resize(levels + 1);
      first_[0].resize(dirs);
      for (std::uint32_t c = 0; c < dirs; ++c) {
        first_[0][c] = Letter::from_code(c);
      }
      for (std::size_t n = 1; n <= levels; ++n) {
        first_[n].resize(dirs);
        for (std::uint32_t c = 0; c < dirs; ++c) {
          first_[n][c] = f.derivative(first_[n - 1][c]);
        }
      }
    }

    [[nodiscard]] GraphMap const& map() const noexcept { return *map_; }
    [[nodiscard]] std::size_t     levels() const noexcept { return levels_; }

    [[nodiscard]] Letter first(Letter x, std::size_t n) const {
      return first_[n][x.code()];
    }
    [[nodiscard]] Letter last(Letter x, std::size_t n) const {
      return first_[n][x.inverse().code()].inverse();
    }

   private:
    GraphMap const*                  map_;
    std::size_t                      levels_;
    std::vector<std::vector<Letter>> first_;
  };

  // S[n] = w^T A^n / lambda^n, the weight-w length of f^n(e) scaled down.
  class LevelLengths {
   public:
    LevelLengths(TransitionMatrix const& a,
                 double                  lambda,
                 std::vector<double>     weights,
                 std::size_t             levels)
        : lambda_(lambda) {
      if (weights.size() != a.size()) {
        throw InputError("LevelLengths: weight vector has wrong size");
      }
      s_.reserve(levels + 1);
      s_.push_back(std::move(weights));
      for (std::size_t n = 1; n <= levels; ++n) {
        auto next = detail::times(s_.back(), a);
        for (auto& v : next) {
          v /= lambda;
        }
        s_.push_back(std::move(next));
      }
      inv_pow_.resize(levels + 1);
      inv_pow_[0] = 1.0;
      for (std::size_t j = 1; j <= levels; ++j) {
        inv_pow_[j] = inv_pow_[j - 1] / lambda;
      }
    }

    [[nodiscard]] double at(std::size_t n, std::size_t pair) const {
      return s_[n][pair];
    }
    [[nodiscard]] std::vector<double> const& row(std::size_t n) const {
      return s_[n];
    }
    // lambda^-j
    [[nodiscard]] double inverse_power(std::size_t j) const {
      return inv_pow_[j];
    }
    [[nodiscard]] double      lambda() const noexcept { return lambda_; }
    [[nodiscard]] std::size_t levels() const noexcept { return s_.size() - 1; }

   private:
    double                           lambda_;
    std::vector<std::vector<double>> s_;
    std::vector<double>              inv_pow_;
  };

  class IteratedLoop {
   public:
    struct Token {
      Letter        letter;
      std::uint32_t level;
    };

    IteratedLoop(IterationTables const& tables, CyclicWord const& loop)
        : t_(&tables) {
      for (Letter x : loop.letters()) {
        tokens_.push_back({x, 0});
      }
    }

    [[nodiscard]] std::size_t              step() const noexcept { return step_; }
    [[nodiscard]] std::vector<Token> const& tokens() const noexcept {
      return tokens_;
    }
    [[nodiscard]] bool empty() const noexcept { return tokens_.empty(); }

    void advance() {
      if (step_ >= t_->levels()) {
        throw BudgetExceeded("IteratedLoop: iteration tables exhausted", step_);
      }
      ++step_;
      std::vector<Token> todo;
      todo.reserve(tokens_.size());
      for (auto it = tokens_.rbegin(); it != tokens_.rend(); ++it) {
        todo.push_back({it->letter, it->level + 1});
      }
      std::vector<Token> out;
      out.reserve(tokens_.size());
      while (!todo.empty()) {
        Token const t = todo.back();
        todo.pop_back();
        if (!out.empty() && last(out.back()) == first(t).inverse()) {
          Token const o = out.back();
          if (o.level == 0 && t.level == 0) {
            out.pop_back();
            continue;
          }
          if (o.level >= t.level) {
            out.pop_back();
            push_children(o, out);
            todo.push_back(t);
          } else {
            push_children_reversed(t, todo);
          }
          continue;
        }
        out.push_back(t);
      }
      std::deque<Token> ring(out.begin(), out.end());
      close_up(ring);
      tokens_.assign(ring.begin(), ring.end());
    }

    // Sum over tokens of lambda^(n - step) S[n](x): the length of the current
    // iterate divided by lambda^step.
    [[nodiscard]] double scaled_length(LevelLengths const& s) const {
      double sum = 0.0;
      for (auto const& t : tokens_) {
        sum += s.inverse_power(step_ - t.level) * s.at(t.level, t.letter.index());
      }
      return sum;
    }

    // Spells out the current iterate; intended for tests and small cases.
    [[nodiscard]] Letters spell(std::size_t budget = kDefaultWordBudget) const {
      Letters out;
      for (auto const& t : tokens_) {
        spell_token(t, out, budget);
      }
      return out;
    }

   private:
    [[nodiscard]] Letter first(Token t) const {
      return t_->first(t.letter, t.level);
    }
    [[nodiscard]] Letter last(Token t) const {
      return t_->last(t.letter, t.level);
    }

    template <class Out>
    void for_children(Token t, Out&& out) const {
      auto const&         f   = t_->map();
      std::size_t const   len = f.image_length(t.letter);
      std::uint32_t const lvl = t.level - 1;
      for (std::size_t i = 0; i < len; ++i) {
        out(Token{f.image_at(t.letter, i), lvl});
      }
    }

    void push_children(Token t, std::vector<Token>& out) const {
      for_children(t, [&](Token c) { out.push_back(c); });
    }

    void push_children_reversed(Token t, std::vector<Token>& todo) const {
      auto const&       f   = t_->map();
      std::size_t const len = f.image_length(t.letter);
      for (std::size_t i = len; i-- > 0;) {
        todo.push_back(Token{f.image_at(t.letter, i), t.level - 1});
      }
    }

    void close_up(std::deque<Token>& ring) const {
      while (!ring.empty()) {
        if (ring.size() == 1) {
          Token const t = ring.front();
          if (t.level == 0 || last(t) != first(t).inverse()) {
            return;
          }
          ring.pop_front();
          for_children(t, [&](Token c) { ring.push_back(c); });
          continue;
        }
        Token const b = ring.back();
        Token const f = ring.front();
        if (last(b) != first(f).inverse()) {
          return;
        }
        if (b.level == 0 && f.level == 0) {
          ring.pop_back();
          ring.pop_front();
        } else if (b.level >= f.level) {
          ring.pop_back();
          for_children(b, [&](Token c) { ring.push_back(c); });
        } else {
          ring.pop_front();
          std::vector<Token> kids;
          for_children(f, [&](Token c) { kids.push_back(c); });
          for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
            ring.push_front(*it);
          }
        }
      }
    }

    void spell_token(Token t, Letters& out, std::size_t budget) const {
      if (t.level == 0) {
        if (out.size() >= budget) {
          throw BudgetExceeded("IteratedLoop::spell: budget exceeded", step_);
        }
        out.push_back(t.letter);
        return;
      }
      for_children(t, [&](Token c) { spell_token(c, out, budget); });
    }

    IterationTables const* t_;
    std::vector<Token>     tokens_;
    std::size_t            step_ = 0;
  };

}  // namespace traintrack
