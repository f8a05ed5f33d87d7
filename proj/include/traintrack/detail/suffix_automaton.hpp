#pragma once

// Suffix automaton over letters with a dense transition table on the
// letters that actually occur in the text (leaves use few of them).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "../word.hpp"

namespace traintrack::detail {

  class SuffixAutomaton {
   public:
    SuffixAutomaton() = default;

    explicit SuffixAutomaton(std::span<Letter const> text) {
      std::uint32_t max_code = 0;
      for (Letter x : text) {
        max_code = std::max(max_code, x.code());
      }
      dense_.assign(text.empty() ? 0 : max_code + 1, -1);
      for (Letter x : text) {
        if (dense_[x.code()] < 0) {
          dense_[x.code()] = static_cast<std::int32_t>(sigma_++);
        }
      }
      std::size_t const cap = 2 * text.size() + 2;
      len_.reserve(cap);
      link_.reserve(cap);
      next_.reserve(cap * sigma_);
      add_state(0, -1);
      std::int32_t last = 0;
      for (Letter x : text) {
        auto const   c   = static_cast<std::size_t>(dense_[x.code()]);
        std::int32_t cur = add_state(len_[last] + 1, -1);
        std::int32_t p   = last;
        while (p >= 0 && next_[p * sigma_ + c] < 0) {
          next_[p * sigma_ + c] = cur;
          p                     = link_[p];
        }
        if (p < 0) {
          link_[cur] = 0;
        } else {
          std::int32_t const q = next_[p * sigma_ + c];
          if (len_[p] + 1 == len_[q]) {
            link_[cur] = q;
          } else {
            std::int32_t const clone = add_state(len_[p] + 1, link_[q]);
            for (std::size_t a = 0; a < sigma_; ++a) {
              next_[clone * sigma_ + a] = next_[q * sigma_ + a];
            }
            while (p >= 0 && next_[p * sigma_ + c] == q) {
              next_[p * sigma_ + c] = clone;
              p                     = link_[p];
            }
            link_[q]   = clone;
            link_[cur] = clone;
          }
        }
        last = cur;
      }
    }

    [[nodiscard]] std::size_t state_count() const noexcept {
      return len_.size();
    }

    [[nodiscard]] bool contains(std::span<Letter const> s) const {
      std::int32_t v = 0;
      for (Letter x : s) {
        v = step(v, x);
        if (v < 0) {
          return false;
        }
      }
      return !len_.empty();
    }

    // Calls f(i, l) with l the length of the longest suffix of q[0..i] that
    // occurs in the text.
    template <class F>
    void match(std::span<Letter const> q, F&& f) const {
      if (len_.empty()) {
        for (std::size_t i = 0; i < q.size(); ++i) {
          f(i, std::size_t{0});
        }
        return;
      }
      std::int32_t v = 0;
      std::size_t  l = 0;
      for (std::size_t i = 0; i < q.size(); ++i) {
        while (v > 0 && step(v, q[i]) < 0) {
          v = link_[v];
          l = len_[v];
        }
        std::int32_t const w = step(v, q[i]);
        if (w >= 0) {
          v = w;
          ++l;
        } else {
          v = 0;
          l = 0;
        }
        f(i, l);
      }
    }

   private:
    std::int32_t add_state(std::int32_t len, std::int32_t link) {
      len_.push_back(len);
      link_.push_back(link);
      next_.resize(next_.size() + sigma_, -1);
      return static_cast<std::int32_t>(len_.size() - 1);
    }

    [[nodiscard]] std::int32_t step(std::int32_t v, Letter x) const {
      if (x.code() >= dense_.size() || dense_[x.code()] < 0) {
        return -1;
      }
      return next_[static_cast<std::size_t>(v) * sigma_
                   + static_cast<std::size_t>(dense_[x.code()])];
    }

    std::size_t               sigma_ = 0;
    std::vector<std::int32_t> dense_;
    std::vector<std::int32_t> len_, link_, next_;
  };

}  // namespace traintrack::detail
