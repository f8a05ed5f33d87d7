#pragma once

// Letters, freely reduced words and cyclic words over a finite symmetric
// alphabet. A letter is also an oriented edge: on a rose the two coincide,
// and the graph modules reuse the same encoding for general graphs.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace traintrack {

  // Generator (or edge-pair) index plus orientation, packed as 2*index+sign.
  // The packed order is generator index first, positive before inverse.
  class Letter {
   public:
    constexpr Letter() = default;

    static constexpr Letter generator(std::uint32_t index,
                                      bool inverted = false) noexcept {
      return Letter(index * 2u + (inverted ? 1u : 0u));
    }

    static constexpr Letter from_code(std::uint32_t code) noexcept {
      return Letter(code);
    }

    [[nodiscard]] constexpr std::uint32_t code() const noexcept {
      return code_;
    }
    [[nodiscard]] constexpr std::uint32_t index() const noexcept {
      return code_ >> 1;
    }
    [[nodiscard]] constexpr bool inverted() const noexcept {
      return (code_ & 1u) != 0;
    }
    [[nodiscard]] constexpr Letter inverse() const noexcept {
      return Letter(code_ ^ 1u);
    }

    constexpr auto operator<=>(Letter const&) const = default;

   private:
    constexpr explicit Letter(std::uint32_t code) noexcept : code_(code) {}
    std::uint32_t code_ = 0;
  };

  using Letters = std::vector<Letter>;

  namespace detail {
    // Appends x to an already reduced sequence, cancelling against the tail.
    inline void push_reduced(Letters& out, Letter x) {
      if (!out.empty() && out.back() == x.inverse()) {
        out.pop_back();
      } else {
        out.push_back(x);
      }
    }

    inline bool is_reduced(std::span<Letter const> s) noexcept {
      for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i] == s[i - 1].inverse()) {
          return false;
        }
      }
      return true;
    }

    inline bool is_cyclically_reduced(std::span<Letter const> s) noexcept {
      return is_reduced(s)
             && (s.size() < 2 || s.front() != s.back().inverse());
    }

    inline Letters inverse_of(std::span<Letter const> s) {
      Letters out;
      out.reserve(s.size());
      for (auto it = s.rbegin(); it != s.rend(); ++it) {
        out.push_back(it->inverse());
      }
      return out;
    }

    // Index of the lexicographically least rotation (two-pointer method).
    inline std::size_t least_rotation(std::span<Letter const> s) noexcept {
      std::size_t const n = s.size();
      if (n < 2) {
        return 0;
      }
      std::size_t i = 0, j = 1, k = 0;
      while (i < n && j < n && k < n) {
        Letter const a = s[(i + k) % n];
        Letter const b = s[(j + k) % n];
        if (a == b) {
          ++k;
          continue;
        }
        if (a > b) {
          i += k + 1;
        } else {
          j += k + 1;
        }
        if (i == j) {
          ++j;
        }
        k = 0;
      }
      return std::min(i, j);
    }
  }  // namespace detail

  // A freely reduced word. Construction from raw letters always reduces.
  class Word {
   public:
    Word() = default;

    explicit Word(std::span<Letter const> raw) {
      letters_.reserve(raw.size());
      for (Letter x : raw) {
        detail::push_reduced(letters_, x);
      }
    }

    Word(std::initializer_list<Letter> raw)
        : Word(std::span<Letter const>(raw.begin(), raw.size())) {}

    // Takes ownership of letters the caller guarantees to be reduced.
    static Word from_reduced(Letters letters) {
      Word w;
      w.letters_ = std::move(letters);
      return w;
    }

    [[nodiscard]] std::span<Letter const> letters() const noexcept {
      return letters_;
    }
    [[nodiscard]] Letters const& vector() const noexcept { return letters_; }
    [[nodiscard]] std::size_t size() const noexcept { return letters_.size(); }
    [[nodiscard]] bool empty() const noexcept { return letters_.empty(); }
    [[nodiscard]] Letter operator[](std::size_t i) const { return letters_[i]; }
    [[nodiscard]] auto begin() const noexcept { return letters_.begin(); }
    [[nodiscard]] auto end() const noexcept { return letters_.end(); }

    [[nodiscard]] Word inverse() const {
      return from_reduced(detail::inverse_of(letters_));
    }

    friend Word operator*(Word const& u, Word const& v) {
      Letters out = u.letters_;
      out.reserve(u.size() + v.size());
      for (Letter x : v.letters_) {
        detail::push_reduced(out, x);
      }
      return from_reduced(std::move(out));
    }

    bool operator==(Word const&) const = default;
    auto operator<=>(Word const& other) const {
      return std::lexicographical_compare_three_way(
          letters_.begin(), letters_.end(), other.letters_.begin(),
          other.letters_.end());
    }

   private:
    Letters letters_;
  };

  inline Word reduce(std::span<Letter const> raw) { return Word(raw); }

  // A cyclically reduced word considered up to rotation. The stored letters
  // keep the rotation they were built with; equality, ordering and hashing
  // use the least rotation.
  class CyclicWord {
   public:
    CyclicWord() = default;

    // Letters must already be cyclically reduced.
    explicit CyclicWord(Letters letters) : letters_(std::move(letters)) {
      if (!detail::is_cyclically_reduced(letters_)) {
        throw InputError("CyclicWord: letters are not cyclically reduced");
      }
      offset_ = detail::least_rotation(letters_);
    }

    [[nodiscard]] std::span<Letter const> letters() const noexcept {
      return letters_;
    }
    [[nodiscard]] std::size_t size() const noexcept { return letters_.size(); }
    [[nodiscard]] bool empty() const noexcept { return letters_.empty(); }

    // Letter i of the canonical rotation.
    [[nodiscard]] Letter canonical_at(std::size_t i) const noexcept {
      return letters_[(offset_ + i) % letters_.size()];
    }

    [[nodiscard]] Letters canonical() const {
      Letters out;
      out.reserve(letters_.size());
      for (std::size_t i = 0; i < letters_.size(); ++i) {
        out.push_back(canonical_at(i));
      }
      return out;
    }

    [[nodiscard]] CyclicWord inverse() const {
      return CyclicWord(detail::inverse_of(letters_));
    }

    [[nodiscard]] Word as_word() const { return Word::from_reduced(letters_); }

    friend bool operator==(CyclicWord const& a, CyclicWord const& b) noexcept {
      if (a.size() != b.size()) {
        return false;
      }
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.canonical_at(i) != b.canonical_at(i)) {
          return false;
        }
      }
      return true;
    }

    friend std::strong_ordering operator<=>(CyclicWord const& a,
                                            CyclicWord const& b) noexcept {
      if (auto c = a.size() <=> b.size(); c != 0) {
        return c;
      }
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (auto c = a.canonical_at(i) <=> b.canonical_at(i); c != 0) {
          return c;
        }
      }
      return std::strong_ordering::equal;
    }

    [[nodiscard]] std::size_t hash() const noexcept {
      std::size_t h = 1469598103934665603ull;
      for (std::size_t i = 0; i < letters_.size(); ++i) {
        h = (h ^ canonical_at(i).code()) * 1099511628211ull;
      }
      return h;
    }

   private:
    Letters     letters_;
    std::size_t offset_ = 0;
  };

  struct CyclicReduction {
    Word       core;        // cyclically reduced, unrotated
    Word       conjugator;  // w = conjugator * core * conjugator^-1
    CyclicWord cyclic;
  };

  inline CyclicReduction cyclic_reduce(Word const& w) {
    auto const  s = w.letters();
    std::size_t lo = 0, hi = s.size();
    while (hi - lo >= 2 && s[lo] == s[hi - 1].inverse()) {
      ++lo;
      --hi;
    }
    Letters core(s.begin() + static_cast<std::ptrdiff_t>(lo),
                 s.begin() + static_cast<std::ptrdiff_t>(hi));
    Letters conj(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(lo));
    CyclicWord cyc(core);
    return {Word::from_reduced(std::move(core)),
            Word::from_reduced(std::move(conj)), std::move(cyc)};
  }

  inline CyclicWord to_cyclic(Word const& w) {
    return cyclic_reduce(w).cyclic;
  }

  // Reduces in place and strips inverse pairs across the wraparound.
  inline Letters cyclically_reduced(Letters s) {
    Letters out;
    out.reserve(s.size());
    for (Letter x : s) {
      detail::push_reduced(out, x);
    }
    std::size_t lo = 0, hi = out.size();
    while (hi - lo >= 2 && out[lo] == out[hi - 1].inverse()) {
      ++lo;
      --hi;
    }
    if (lo > 0) {
      out.erase(out.begin() + static_cast<std::ptrdiff_t>(hi), out.end());
      out.erase(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(lo));
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Text form: a..z are generators 0..25, A..Z their inverses.
  ////////////////////////////////////////////////////////////////////////

  inline char letter_char(Letter x) {
    char const base = x.inverted() ? 'A' : 'a';
    return static_cast<char>(base + static_cast<char>(x.index()));
  }

  inline std::string to_string(std::span<Letter const> s) {
    if (s.empty()) {
      return "1";
    }
    std::string out;
    out.reserve(s.size());
    for (Letter x : s) {
      out.push_back(letter_char(x));
    }
    return out;
  }

  inline std::string to_string(Word const& w) { return to_string(w.letters()); }

  inline std::string to_string(CyclicWord const& w) {
    return to_string(w.canonical());
  }

  // Parses letters, ignoring whitespace; "1" alone denotes the empty word.
  // Letters beyond the rank are rejected with their position.
  inline Letters parse_letters(std::string_view text, std::size_t rank) {
    Letters out;
    std::size_t non_space = 0;
    for (char c : text) {
      if (c != ' ' && c != '\t') {
        ++non_space;
      }
    }
    for (std::size_t pos = 0; pos < text.size(); ++pos) {
      char const c = text[pos];
      if (c == ' ' || c == '\t') {
        continue;
      }
      if (c == '1' && non_space == 1) {
        return out;
      }
      std::uint32_t index;
      bool          inverted;
      if (c >= 'a' && c <= 'z') {
        index    = static_cast<std::uint32_t>(c - 'a');
        inverted = false;
      } else if (c >= 'A' && c <= 'Z') {
        index    = static_cast<std::uint32_t>(c - 'A');
        inverted = true;
      } else {
        throw InputError("invalid letter '" + std::string(1, c)
                         + "' at column " + std::to_string(pos + 1));
      }
      if (index >= rank) {
        throw InputError("letter '" + std::string(1, c) + "' at column "
                         + std::to_string(pos + 1) + " exceeds rank "
                         + std::to_string(rank));
      }
      out.push_back(Letter::generator(index, inverted));
    }
    return out;
  }

  inline Word parse_word(std::string_view text, std::size_t rank) {
    return Word(parse_letters(text, rank));
  }

}  // namespace traintrack

template <>
struct std::hash<traintrack::CyclicWord> {
  std::size_t operator()(traintrack::CyclicWord const& w) const noexcept {
    return w.hash();
  }
};
