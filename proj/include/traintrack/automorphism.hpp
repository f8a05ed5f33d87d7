#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "word.hpp"

namespace traintrack {

  // An endomorphism of the free group of the given rank, determined by the
  // images of the generators. Automorphism-ness is only certified when
  // inverse images are supplied (see validate()).
  class Automorphism {
   public:
    Automorphism(std::size_t                      rank,
                 std::vector<Word>                images,
                 std::optional<std::vector<Word>> inverse_images = {})
        : rank_(rank),
          images_(std::move(images)),
          inverse_images_(std::move(inverse_images)) {
      if (rank_ == 0) {
        throw InputError("automorphism rank must be positive");
      }
      check_images(images_, "image");
      if (inverse_images_) {
        check_images(*inverse_images_, "inverse image");
      }
    }

    static Automorphism identity(std::size_t rank) {
      std::vector<Word> images;
      for (std::uint32_t i = 0; i < rank; ++i) {
        images.push_back(Word{Letter::generator(i)});
      }
      return Automorphism(rank, images, images);
    }

    [[nodiscard]] std::size_t rank() const noexcept { return rank_; }

    [[nodiscard]] Word const& image(std::size_t generator) const {
      return images_.at(generator);
    }

    [[nodiscard]] std::vector<Word> const& images() const noexcept {
      return images_;
    }

    [[nodiscard]] std::optional<std::vector<Word>> const&
    inverse_images() const noexcept {
      return inverse_images_;
    }

    // The automorphism given by the inverse images, if supplied.
    [[nodiscard]] std::optional<Automorphism> inverse() const {
      if (!inverse_images_) {
        return std::nullopt;
      }
      return Automorphism(rank_, *inverse_images_, images_);
    }

    // Appends the image of x to a reduced buffer, reducing on the fly.
    void append_image(Letter x, Letters& out) const {
      if (x.index() >= rank_) {
        throw InputError("letter index " + std::to_string(x.index())
                         + " out of range for rank " + std::to_string(rank_));
      }
      auto const img = images_[x.index()].letters();
      if (!x.inverted()) {
        for (Letter y : img) {
          detail::push_reduced(out, y);
        }
      } else {
        for (auto it = img.rbegin(); it != img.rend(); ++it) {
          detail::push_reduced(out, it->inverse());
        }
      }
    }

   private:
    void check_images(std::vector<Word> const& images,
                      char const*              what) const {
      if (images.size() != rank_) {
        throw InputError(std::string("expected ") + std::to_string(rank_)
                         + " " + what + "s, got "
                         + std::to_string(images.size()));
      }
      for (auto const& w : images) {
        for (Letter x : w) {
          if (x.index() >= rank_) {
            throw InputError(std::string(what)
                             + " uses a letter beyond the rank");
          }
        }
      }
    }

    std::size_t                      rank_;
    std::vector<Word>                images_;
    std::optional<std::vector<Word>> inverse_images_;
  };

  inline Word apply(Automorphism const& psi, Word const& w) {
    Letters out;
    out.reserve(w.size() * 2);
    for (Letter x : w) {
      psi.append_image(x, out);
    }
    return Word::from_reduced(std::move(out));
  }

  // psi^m(x) by repeated substitution with reduction after every step.
  // Throws BudgetExceeded carrying the last m whose result fit.
  inline Word iterate(Automorphism const& psi,
                      Word                x,
                      std::size_t         m,
                      std::size_t         budget = kDefaultWordBudget) {
    for (std::size_t step = 0; step < m; ++step) {
      Letters out;
      out.reserve(std::min(budget, x.size() * 2));
      for (Letter y : x) {
        psi.append_image(y, out);
        if (out.size() > budget) {
          throw BudgetExceeded("iterate: word length exceeds budget of "
                                   + std::to_string(budget) + " letters",
                               step);
        }
      }
      x = Word::from_reduced(std::move(out));
    }
    return x;
  }

  namespace detail {
    // Exact determinant by fraction-free Gaussian elimination (Bareiss).
    inline long long determinant(std::vector<std::vector<long long>> a) {
      std::size_t const n = a.size();
      if (n == 0) {
        return 1;
      }
      __int128 prev = 1;
      int      sign = 1;
      std::vector<std::vector<__int128>> m(n, std::vector<__int128>(n));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          m[i][j] = a[i][j];
        }
      }
      for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
          std::size_t p = k + 1;
          while (p < n && m[p][k] == 0) {
            ++p;
          }
          if (p == n) {
            return 0;
          }
          std::swap(m[p], m[k]);
          sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
          for (std::size_t j = k + 1; j < n; ++j) {
            m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
          }
        }
        prev = m[k][k];
      }
      return static_cast<long long>(sign * m[n - 1][n - 1]);
    }
  }  // namespace detail

  // Column j is the exponent-sum vector of the image of generator j.
  inline std::vector<std::vector<long long>>
  abelianization(Automorphism const& psi) {
    std::size_t const n = psi.rank();
    std::vector<std::vector<long long>> a(n, std::vector<long long>(n, 0));
    for (std::size_t j = 0; j < n; ++j) {
      for (Letter x : psi.image(j)) {
        a[x.index()][j] += x.inverted() ? -1 : 1;
      }
    }
    return a;
  }

  struct ValidationReport {
    long long                determinant = 0;
    bool                     determinant_ok = false;
    bool                     inverse_supplied = false;
    bool                     inverse_ok = false;
    bool                     assumed_automorphism = false;
    bool                     valid = false;
    std::vector<std::string> notes;
  };

  inline ValidationReport validate(Automorphism const& psi) {
    ValidationReport r;
    r.determinant    = detail::determinant(abelianization(psi));
    r.determinant_ok = std::llabs(r.determinant) == 1;
    if (!r.determinant_ok) {
      r.notes.push_back("abelianization determinant is "
                        + std::to_string(r.determinant)
                        + "; not an automorphism");
      return r;
    }
    r.inverse_supplied = psi.inverse_images().has_value();
    if (r.inverse_supplied) {
      auto const inv = *psi.inverse();
      r.inverse_ok   = true;
      for (std::uint32_t i = 0; i < psi.rank(); ++i) {
        Word const g{Letter::generator(i)};
        if (apply(inv, apply(psi, g)) != g || apply(psi, apply(inv, g)) != g) {
          r.inverse_ok = false;
          r.notes.push_back("inverse check fails on generator "
                            + to_string(g));
        }
      }
      r.valid = r.inverse_ok;
    } else {
      r.assumed_automorphism = true;
      r.valid                = true;
      r.notes.push_back(
          "no inverse supplied; proceeding on an assumed automorphism");
    }
    return r;
  }

}  // namespace traintrack
