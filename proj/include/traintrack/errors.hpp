#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace traintrack {

  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // Malformed user input: letters out of range, non-composable paths, bad
  // edge images.
  class InputError : public Error {
   public:
    using Error::Error;
  };

  // An operation was called outside its domain (e.g. spectral data of a
  // reducible matrix, leaf seeds for a non-expanding map).
  class PreconditionError : public Error {
   public:
    using Error::Error;
  };

  // Computed data contradicts a guaranteed property. Signals a bug or data
  // that was wrongly certified upstream.
  class ConsistencyError : public Error {
   public:
    using Error::Error;
  };

  class BudgetExceeded : public Error {
   public:
    BudgetExceeded(std::string const& what, std::size_t reached)
        : Error(what), reached_(reached) {}

    // Number of completed steps (iterates, depth levels) that fit.
    [[nodiscard]] std::size_t reached() const noexcept { return reached_; }

   private:
    std::size_t reached_;
  };

  class ConvergenceError : public Error {
   public:
    ConvergenceError(std::string const& what, double last_estimate)
        : Error(what), last_estimate_(last_estimate) {}

    [[nodiscard]] double last_estimate() const noexcept {
      return last_estimate_;
    }

   private:
    double last_estimate_;
  };

  inline constexpr std::size_t kDefaultWordBudget = 10'000'000;

}  // namespace traintrack
