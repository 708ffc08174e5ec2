#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace locwb {

  // Raised when a construction would exceed its configured size cap.
  class BudgetExceeded : public std::runtime_error {
   public:
    explicit BudgetExceeded(std::string const& what)
        : std::runtime_error(what) {}
  };

  class PreconditionViolation : public std::runtime_error {
   public:
    explicit PreconditionViolation(std::string const& what)
        : std::runtime_error(what) {}
  };

  // Malformed user input. Line and column are 1-based; 0 means unknown.
  class InvalidInput : public std::runtime_error {
   public:
    explicit InvalidInput(std::string const& what, int line = 0, int column = 0)
        : std::runtime_error(format(what, line, column)),
          _line(line),
          _column(column) {}

    int line() const noexcept {
      return _line;
    }
    int column() const noexcept {
      return _column;
    }

   private:
    static std::string format(std::string const& what, int line, int column) {
      if (line == 0) {
        return what;
      }
      return "line " + std::to_string(line) + ", column "
             + std::to_string(column) + ": " + what;
    }

    int _line;
    int _column;
  };

  // Every size limit used anywhere in the library. Passed explicitly.
  struct Budget {
    // Morphism cap for any constructed category (slices, functor
    // categories, envelopes, saturated presentations).
    std::size_t max_morphisms = 10'000;
    // Coset cap for the coset enumeration stage of the pi_1 engine.
    std::size_t pi1_cosets = 100'000;
    // Largest image order accepted by the finite quotient search.
    std::size_t quotient_order = 24;
    // Node cap for the finite quotient search.
    std::size_t quotient_nodes = 200'000;
    // Rule cap for Knuth-Bendix completion.
    std::size_t kb_rules = 4'000;
    // Longest rule side Knuth-Bendix may create.
    std::size_t kb_word_length = 32;
    // Largest finite hom-set a rewriting model will enumerate.
    std::size_t model_elements = 20'000;
    // Largest poset used by lifted checks.
    std::size_t poset_bound = 3;
    // Family-size truncation of the coproduct envelope.
    std::size_t envelope_k = 3;
  };

}  // namespace locwb
