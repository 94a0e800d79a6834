#pragma once

#include <stdexcept>
#include <string>

namespace sqgame {

// Base for every error raised by the toolkit. The CLI maps these onto exit
// codes, so each subclass corresponds to one failure category.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad labels, wrong dimensions, inconsistent subsystem layouts.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Operator or vector violates a structural constraint (Hermiticity, PSD,
// normalisation, POVM completeness).
class ConstraintError : public Error {
 public:
  using Error::Error;
};

class NotEntangledError : public Error {
 public:
  using Error::Error;
};

class CompletenessError : public Error {
 public:
  CompletenessError(const std::string& what, int gram_rank)
      : Error(what), gram_rank_(gram_rank) {}
  int gram_rank() const { return gram_rank_; }

 private:
  int gram_rank_;
};

// Non-finite values or broken internal identities during an optimisation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sqgame
