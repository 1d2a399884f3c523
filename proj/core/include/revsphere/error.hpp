#pragma once

#include <stdexcept>
#include <string>

namespace revsphere {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter lies outside the domain of the requested construction or evaluation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A search over a bounded parameter range found nothing that qualifies.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

// A function evaluated to a non-finite value where a finite one is required.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// A monotonicity criterion cannot be applied to the given profile.
class CriterionInapplicable : public Error {
 public:
  using Error::Error;
};

}  // namespace revsphere
