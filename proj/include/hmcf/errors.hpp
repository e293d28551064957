#pragma once

#include <stdexcept>
#include <string>

namespace hmcf {

/// Input outside the domain of a geometric or analytic operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computation produced a non-finite or otherwise unusable value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hmcf
