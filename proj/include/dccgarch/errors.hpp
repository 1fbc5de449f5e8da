#pragma once

#include <stdexcept>
#include <string>

namespace dccgarch {

/// Bad arguments: wrong dimensions, out-of-support parameters, malformed files.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation left its numerical domain (non-positive variance, failed factorization, ...).
class NumericalDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace dccgarch
