#pragma once

#include <stdexcept>
#include <string>

namespace rpnm {

// One exception type per failure class named in the module contracts.
// All derive from Error so callers can catch the family at once.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error { using Error::Error; };
class IndexError : public Error { using Error::Error; };
class ParameterError : public Error { using Error::Error; };
class InversionError : public Error { using Error::Error; };
class CapacityError : public Error { using Error::Error; };
class UnsupportedError : public Error { using Error::Error; };
class RangeError : public Error { using Error::Error; };
class DataError : public Error { using Error::Error; };
class UnspecifiedBranch : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };

// Raised when an internal numerical consistency check fails.
class ConsistencyError : public Error { using Error::Error; };

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double last_re, double last_im,
                  double previous_re, double previous_im)
      : Error(what),
        last_re(last_re), last_im(last_im),
        previous_re(previous_re), previous_im(previous_im) {}

  double last_re, last_im;
  double previous_re, previous_im;
};

}  // namespace rpnm
