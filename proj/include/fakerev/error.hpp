#pragma once

#include <stdexcept>
#include <string>

namespace fakerev {

/// Malformed or invalid input data (bad file, violated record invariant,
/// missing upstream artifact). Maps to CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Failure talking to an external service. Maps to CLI exit code 3.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(const std::string& what, int status, bool retriable)
      : std::runtime_error(what), status_(status), retriable_(retriable) {}

  int status() const noexcept { return status_; }
  bool retriable() const noexcept { return retriable_; }

 private:
  int status_;
  bool retriable_;
};

class AuthError : public ServiceError {
 public:
  explicit AuthError(const std::string& what) : ServiceError(what, 401, false) {}
};

}  // namespace fakerev
