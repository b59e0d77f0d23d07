#pragma once

#include <stdexcept>
#include <string>

namespace rkm {

/// Failure categories. The CLI maps these onto exit codes.
enum class ErrorKind {
  Parameter,   // bad argument to an operation
  Data,        // malformed or inconsistent input data
  Size,        // an enumeration or construction cap was exceeded
  Numerical,   // LP iteration cap or breakdown
  Construction // randomized construction failed its verification
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

} // namespace rkm
