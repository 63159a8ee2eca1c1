#pragma once

#include <stdexcept>
#include <string>

namespace fspec {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  Precondition,
  CapExceeded,
  ToleranceUnreachable,
  ConstructionFailed,
  Overflow,
};

const char* to_string(ErrorKind kind) noexcept;

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

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace fspec
