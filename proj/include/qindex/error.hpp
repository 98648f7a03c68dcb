#pragma once

#include <stdexcept>
#include <string>

namespace qindex {

enum class ErrorKind {
  InvalidArgument,  // caller violated a precondition
  Parse,            // malformed input document
  Validation,       // input parsed but fails a structural axiom
  Infinite,         // index (or solution) does not exist as a finite value
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

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace qindex
