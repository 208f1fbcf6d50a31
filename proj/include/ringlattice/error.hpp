#pragma once

#include <stdexcept>
#include <string>

namespace ringlattice {

enum class ErrorKind {
  config,      // bad or unknown configuration
  domain,      // argument outside the operation's domain
  truncation,  // basis or grid too small to hold the state
  accuracy,    // quadrature or iteration failed to converge
  schema,      // chained file does not match the expected schema
  io,
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

}  // namespace ringlattice
