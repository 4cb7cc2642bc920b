#pragma once

#include <stdexcept>
#include <string>

namespace epsnum {

// Error categories; the C API and the CLI exit codes are derived from these.
enum class ErrorCode {
  InvalidArgument = 1,  // bad parameter (p < 1, dimension mismatch, ...)
  Config = 2,           // malformed or unsupported run configuration
  Capability = 3,       // outside the supported envelope (dimension, effort)
  Numerical = 4,        // iteration failed to converge
  Budget = 5,           // internal budget exhausted in strict mode
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace epsnum
