// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef VOICESEP_ERROR_HPP_
#define VOICESEP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace voicesep {

// Broad failure classes. The CLI maps them onto exit codes
// (data -> 2, numerical/training -> 3).
enum class ErrorKind {
  kFormat,       // malformed file contents
  kUnsupported,  // valid container, encoding we do not handle
  kIo,
  kParameter,    // bad argument value
  kShape,        // dimension mismatch
  kInput,        // non-finite or otherwise invalid data
  kUsage,        // API misuse, e.g. a stale trace
  kTraining,     // divergence or non-finite gradients
  kNumerical,    // solver failure
  kIngest,
  kIntegrity,    // checksum mismatch
  kNotFound,
  kCheckpoint,   // model incompatible with the request
  kInternal,     // invariant violation
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void Fail(ErrorKind kind, const std::string& what);

}  // namespace voicesep

#endif  // VOICESEP_ERROR_HPP_
