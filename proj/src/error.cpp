// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "voicesep/error.hpp"

namespace voicesep {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kUnsupported: return "unsupported";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kParameter: return "parameter error";
    case ErrorKind::kShape: return "shape error";
    case ErrorKind::kInput: return "input error";
    case ErrorKind::kUsage: return "usage error";
    case ErrorKind::kTraining: return "training error";
    case ErrorKind::kNumerical: return "numerical error";
    case ErrorKind::kIngest: return "ingest error";
    case ErrorKind::kIntegrity: return "integrity error";
    case ErrorKind::kNotFound: return "not found";
    case ErrorKind::kCheckpoint: return "checkpoint error";
    case ErrorKind::kInternal: return "internal error";
  }
  return "error";
}

void Fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(ErrorKindName(kind)) + ": " + what);
}

}  // namespace voicesep
