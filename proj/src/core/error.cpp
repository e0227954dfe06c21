// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/error.hpp"

namespace cavitas {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::Range: return "range";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace cavitas
