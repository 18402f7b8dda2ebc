// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/error.hpp"

namespace plantsam {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::StateConflict: return "state_conflict";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::Backend: return "backend_error";
    case ErrorCode::Io: return "io_error";
  }
  return "unknown";
}

}  // namespace plantsam
