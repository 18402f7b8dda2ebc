// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace plantsam {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NotFound,
  StateConflict,
  Unsupported,
  Backend,
  Io,
};

const char* to_string(ErrorCode code);

/// Single exception type used across the toolkit; the code drives CLI exit
/// diagnostics and HTTP status mapping.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace plantsam
