// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace occo {

enum class ErrorCode {
  InvalidArgument,
  IoError,
  MalformedHeader,
  IndexOutOfRange,
  NonTriangleFace,
  MissingCoordinateProperty,
  DegenerateMesh,
  NonPositiveDepth,
  SingularIntrinsics,
  AllOccluded,
  EmptyDataset,
  EmptyCloud,
  SizeMismatch,
  TooLarge,
  StaleCache,
  DimsMismatch,
  ShapeMismatch,
  ConfigMismatch,
  NonFiniteLoss,
  TooFewItems,
  LengthMismatch,
  SingleClass,
  MaskLengthMismatch,
};

std::string_view to_string(ErrorCode code) noexcept;

// Exception type for every failure the library reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace occo
