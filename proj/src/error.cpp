// Copyright 2026 The occo Authors.
// SPDX-License-Identifier: Apache-2.0
#include "occo/error.hpp"

namespace occo {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonTriangleFace: return "NonTriangleFace";
    case ErrorCode::MissingCoordinateProperty: return "MissingCoordinateProperty";
    case ErrorCode::DegenerateMesh: return "DegenerateMesh";
    case ErrorCode::NonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::SingularIntrinsics: return "SingularIntrinsics";
    case ErrorCode::AllOccluded: return "AllOccluded";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::StaleCache: return "StaleCache";
    case ErrorCode::DimsMismatch: return "DimsMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::TooFewItems: return "TooFewItems";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::MaskLengthMismatch: return "MaskLengthMismatch";
  }
  return "Unknown";
}

}  // namespace occo
