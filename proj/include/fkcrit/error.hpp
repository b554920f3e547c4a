// Copyright 2026 The fkcrit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace fkcrit {

/// Failure categories raised by the library. Values are stable: the C API
/// forwards them as status codes.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kNonSymmetricInput = 2,
  kNonPositiveMass = 3,
  kMarkedPointOffGrid = 4,
  kUnsupportedDimension = 5,
  kNegativeDensity = 6,
  kSingularResolvent = 7,
  kRecurrentForm = 8,
  kEmptyNegativePart = 9,
  kSingularReduction = 10,
  kRecurrentPositivePart = 11,
  kConservativeChain = 12,
  kBandwidthTooSmall = 13,
  kLpSolverFailure = 14,
  kParseError = 15,
  kNumericalError = 16,
  kIoError = 17,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonSymmetricInput: return "NonSymmetricInput";
    case ErrorCode::kNonPositiveMass: return "NonPositiveMass";
    case ErrorCode::kMarkedPointOffGrid: return "MarkedPointOffGrid";
    case ErrorCode::kUnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::kNegativeDensity: return "NegativeDensity";
    case ErrorCode::kSingularResolvent: return "SingularResolvent";
    case ErrorCode::kRecurrentForm: return "RecurrentForm";
    case ErrorCode::kEmptyNegativePart: return "EmptyNegativePart";
    case ErrorCode::kSingularReduction: return "SingularReduction";
    case ErrorCode::kRecurrentPositivePart: return "RecurrentPositivePart";
    case ErrorCode::kConservativeChain: return "ConservativeChain";
    case ErrorCode::kBandwidthTooSmall: return "BandwidthTooSmall";
    case ErrorCode::kLpSolverFailure: return "LPSolverFailure";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kNumericalError: return "NumericalError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace fkcrit
