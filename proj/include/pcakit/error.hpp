#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcakit {

enum class ErrorCode {
  InvalidDimension,
  SingularSystem,
  NotSymmetric,
  RankExceeded,
  DegenerateInput,
  WrongKernelKind,
  NotPositiveSemidefinite,
  ComplexEigenvalues,
  ReconstructionUnsupported,
  ParseError,
  EmptyInput,
  UsageError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying one of the toolkit error codes. The message is
/// prefixed with the code name, e.g. "RankExceeded: p=3 exceeds rank 2".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::RankExceeded: return "RankExceeded";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::WrongKernelKind: return "WrongKernelKind";
    case ErrorCode::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::ComplexEigenvalues: return "ComplexEigenvalues";
    case ErrorCode::ReconstructionUnsupported: return "ReconstructionUnsupported";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace pcakit
