#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tenfold {

enum class ErrorCode {
  UnknownLabel,
  MissingS,
  UnexpectedS,
  InvalidS,
  InvalidN,
  ParityMismatch,
  NonPositiveSigma,
  InvalidReps,
  WrongParamCount,
  StructureViolation,
  UnsupportedClass,
  NoConvergence,
  DegenerateSpectrum,
  EmptyInput,
  WrongLength,
  OutOfSupport,
  InvalidParams,
  UnsupportedTransform,
  OutOfRange,
  UnsupportedGamma,
  DivergentField,
  IoError,
  ParseError,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::MissingS: return "MissingS";
    case ErrorCode::UnexpectedS: return "UnexpectedS";
    case ErrorCode::InvalidS: return "InvalidS";
    case ErrorCode::InvalidN: return "InvalidN";
    case ErrorCode::ParityMismatch: return "ParityMismatch";
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::InvalidReps: return "InvalidReps";
    case ErrorCode::WrongParamCount: return "WrongParamCount";
    case ErrorCode::StructureViolation: return "StructureViolation";
    case ErrorCode::UnsupportedClass: return "UnsupportedClass";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::WrongLength: return "WrongLength";
    case ErrorCode::OutOfSupport: return "OutOfSupport";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::UnsupportedTransform: return "UnsupportedTransform";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::UnsupportedGamma: return "UnsupportedGamma";
    case ErrorCode::DivergentField: return "DivergentField";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library. The code identifies the condition;
/// the message is human-readable and is surfaced verbatim by the CLI.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when multiplicity collapse cannot produce the expected number of
/// reduced eigenvalues. Carries the gaps that broke the pairing.
class DegenerateSpectrumError : public Error {
 public:
  DegenerateSpectrumError(const std::string& message, std::vector<double> gaps)
      : Error(ErrorCode::DegenerateSpectrum, message), gaps_(std::move(gaps)) {}

  const std::vector<double>& gaps() const noexcept { return gaps_; }

 private:
  std::vector<double> gaps_;
};

}  // namespace tenfold
