#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seqiso {

enum class ErrorCode {
  InvalidSpec,
  NotHermitian,
  NoConvergence,
  NotPSD,
  BadExponent,
  BadScalar,
  BadIndex,
  NotEffect,
  NotProjection,
  SpecMismatch,
  DescriptorInvalid,
  OracleRangeError,
  NotEIsomorphism,
  NotCommutativeSpec,
  RecoveryFailed,
  NotJordan,
  AmbiguousKind,
  CorrespondenceFailed,
  SchemaError,
  InvariantError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::BadScalar: return "BadScalar";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::NotEffect: return "NotEffect";
    case ErrorCode::NotProjection: return "NotProjection";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::DescriptorInvalid: return "DescriptorInvalid";
    case ErrorCode::OracleRangeError: return "OracleRangeError";
    case ErrorCode::NotEIsomorphism: return "NotEIsomorphism";
    case ErrorCode::NotCommutativeSpec: return "NotCommutativeSpec";
    case ErrorCode::RecoveryFailed: return "RecoveryFailed";
    case ErrorCode::NotJordan: return "NotJordan";
    case ErrorCode::AmbiguousKind: return "AmbiguousKind";
    case ErrorCode::CorrespondenceFailed: return "CorrespondenceFailed";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvariantError: return "InvariantError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code;
/// the message is prefixed with the code name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace seqiso
