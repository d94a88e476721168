#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace maizx {

enum class ErrorKind {
  InvalidArgument,
  MissingZoneSeries,
  DuplicateZoneSeries,
  DuplicateNodeId,
  HorizonMismatch,
  ParseError,
  GapError,
  DuplicateTimestamp,
  CadenceError,
  NegativePower,
  PartialHour,
  DomainError,
  LengthMismatch,
  ZoneMismatch,
  InsufficientHistory,
  EmptyCluster,
  DemandOverflow,
  ZeroBaseline,
  MissingBaseline,
  IoError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::MissingZoneSeries: return "MissingZoneSeries";
    case ErrorKind::DuplicateZoneSeries: return "DuplicateZoneSeries";
    case ErrorKind::DuplicateNodeId: return "DuplicateNodeId";
    case ErrorKind::HorizonMismatch: return "HorizonMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::GapError: return "GapError";
    case ErrorKind::DuplicateTimestamp: return "DuplicateTimestamp";
    case ErrorKind::CadenceError: return "CadenceError";
    case ErrorKind::NegativePower: return "NegativePower";
    case ErrorKind::PartialHour: return "PartialHour";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ZoneMismatch: return "ZoneMismatch";
    case ErrorKind::InsufficientHistory: return "InsufficientHistory";
    case ErrorKind::EmptyCluster: return "EmptyCluster";
    case ErrorKind::DemandOverflow: return "DemandOverflow";
    case ErrorKind::ZeroBaseline: return "ZeroBaseline";
    case ErrorKind::MissingBaseline: return "MissingBaseline";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a kind so callers (and the
/// CLI) can branch on it without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace maizx
