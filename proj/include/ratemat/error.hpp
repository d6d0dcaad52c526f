#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace ratemat {

enum class ErrorKind {
  NotSquare,
  TooSmall,
  NonFinite,
  NegativeOffDiagonal,
  RowSumNonZero,
  NegativeEntry,
  RowSumNotOne,
  DimensionMismatch,
  DuplicateLabel,
  UnknownState,
  EmptyPath,
  NonPositiveHorizon,
  FirstSegmentNotZero,
  NonIncreasingTimes,
  SegmentBeyondHorizon,
  SelfTransition,
  ZeroDurationState,
  InvalidInitial,
  NegativeS,
  ZeroS,
  DegenerateRow,
  TooManyVertices,
  InvalidArgument,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NegativeOffDiagonal: return "NegativeOffDiagonal";
    case ErrorKind::RowSumNonZero: return "RowSumNonZero";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::RowSumNotOne: return "RowSumNotOne";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::UnknownState: return "UnknownState";
    case ErrorKind::EmptyPath: return "EmptyPath";
    case ErrorKind::NonPositiveHorizon: return "NonPositiveHorizon";
    case ErrorKind::FirstSegmentNotZero: return "FirstSegmentNotZero";
    case ErrorKind::NonIncreasingTimes: return "NonIncreasingTimes";
    case ErrorKind::SegmentBeyondHorizon: return "SegmentBeyondHorizon";
    case ErrorKind::SelfTransition: return "SelfTransition";
    case ErrorKind::ZeroDurationState: return "ZeroDurationState";
    case ErrorKind::InvalidInitial: return "InvalidInitial";
    case ErrorKind::NegativeS: return "NegativeS";
    case ErrorKind::ZeroS: return "ZeroS";
    case ErrorKind::DegenerateRow: return "DegenerateRow";
    case ErrorKind::TooManyVertices: return "TooManyVertices";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Location details attached to a validation failure. Unused fields stay empty.
struct ErrorSite {
  std::optional<std::size_t> row = std::nullopt;
  std::optional<std::size_t> col = std::nullopt;
  std::optional<double> residual = std::nullopt;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, ErrorSite site = {})
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        site_(std::move(site)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const ErrorSite& site() const noexcept { return site_; }

 private:
  ErrorKind kind_;
  ErrorSite site_;
};

}  // namespace ratemat
