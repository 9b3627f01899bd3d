#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shiftgate {

enum class ErrorCode {
  kInvalidArgument,
  kCropExceedsHeight,
  kEmptyHistogram,
  kMismatchedTotals,
  kNonPositiveEpsilon,
  kInfiniteDistance,
  kLengthMismatch,
  kEmptySeries,
  kZeroTarget,
  kNonFiniteValue,
  kEmptyReferenceSet,
  kMissingRecord,
  kMalformedRecord,
  kDatasetTooSmall,
  kCoverageGap,
  kEmptyResults,
  kUnwritablePath,
  kIoError,
  kDecodeError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code is stable
/// and intended for programmatic dispatch; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Image without a record (or the reverse) in a dataset directory.
class MissingRecordError : public Error {
 public:
  MissingRecordError(std::int64_t frame_index, const std::string& message)
      : Error(ErrorCode::kMissingRecord, message), frame_index_(frame_index) {}

  std::int64_t frame_index() const noexcept { return frame_index_; }

 private:
  std::int64_t frame_index_;
};

/// Prediction file does not cover every dataset frame.
class CoverageGapError : public Error {
 public:
  explicit CoverageGapError(std::vector<std::int64_t> missing);

  const std::vector<std::int64_t>& missing() const noexcept { return missing_; }

 private:
  std::vector<std::int64_t> missing_;
};

}  // namespace shiftgate
