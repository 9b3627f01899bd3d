#include "shiftgate/errors.hpp"

#include <sstream>

namespace shiftgate {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kCropExceedsHeight: return "CropExceedsHeight";
    case ErrorCode::kEmptyHistogram: return "EmptyHistogram";
    case ErrorCode::kMismatchedTotals: return "MismatchedTotals";
    case ErrorCode::kNonPositiveEpsilon: return "NonPositiveEpsilon";
    case ErrorCode::kInfiniteDistance: return "InfiniteDistance";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptySeries: return "EmptySeries";
    case ErrorCode::kZeroTarget: return "ZeroTarget";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kEmptyReferenceSet: return "EmptyReferenceSet";
    case ErrorCode::kMissingRecord: return "MissingRecord";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kDatasetTooSmall: return "DatasetTooSmall";
    case ErrorCode::kCoverageGap: return "CoverageGap";
    case ErrorCode::kEmptyResults: return "EmptyResults";
    case ErrorCode::kUnwritablePath: return "UnwritablePath";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kDecodeError: return "DecodeError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

namespace {

std::string describe_gap(const std::vector<std::int64_t>& missing) {
  std::ostringstream out;
  out << missing.size() << " frame(s) without a prediction:";
  constexpr std::size_t kShown = 20;
  for (std::size_t i = 0; i < missing.size() && i < kShown; ++i) out << ' ' << missing[i];
  if (missing.size() > kShown) out << " ...";
  return out.str();
}

}  // namespace

CoverageGapError::CoverageGapError(std::vector<std::int64_t> missing)
    : Error(ErrorCode::kCoverageGap, describe_gap(missing)), missing_(std::move(missing)) {}

}  // namespace shiftgate
