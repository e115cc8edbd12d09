#pragma once

#include <stdexcept>
#include <string>

namespace osteomorph {

enum class ErrorCode {
  kFileNotFound,
  kUnreadableImage,
  kInvalidLabel,
  kInvalidArgument,
  kDimensionMismatch,
  kInvalidProbabilities,
  kDuplicateId,
  kUnknownSplit,
  kMalformedRow,
  kClassAbsent,
  kDegenerateShape,
  kEmptyInput,
  kDegenerateLabels,
  kIo,
};

const char* to_string(ErrorCode code);

// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace osteomorph
