#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arena {

// Every failure the library reports carries one of these codes. The C API
// maps them one-to-one onto arena_status.
enum class ErrorCode {
  kInvalidArgument = 1,
  kIo,
  kParse,
  kDuplicateId,
  kEmptyField,
  kUnknownId,
  kUnknownModel,
  kScorerFailure,
  kProviderUnreachable,
  kMalformedResponse,
  kDimensionMismatch,
  kZeroVector,
  kNoReferenceAnswers,
  kTooFewModels,
  kInsufficientModels,
  kNoCommonRecord,
  kUnknownMatch,
  kAlreadyResolved,
  kJudgeMismatch,
  kIncompleteColumn,
  kInternal,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace arena
