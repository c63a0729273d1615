#include "arena/error.hpp"

namespace arena {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kDuplicateId: return "duplicate_id";
    case ErrorCode::kEmptyField: return "empty_field";
    case ErrorCode::kUnknownId: return "unknown_id";
    case ErrorCode::kUnknownModel: return "unknown_model";
    case ErrorCode::kScorerFailure: return "scorer_failure";
    case ErrorCode::kProviderUnreachable: return "provider_unreachable";
    case ErrorCode::kMalformedResponse: return "malformed_response";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kZeroVector: return "zero_vector";
    case ErrorCode::kNoReferenceAnswers: return "no_reference_answers";
    case ErrorCode::kTooFewModels: return "too_few_models";
    case ErrorCode::kInsufficientModels: return "insufficient_models";
    case ErrorCode::kNoCommonRecord: return "no_common_record";
    case ErrorCode::kUnknownMatch: return "unknown_match";
    case ErrorCode::kAlreadyResolved: return "already_resolved";
    case ErrorCode::kJudgeMismatch: return "judge_mismatch";
    case ErrorCode::kIncompleteColumn: return "incomplete_column";
    case ErrorCode::kInternal: return "internal";
  }
  return "internal";
}

}  // namespace arena
