#include "elearn/error.hpp"

namespace elearn {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::BadRequest: return "BadRequest";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::DuplicateStudent: return "DuplicateStudent";
    case ErrorCode::AlreadyApproved: return "AlreadyApproved";
    case ErrorCode::InUse: return "InUse";
    case ErrorCode::InsufficientQuestions: return "InsufficientQuestions";
    case ErrorCode::SessionAlreadyOpen: return "SessionAlreadyOpen";
    case ErrorCode::OutOfOrder: return "OutOfOrder";
    case ErrorCode::AlreadyAnswered: return "AlreadyAnswered";
    case ErrorCode::MalformedAnswers: return "MalformedAnswers";
    case ErrorCode::NotSubmitted: return "NotSubmitted";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NoScoredTest: return "NoScoredTest";
    case ErrorCode::NotPlaced: return "NotPlaced";
    case ErrorCode::NotEligibleStudent: return "NotEligibleStudent";
    case ErrorCode::AlreadyEnrolled: return "AlreadyEnrolled";
    case ErrorCode::NotEnrolled: return "NotEnrolled";
    case ErrorCode::CourseAlreadyConcluded: return "CourseAlreadyConcluded";
    case ErrorCode::RetakeNotRequired: return "RetakeNotRequired";
    case ErrorCode::NotPassed: return "NotPassed";
    case ErrorCode::DuplicateCase: return "DuplicateCase";
    case ErrorCode::DuplicateFeedback: return "DuplicateFeedback";
    case ErrorCode::CorruptRecord: return "CorruptRecord";
    case ErrorCode::NonEmptyTarget: return "NonEmptyTarget";
    case ErrorCode::CorruptSnapshot: return "CorruptSnapshot";
    case ErrorCode::UnknownDimension: return "UnknownDimension";
    case ErrorCode::BadDistribution: return "BadDistribution";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::PortInUse: return "PortInUse";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

std::optional<ErrorCode> parse_error_code(std::string_view name) noexcept {
  for (int i = 0; i <= static_cast<int>(ErrorCode::IoError); ++i) {
    auto code = static_cast<ErrorCode>(i);
    if (to_string(code) == name) return code;
  }
  return std::nullopt;
}

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotFound:
      return 404;
    case ErrorCode::ValidationError:
    case ErrorCode::MalformedAnswers:
    case ErrorCode::DomainError:
    case ErrorCode::UnknownDimension:
    case ErrorCode::BadDistribution:
    case ErrorCode::BadConfig:
      return 422;
    case ErrorCode::BadRequest:
      return 400;
    case ErrorCode::CorruptRecord:
    case ErrorCode::CorruptSnapshot:
    case ErrorCode::PortInUse:
    case ErrorCode::IoError:
      return 500;
    default:
      // Everything else is a precondition on current state.
      return 409;
  }
}

Error::Error(ErrorCode code, std::string detail, std::string message)
    : std::runtime_error(message.empty()
                             ? std::string(to_string(code)) +
                                   (detail.empty() ? "" : ": " + detail)
                             : std::move(message)),
      code_(code),
      detail_(std::move(detail)) {}

}  // namespace elearn
