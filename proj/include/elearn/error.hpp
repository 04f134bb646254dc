#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace elearn {

enum class ErrorCode {
  ValidationError,
  BadRequest,
  NotFound,
  DuplicateStudent,
  AlreadyApproved,
  InUse,
  InsufficientQuestions,
  SessionAlreadyOpen,
  OutOfOrder,
  AlreadyAnswered,
  MalformedAnswers,
  NotSubmitted,
  DomainError,
  NoScoredTest,
  NotPlaced,
  NotEligibleStudent,
  AlreadyEnrolled,
  NotEnrolled,
  CourseAlreadyConcluded,
  RetakeNotRequired,
  NotPassed,
  DuplicateCase,
  DuplicateFeedback,
  CorruptRecord,
  NonEmptyTarget,
  CorruptSnapshot,
  UnknownDimension,
  BadDistribution,
  BadConfig,
  PortInUse,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;
std::optional<ErrorCode> parse_error_code(std::string_view name) noexcept;

// HTTP status used when the error escapes through the REST layer.
int http_status(ErrorCode code) noexcept;

/// Every failure raised by the service carries a machine-readable code and,
/// where meaningful, the name of the offending field, section or store.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail, std::string message = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorCode code, std::string detail,
                              std::string message = {}) {
  throw Error(code, std::move(detail), std::move(message));
}

}  // namespace elearn
