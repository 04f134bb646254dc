#include "elearn/lms.hpp"

#include "elearn/casebase.hpp"
#include "elearn/json_fields.hpp"

namespace elearn {

std::optional<Track> track_for(Level level) {
  switch (level) {
    case Level::Beginner: return Track::BeginnerTrack;
    case Level::Intermediate: return Track::IntermediateTrack;
    case Level::Skilled: return Track::SkilledTrack;
    case Level::NotEligible: break;
  }
  return std::nullopt;
}

void to_json(Json& j, const EvaluationRecord& e) {
  j = Json{{"kind", enum_name(e.kind)},
           {"score_percentage", e.score_percentage},
           {"passed", e.passed}};
}

void from_json(const Json& j, EvaluationRecord& e) {
  e.kind = fields::enumeration<EvaluationKind>(j, "kind");
  e.score_percentage = fields::number(j, "score_percentage");
  e.passed = fields::boolean(j, "passed");
}

void to_json(Json& j, const Enrollment& e) {
  j = Json{{"student_id", e.student_id},
           {"track", enum_name(e.track)},
           {"status", enum_name(e.status)},
           {"attempt_number", e.attempt_number},
           {"evaluations", e.evaluations}};
}

void from_json(const Json& j, Enrollment& e) {
  e.student_id = j.at("student_id").get<std::string>();
  e.track = fields::enumeration<Track>(j, "track");
  e.status = fields::enumeration<EnrollmentStatus>(j, "status");
  e.attempt_number = j.at("attempt_number").get<int>();
  e.evaluations = j.at("evaluations").get<std::vector<EvaluationRecord>>();
}

LmsRouter::LmsRouter(RepositorySet& repos, const PlacementService& placements, CaseBase& cases,
                     double pass_threshold)
    : repos_(repos), placements_(placements), cases_(cases), pass_threshold_(pass_threshold) {
  if (!(pass_threshold >= 0.0 && pass_threshold <= 100.0)) {
    fail(ErrorCode::BadConfig, "pass_threshold");
  }
}

Enrollment LmsRouter::enroll(const std::string& student_id) {
  auto placement = placements_.placement(student_id);
  if (!placement) fail(ErrorCode::NotPlaced, student_id);
  auto track = track_for(placement->decision.level);
  if (!track) fail(ErrorCode::NotEligibleStudent, student_id);

  if (auto existing = enrollment(student_id)) {
    if (existing->status == EnrollmentStatus::PassedCourse) {
      fail(ErrorCode::CourseAlreadyConcluded, student_id);
    }
    fail(ErrorCode::AlreadyEnrolled, student_id);
  }

  Enrollment e;
  e.student_id = student_id;
  e.track = *track;
  e.status = EnrollmentStatus::Active;
  e.attempt_number = 1;
  repos_.enrollments().put(student_id, e);
  return e;
}

Enrollment LmsRouter::record_evaluation(const std::string& student_id, EvaluationKind kind,
                                        double score_percentage) {
  Enrollment e = require_enrollment(student_id);
  if (e.status != EnrollmentStatus::Active) fail(ErrorCode::CourseAlreadyConcluded, student_id);
  if (!is_declared(kind)) fail(ErrorCode::ValidationError, "kind");
  if (!(score_percentage >= 0.0 && score_percentage <= 100.0)) {
    fail(ErrorCode::ValidationError, "score_percentage");
  }

  EvaluationRecord record{kind, score_percentage, score_percentage >= pass_threshold_};
  e.evaluations.push_back(record);
  if (kind == EvaluationKind::Final) {
    e.status = record.passed ? EnrollmentStatus::PassedCourse : EnrollmentStatus::RetakeRequired;
  }
  repos_.enrollments().put(student_id, e);
  if (e.status == EnrollmentStatus::PassedCourse) cases_.store_case(student_id);
  return e;
}

Enrollment LmsRouter::retake(const std::string& student_id) {
  Enrollment e = require_enrollment(student_id);
  if (e.status != EnrollmentStatus::RetakeRequired) fail(ErrorCode::RetakeNotRequired, student_id);
  e.status = EnrollmentStatus::Active;
  e.attempt_number += 1;
  e.evaluations.clear();
  repos_.enrollments().put(student_id, e);
  return e;
}

std::optional<Enrollment> LmsRouter::enrollment(const std::string& student_id) const {
  auto found = repos_.enrollments().find(student_id);
  if (!found) return std::nullopt;
  return found->get<Enrollment>();
}

Enrollment LmsRouter::require_enrollment(const std::string& student_id) const {
  auto e = enrollment(student_id);
  if (!e) fail(ErrorCode::NotEnrolled, student_id);
  return std::move(*e);
}

}  // namespace elearn
