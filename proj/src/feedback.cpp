#include "elearn/feedback.hpp"

#include "elearn/lms.hpp"

namespace elearn {

void to_json(Json& j, const FeedbackRecord& f) {
  j = Json{{"student_id", f.student_id},
           {"attempt", f.attempt},
           {"rating", f.rating},
           {"comments", f.comments},
           {"submitted_at", f.submitted_at}};
}

void from_json(const Json& j, FeedbackRecord& f) {
  f.student_id = j.at("student_id").get<std::string>();
  f.attempt = j.at("attempt").get<int>();
  f.rating = j.at("rating").get<int>();
  f.comments = j.at("comments").get<std::string>();
  f.submitted_at = j.at("submitted_at").get<std::int64_t>();
}

std::size_t utf8_length(const std::string& text) {
  std::size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

FeedbackRecord FeedbackDesk::submit_feedback(const std::string& student_id, int rating,
                                             const std::string& comments) {
  auto found = repos_.enrollments().find(student_id);
  if (!found) fail(ErrorCode::NotPassed, student_id);
  auto enrollment = found->get<Enrollment>();
  if (enrollment.status != EnrollmentStatus::PassedCourse) fail(ErrorCode::NotPassed, student_id);

  if (rating < kMinRating || rating > kMaxRating) fail(ErrorCode::ValidationError, "rating");
  if (utf8_length(comments) > kMaxCommentChars) fail(ErrorCode::ValidationError, "comments");

  const std::string key = student_id + "#" + std::to_string(enrollment.attempt_number);
  if (repos_.feedback().contains(key)) fail(ErrorCode::DuplicateFeedback, key);

  FeedbackRecord record{student_id, enrollment.attempt_number, rating, comments, clock_()};
  repos_.feedback().put(key, record);
  return record;
}

std::vector<FeedbackRecord> FeedbackDesk::all() const {
  std::vector<FeedbackRecord> out;
  for (const auto& record : repos_.feedback().scan()) out.push_back(record.get<FeedbackRecord>());
  return out;
}

}  // namespace elearn
