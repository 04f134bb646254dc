#pragma once

#include <optional>
#include <string>
#include <vector>

#include "elearn/enum_names.hpp"
#include "elearn/persistence.hpp"
#include "elearn/placement.hpp"

namespace elearn {

class CaseBase;

enum class Track { BeginnerTrack, IntermediateTrack, SkilledTrack };
enum class EnrollmentStatus { Active, PassedCourse, RetakeRequired };
enum class EvaluationKind { Assignment, Quiz, Final };

template <> struct EnumNames<Track> {
  static constexpr std::array<std::string_view, 3> names{"BeginnerTrack", "IntermediateTrack",
                                                         "SkilledTrack"};
};
template <> struct EnumNames<EnrollmentStatus> {
  static constexpr std::array<std::string_view, 3> names{"Active", "PassedCourse",
                                                         "RetakeRequired"};
};
template <> struct EnumNames<EvaluationKind> {
  static constexpr std::array<std::string_view, 3> names{"Assignment", "Quiz", "Final"};
};

inline constexpr double kDefaultPassThreshold = 50.0;

// NotEligible has no track.
std::optional<Track> track_for(Level level);

struct EvaluationRecord {
  EvaluationKind kind = EvaluationKind::Quiz;
  double score_percentage = 0.0;
  bool passed = false;

  bool operator==(const EvaluationRecord&) const = default;
};

struct Enrollment {
  std::string student_id;
  Track track = Track::BeginnerTrack;
  EnrollmentStatus status = EnrollmentStatus::Active;
  int attempt_number = 1;
  std::vector<EvaluationRecord> evaluations;

  bool operator==(const Enrollment&) const = default;
};

void to_json(Json& j, const EvaluationRecord& e);
void from_json(const Json& j, EvaluationRecord& e);
void to_json(Json& j, const Enrollment& e);
void from_json(const Json& j, Enrollment& e);

/// Level-matched track allocation and the evaluate / retake loop.
/// A passed Final concludes the course and stores a case.
class LmsRouter {
 public:
  LmsRouter(RepositorySet& repos, const PlacementService& placements, CaseBase& cases,
            double pass_threshold = kDefaultPassThreshold);

  double pass_threshold() const noexcept { return pass_threshold_; }

  Enrollment enroll(const std::string& student_id);
  Enrollment record_evaluation(const std::string& student_id, EvaluationKind kind,
                               double score_percentage);
  Enrollment retake(const std::string& student_id);

  std::optional<Enrollment> enrollment(const std::string& student_id) const;

 private:
  Enrollment require_enrollment(const std::string& student_id) const;

  RepositorySet& repos_;
  const PlacementService& placements_;
  CaseBase& cases_;
  double pass_threshold_;
};

}  // namespace elearn
