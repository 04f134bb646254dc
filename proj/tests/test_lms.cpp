#include <doctest.h>

#include "elearn/lms.hpp"
#include "support/flow.hpp"

using namespace elearn;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("track follows level") {
  CHECK(track_for(Level::Skilled) == Track::SkilledTrack);
  CHECK(track_for(Level::Intermediate) == Track::IntermediateTrack);
  CHECK(track_for(Level::Beginner) == Track::BeginnerTrack);
  CHECK_FALSE(track_for(Level::NotEligible).has_value());
}

TEST_CASE("enroll") {
  fixtures::Campus campus;
  auto& p = campus.platform;

  SUBCASE("Skilled student gets the Skilled track") {
    campus.place("s1", fixtures::ra5(), {8, 8, 8, 8});
    auto e = p.enroll("s1");
    CHECK(e.track == Track::SkilledTrack);
    CHECK(e.status == EnrollmentStatus::Active);
    CHECK(e.attempt_number == 1);
    CHECK(e.evaluations.empty());
    CHECK(code_of([&] { p.enroll("s1"); }) == ErrorCode::AlreadyEnrolled);
  }
  SUBCASE("Intermediate and Beginner") {
    campus.place("i", fixtures::ra5(), {7, 7, 7, 4});  // 62.5
    campus.place("b", fixtures::ra5(), {5, 5, 5, 5});  // 50
    CHECK(p.enroll("i").track == Track::IntermediateTrack);
    CHECK(p.enroll("b").track == Track::BeginnerTrack);
  }
  SUBCASE("NotEligible student is refused") {
    campus.place("s1", fixtures::ra5(), {3, 3, 3, 3});
    CHECK(code_of([&] { p.enroll("s1"); }) == ErrorCode::NotEligibleStudent);
    CHECK_FALSE(p.enrollment("s1").has_value());
  }
  SUBCASE("unplaced student is NotPlaced") {
    p.register_student(fixtures::personal("s1"), fixtures::cultural("s1"));
    CHECK(code_of([&] { p.enroll("s1"); }) == ErrorCode::NotPlaced);
  }
}

TEST_CASE("evaluations") {
  fixtures::Campus campus;
  auto& p = campus.platform;
  campus.place("s1", fixtures::ra5(), {8, 8, 8, 8});
  CHECK(code_of([&] { p.record_evaluation("s1", EvaluationKind::Quiz, 60); }) ==
        ErrorCode::NotEnrolled);
  p.enroll("s1");

  SUBCASE("Quiz at 60 stays Active") {
    auto e = p.record_evaluation("s1", EvaluationKind::Quiz, 60);
    CHECK(e.status == EnrollmentStatus::Active);
    REQUIRE(e.evaluations.size() == 1);
    CHECK(e.evaluations[0].passed);
    auto a = p.record_evaluation("s1", EvaluationKind::Assignment, 49.99);
    CHECK_FALSE(a.evaluations[1].passed);
    CHECK(a.status == EnrollmentStatus::Active);
  }
  SUBCASE("Final at 80 passes and stores a case") {
    auto e = p.record_evaluation("s1", EvaluationKind::Final, 80);
    CHECK(e.status == EnrollmentStatus::PassedCourse);
    auto cases = p.similar_cases("s1", 5);
    REQUIRE(cases.size() == 1);
    CHECK(cases[0].match.assigned_level == Level::Skilled);
    CHECK(cases[0].match.attempts_to_pass == 1);
    CHECK(code_of([&] { p.record_evaluation("s1", EvaluationKind::Quiz, 90); }) ==
          ErrorCode::CourseAlreadyConcluded);
    CHECK(code_of([&] { p.enroll("s1"); }) == ErrorCode::CourseAlreadyConcluded);
  }
  SUBCASE("Final exactly at the threshold passes") {
    CHECK(p.record_evaluation("s1", EvaluationKind::Final, 50).status ==
          EnrollmentStatus::PassedCourse);
  }
  SUBCASE("Final at 30 requires a retake") {
    auto e = p.record_evaluation("s1", EvaluationKind::Final, 30);
    CHECK(e.status == EnrollmentStatus::RetakeRequired);
    CHECK(p.similar_cases("s1", 5).empty());
    CHECK(code_of([&] { p.record_evaluation("s1", EvaluationKind::Quiz, 70); }) ==
          ErrorCode::CourseAlreadyConcluded);
  }
  SUBCASE("score outside 0..100 is ValidationError") {
    CHECK(code_of([&] { p.record_evaluation("s1", EvaluationKind::Quiz, 100.5); }) ==
          ErrorCode::ValidationError);
    CHECK(code_of([&] { p.record_evaluation("s1", EvaluationKind::Quiz, -1); }) ==
          ErrorCode::ValidationError);
  }
}

TEST_CASE("retake loop") {
  fixtures::Campus campus;
  auto& p = campus.platform;
  campus.place("s1", fixtures::ra5(), {6, 6, 6, 6});
  p.enroll("s1");
  CHECK(code_of([&] { p.retake("s1"); }) == ErrorCode::RetakeNotRequired);

  p.record_evaluation("s1", EvaluationKind::Quiz, 20);
  p.record_evaluation("s1", EvaluationKind::Final, 20);
  auto second = p.retake("s1");
  CHECK(second.status == EnrollmentStatus::Active);
  CHECK(second.attempt_number == 2);
  CHECK(second.evaluations.empty());
  CHECK(second.track == Track::IntermediateTrack);

  p.record_evaluation("s1", EvaluationKind::Final, 10);
  CHECK(p.retake("s1").attempt_number == 3);

  auto passed = p.record_evaluation("s1", EvaluationKind::Final, 75);
  CHECK(passed.status == EnrollmentStatus::PassedCourse);
  CHECK(code_of([&] { p.retake("s1"); }) == ErrorCode::RetakeNotRequired);
  auto cases = p.similar_cases("s1", 1);
  REQUIRE(cases.size() == 1);
  CHECK(cases[0].match.attempt == 3);
  CHECK(cases[0].match.attempts_to_pass == 3);
}

TEST_CASE("attempt number equals one plus failed finals") {
  fixtures::Campus campus;
  auto& p = campus.platform;
  campus.place("s1", fixtures::ra5(), {10, 10, 10, 10});
  p.enroll("s1");
  int failed = 0;
  for (int round = 0; round < 6; ++round) {
    p.record_evaluation("s1", EvaluationKind::Final, 5.0 + 8.0 * round);
    ++failed;
    auto e = p.retake("s1");
    CHECK(e.attempt_number == 1 + failed);
  }
}

TEST_CASE("configured pass threshold") {
  ServiceConfig config;
  config.pass_threshold = 70;
  fixtures::Campus campus(config);
  auto& p = campus.platform;
  campus.place("s1", fixtures::ra5(), {8, 8, 8, 8});
  p.enroll("s1");
  auto e = p.record_evaluation("s1", EvaluationKind::Quiz, 65);
  CHECK_FALSE(e.evaluations.back().passed);
  CHECK(p.record_evaluation("s1", EvaluationKind::Final, 65).status ==
        EnrollmentStatus::RetakeRequired);
}

TEST_CASE("enrollment json round-trip") {
  Enrollment e{"s1", Track::IntermediateTrack, EnrollmentStatus::RetakeRequired, 2,
               {{EvaluationKind::Final, 42.5, false}}};
  CHECK(Json(e).get<Enrollment>() == e);
}
