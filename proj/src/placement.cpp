#include "elearn/placement.hpp"

#include <cmath>
#include <limits>

#include "elearn/json_fields.hpp"

namespace elearn {

namespace {

constexpr double kOpen = std::numeric_limits<double>::infinity();

}  // namespace

int factor_score(Medium m) { return m == Medium::English ? 2 : 1; }

int factor_score(ComputerKnowledge k) {
  switch (k) {
    case ComputerKnowledge::None: return 1;
    case ComputerKnowledge::Basic: return 2;
    case ComputerKnowledge::Proficient: return 3;
  }
  fail(ErrorCode::ValidationError, "computer_knowledge");
}

int factor_score(CourseContents c) { return c == CourseContents::International ? 2 : 1; }

ReferenceValue compute_reference_value(const CulturalProfile& cultural) {
  if (!cultural.medium_of_instruction || !is_declared(*cultural.medium_of_instruction)) {
    fail(ErrorCode::ValidationError, "medium_of_instruction");
  }
  if (!cultural.computer_knowledge || !is_declared(*cultural.computer_knowledge)) {
    fail(ErrorCode::ValidationError, "computer_knowledge");
  }
  if (!cultural.course_contents || !is_declared(*cultural.course_contents)) {
    fail(ErrorCode::ValidationError, "course_contents");
  }
  ReferenceValue rv;
  rv.factor_scores.medium_of_instruction = factor_score(*cultural.medium_of_instruction);
  rv.factor_scores.computer_knowledge = factor_score(*cultural.computer_knowledge);
  rv.factor_scores.course_contents = factor_score(*cultural.course_contents);
  rv.ra = rv.factor_scores.medium_of_instruction + rv.factor_scores.computer_knowledge +
          rv.factor_scores.course_contents;
  return rv;
}

const std::array<LevelBand, 15>& level_bands() {
  using L = Level;
  using R = RuleFired;
  static const std::array<LevelBand, 15> bands{{
      {L::Skilled, R::PaperSkilled, 7, 60, kOpen},
      {L::Skilled, R::PaperSkilled, 6, 70, kOpen},
      {L::Skilled, R::PaperSkilled, 5, 80, kOpen},
      {L::Skilled, R::PaperSkilled, 4, 85, kOpen},
      {L::Skilled, R::PaperSkilled, 3, 90, kOpen},
      {L::Intermediate, R::PaperIntermediate, 7, 50, 60},
      {L::Intermediate, R::PaperIntermediate, 6, 60, 70},
      {L::Intermediate, R::PaperIntermediate, 5, 60, 75},
      {L::Intermediate, R::PaperIntermediate, 4, 70, 85},
      {L::Intermediate, R::PaperIntermediate, 3, 80, 95},
      {L::Beginner, R::PaperBeginner, 7, 40, 50},
      {L::Beginner, R::PaperBeginner, 6, 40, 50},
      {L::Beginner, R::PaperBeginner, 5, 40, 60},
      {L::Beginner, R::PaperBeginner, 4, 40, 70},
      {L::Beginner, R::PaperBeginner, 3, 40, 80},
  }};
  return bands;
}

PlacementDecision assign_level(int ra, double percentage) {
  if (ra < kMinReferenceValue || ra > kMaxReferenceValue) {
    fail(ErrorCode::DomainError, "ra", "reference value " + std::to_string(ra) + " outside 3..7");
  }
  if (!(percentage >= 0.0 && percentage <= 100.0)) {
    fail(ErrorCode::DomainError, "percentage", "percentage outside [0,100]");
  }

  for (const auto& band : level_bands()) {
    if (band.ra == ra && percentage >= band.lower && percentage < band.upper) {
      return {band.level, ra, percentage, band.rule};
    }
  }
  if (percentage < kEligibilityThreshold) {
    return {Level::NotEligible, ra, percentage, RuleFired::PaperNotEligible};
  }

  // Uncovered cell: take the band sitting directly beneath it.
  const LevelBand* below = nullptr;
  for (const auto& band : level_bands()) {
    if (band.ra != ra || band.upper > percentage) continue;
    if (below == nullptr || band.upper > below->upper) below = &band;
  }
  // Every ra has a Beginner band starting at 40, so `below` is always found.
  return {below->level, ra, percentage, RuleFired::GapFill};
}

void to_json(Json& j, const FactorScores& f) {
  j = Json{{"medium_of_instruction", f.medium_of_instruction},
           {"computer_knowledge", f.computer_knowledge},
           {"course_contents", f.course_contents}};
}

void from_json(const Json& j, FactorScores& f) {
  f.medium_of_instruction = j.at("medium_of_instruction").get<int>();
  f.computer_knowledge = j.at("computer_knowledge").get<int>();
  f.course_contents = j.at("course_contents").get<int>();
}

void to_json(Json& j, const ReferenceValue& r) {
  j = Json{{"ra", r.ra}, {"factor_scores", r.factor_scores}};
}

void from_json(const Json& j, ReferenceValue& r) {
  r.ra = j.at("ra").get<int>();
  r.factor_scores = j.at("factor_scores").get<FactorScores>();
}

void to_json(Json& j, const PlacementDecision& d) {
  j = Json{{"level", enum_name(d.level)},
           {"ra", d.ra},
           {"percentage", d.percentage},
           {"rule_fired", enum_name(d.rule_fired)}};
}

void from_json(const Json& j, PlacementDecision& d) {
  d.level = fields::enumeration<Level>(j, "level");
  d.ra = j.at("ra").get<int>();
  d.percentage = j.at("percentage").get<double>();
  d.rule_fired = fields::enumeration<RuleFired>(j, "rule_fired");
}

void to_json(Json& j, const StudentPlacement& p) {
  j = Json{{"student_id", p.student_id},
           {"session_id", p.session_id},
           {"reference_value", p.reference},
           {"decision", p.decision}};
}

void from_json(const Json& j, StudentPlacement& p) {
  p.student_id = j.at("student_id").get<std::string>();
  p.session_id = j.at("session_id").get<std::string>();
  p.reference = j.at("reference_value").get<ReferenceValue>();
  p.decision = j.at("decision").get<PlacementDecision>();
}

StudentPlacement PlacementService::place_student(const std::string& student_id) {
  const CulturalProfile cultural = students_.cultural(student_id);
  auto session = tests_.latest_session(student_id);
  auto score = tests_.latest_score(student_id);
  if (!session || session->state != SessionState::Scored || !score ||
      score->session_id != session->session_id) {
    fail(ErrorCode::NoScoredTest, student_id);
  }

  StudentPlacement placement;
  placement.student_id = student_id;
  placement.session_id = score->session_id;
  placement.reference = compute_reference_value(cultural);
  placement.decision = assign_level(placement.reference.ra, score->percentage);
  repos_.placements().put(student_id, placement);
  return placement;
}

std::optional<StudentPlacement> PlacementService::placement(const std::string& student_id) const {
  auto found = repos_.placements().find(student_id);
  if (!found) return std::nullopt;
  return found->get<StudentPlacement>();
}

}  // namespace elearn
