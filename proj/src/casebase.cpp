#include "elearn/casebase.hpp"

#include <algorithm>
#include <cstdio>

#include "elearn/json_fields.hpp"

namespace elearn {

void to_json(Json& j, const Case& c) {
  j = Json{{"case_id", c.case_id},
           {"student_id", c.student_id},
           {"attempt", c.attempt},
           {"cultural", c.cultural},
           {"ra", c.ra},
           {"aptitude_percentage", c.aptitude_percentage},
           {"assigned_level", enum_name(c.assigned_level)},
           {"attempts_to_pass", c.attempts_to_pass},
           {"stored_at", c.stored_at}};
}

void from_json(const Json& j, Case& c) {
  c.case_id = j.at("case_id").get<std::string>();
  c.student_id = j.at("student_id").get<std::string>();
  c.attempt = j.at("attempt").get<int>();
  c.cultural = j.at("cultural").get<CulturalProfile>();
  c.ra = j.at("ra").get<int>();
  c.aptitude_percentage = j.at("aptitude_percentage").get<double>();
  c.assigned_level = fields::enumeration<Level>(j, "assigned_level");
  c.attempts_to_pass = j.at("attempts_to_pass").get<int>();
  c.stored_at = j.at("stored_at").get<std::int64_t>();
}

double similarity(const CulturalProfile& a, const CulturalProfile& b) {
  int matches = 0;
  matches += a.medium_of_instruction == b.medium_of_instruction;
  matches += a.computer_knowledge == b.computer_knowledge;
  matches += a.course_contents == b.course_contents;
  matches += a.school_type == b.school_type;
  matches += a.economic_background == b.economic_background;
  return static_cast<double>(matches) / kSimilarityAttributes;
}

CaseBase::CaseBase(RepositorySet& repos, Clock clock) : repos_(repos), clock_(std::move(clock)) {
  next_id_ = repos_.cases().size() + 1;
}

Case CaseBase::store_case(const std::string& student_id) {
  auto enrollment = repos_.enrollments().find(student_id);
  if (!enrollment) fail(ErrorCode::NotPassed, student_id);
  auto e = enrollment->get<Enrollment>();
  if (e.status != EnrollmentStatus::PassedCourse) fail(ErrorCode::NotPassed, student_id);
  if (has_case(student_id, e.attempt_number)) {
    fail(ErrorCode::DuplicateCase, student_id + "#" + std::to_string(e.attempt_number));
  }

  auto placement = repos_.placements().get(student_id).get<StudentPlacement>();

  Case c;
  char id[32];
  std::snprintf(id, sizeof id, "case-%06llu", static_cast<unsigned long long>(next_id_));
  c.case_id = id;
  c.student_id = student_id;
  c.attempt = e.attempt_number;
  c.cultural = repos_.cultural().get(student_id).get<CulturalProfile>();
  c.ra = placement.reference.ra;
  c.aptitude_percentage = placement.decision.percentage;
  c.assigned_level = placement.decision.level;
  c.attempts_to_pass = e.attempt_number;
  c.stored_at = clock_();
  if (c.assigned_level == Level::NotEligible) fail(ErrorCode::NotPassed, student_id);

  // Ids come from a counter; never overwrite an existing case.
  while (repos_.cases().contains(c.case_id)) {
    std::snprintf(id, sizeof id, "case-%06llu", static_cast<unsigned long long>(++next_id_));
    c.case_id = id;
  }
  repos_.cases().put(c.case_id, c);
  ++next_id_;
  return c;
}

std::vector<SimilarCase> CaseBase::similar_cases(const CulturalProfile& query, int k) const {
  if (k < 1) fail(ErrorCode::ValidationError, "k");
  std::vector<SimilarCase> scored;
  for (auto& c : all()) {
    double s = similarity(query, c.cultural);
    scored.push_back({std::move(c), s});
  }
  std::stable_sort(scored.begin(), scored.end(), [](const SimilarCase& a, const SimilarCase& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.match.stored_at < b.match.stored_at;
  });
  if (scored.size() > static_cast<std::size_t>(k)) scored.resize(static_cast<std::size_t>(k));
  return scored;
}

std::vector<Case> CaseBase::all() const {
  std::vector<Case> out;
  for (const auto& record : repos_.cases().scan()) out.push_back(record.get<Case>());
  return out;
}

std::size_t CaseBase::size() const { return repos_.cases().size(); }

bool CaseBase::has_case(const std::string& student_id, int attempt) const {
  for (const auto& record : repos_.cases().scan()) {
    if (record.at("student_id") == student_id && record.at("attempt") == attempt) return true;
  }
  return false;
}

void CaseBase::export_cases(std::ostream& out) const {
  for (const auto& record : repos_.cases().scan()) out << record.dump() << '\n';
}

}  // namespace elearn
