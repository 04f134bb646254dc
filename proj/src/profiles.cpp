#include "elearn/profiles.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "elearn/json_fields.hpp"

namespace elearn {

namespace {

bool blank(const std::string& text) {
  return std::all_of(text.begin(), text.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

std::string format_date(const std::chrono::year_month_day& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

std::chrono::year_month_day parse_date(const std::string& text, const std::string& field) {
  int y = 0;
  unsigned m = 0, d = 0;
  char tail = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      std::sscanf(text.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
    fail(ErrorCode::ValidationError, field);
  }
  std::chrono::year_month_day date{std::chrono::year{y}, std::chrono::month{m},
                                   std::chrono::day{d}};
  if (!date.ok()) fail(ErrorCode::ValidationError, field);
  return date;
}

void to_json(Json& j, const PersonalProfile& p) {
  j = Json{{"student_id", p.student_id},
           {"full_name", p.full_name},
           {"gender", enum_name(p.gender)},
           {"date_of_birth", format_date(p.date_of_birth)},
           {"contact_email", p.contact_email}};
}

void from_json(const Json& j, PersonalProfile& p) {
  p.student_id = fields::string_or(j, "student_id", "");
  p.full_name = fields::string(j, "full_name");
  p.gender = fields::enumeration<Gender>(j, "gender");
  p.date_of_birth = parse_date(fields::string(j, "date_of_birth"), "date_of_birth");
  p.contact_email = fields::string_or(j, "contact_email", "");
}

void to_json(Json& j, const CulturalProfile& c) {
  j = Json{{"student_id", c.student_id},
           {"school_type", enum_name(c.school_type)},
           {"medium_of_instruction", fields::optional_name(c.medium_of_instruction)},
           {"course_contents", fields::optional_name(c.course_contents)},
           {"computer_knowledge", fields::optional_name(c.computer_knowledge)},
           {"region", c.region},
           {"school_environment", c.school_environment},
           {"economic_background", enum_name(c.economic_background)}};
}

void from_json(const Json& j, CulturalProfile& c) {
  c.student_id = fields::string_or(j, "student_id", "");
  c.school_type = fields::enumeration<SchoolType>(j, "school_type");
  c.medium_of_instruction = fields::optional_enumeration<Medium>(j, "medium_of_instruction");
  c.course_contents = fields::optional_enumeration<CourseContents>(j, "course_contents");
  c.computer_knowledge =
      fields::optional_enumeration<ComputerKnowledge>(j, "computer_knowledge");
  c.region = fields::string_or(j, "region", "");
  c.school_environment = fields::string_or(j, "school_environment", "");
  c.economic_background = fields::enumeration<EconomicBackground>(j, "economic_background");
}

void validate(const PersonalProfile& p) {
  if (p.student_id.empty()) fail(ErrorCode::ValidationError, "student_id");
  if (blank(p.full_name)) fail(ErrorCode::ValidationError, "full_name");
  if (!is_declared(p.gender)) fail(ErrorCode::ValidationError, "gender");
  if (!p.date_of_birth.ok()) fail(ErrorCode::ValidationError, "date_of_birth");
}

void validate(const CulturalProfile& c) {
  if (c.student_id.empty()) fail(ErrorCode::ValidationError, "student_id");
  if (!is_declared(c.school_type)) fail(ErrorCode::ValidationError, "school_type");
  if (!c.medium_of_instruction || !is_declared(*c.medium_of_instruction)) {
    fail(ErrorCode::ValidationError, "medium_of_instruction");
  }
  if (!c.course_contents || !is_declared(*c.course_contents)) {
    fail(ErrorCode::ValidationError, "course_contents");
  }
  if (!c.computer_knowledge || !is_declared(*c.computer_knowledge)) {
    fail(ErrorCode::ValidationError, "computer_knowledge");
  }
  if (!is_declared(c.economic_background)) {
    fail(ErrorCode::ValidationError, "economic_background");
  }
}

std::string StudentRegistry::next_generated_id() const {
  for (std::size_t n = repos_.personal().size() + 1;; ++n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "stu-%06zu", n);
    if (!repos_.personal().contains(buf)) return buf;
  }
}

std::string StudentRegistry::register_student(PersonalProfile personal,
                                              CulturalProfile cultural) {
  std::lock_guard lock(mutex_);
  if (personal.student_id.empty()) personal.student_id = next_generated_id();
  if (cultural.student_id.empty()) cultural.student_id = personal.student_id;

  validate(personal);
  if (cultural.student_id != personal.student_id) {
    fail(ErrorCode::ValidationError, "student_id",
         "cultural.student_id does not match personal.student_id");
  }
  validate(cultural);

  if (repos_.personal().contains(personal.student_id) ||
      repos_.cultural().contains(personal.student_id)) {
    fail(ErrorCode::DuplicateStudent, personal.student_id);
  }
  repos_.personal().put(personal.student_id, personal);
  repos_.cultural().put(cultural.student_id, cultural);
  return personal.student_id;
}

StudentRecord StudentRegistry::get_student(const std::string& student_id) const {
  return {personal(student_id), cultural(student_id)};
}

PersonalProfile StudentRegistry::personal(const std::string& student_id) const {
  auto found = repos_.personal().find(student_id);
  if (!found) fail(ErrorCode::NotFound, student_id);
  return found->get<PersonalProfile>();
}

CulturalProfile StudentRegistry::cultural(const std::string& student_id) const {
  auto found = repos_.cultural().find(student_id);
  if (!found) fail(ErrorCode::NotFound, student_id);
  return found->get<CulturalProfile>();
}

bool StudentRegistry::exists(const std::string& student_id) const {
  return repos_.personal().contains(student_id);
}

}  // namespace elearn
