#pragma once

#include <chrono>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include "elearn/enum_names.hpp"
#include "elearn/persistence.hpp"

namespace elearn {

enum class Gender { Male, Female, Other };
enum class SchoolType { Government, Private };
// Urdu is the canonical local-language medium.
enum class Medium { LocalLanguage, English };
enum class CourseContents { Local, International };
enum class ComputerKnowledge { None, Basic, Proficient };
enum class EconomicBackground { Low, Middle, High };

template <> struct EnumNames<Gender> {
  static constexpr std::array<std::string_view, 3> names{"Male", "Female", "Other"};
};
template <> struct EnumNames<SchoolType> {
  static constexpr std::array<std::string_view, 2> names{"Government", "Private"};
};
template <> struct EnumNames<Medium> {
  static constexpr std::array<std::string_view, 2> names{"LocalLanguage", "English"};
};
template <> struct EnumNames<CourseContents> {
  static constexpr std::array<std::string_view, 2> names{"Local", "International"};
};
template <> struct EnumNames<ComputerKnowledge> {
  static constexpr std::array<std::string_view, 3> names{"None", "Basic", "Proficient"};
};
template <> struct EnumNames<EconomicBackground> {
  static constexpr std::array<std::string_view, 3> names{"Low", "Middle", "High"};
};

struct PersonalProfile {
  std::string student_id;
  std::string full_name;
  Gender gender = Gender::Other;
  std::chrono::year_month_day date_of_birth{};
  std::string contact_email;

  bool operator==(const PersonalProfile&) const = default;
};

/// Cultural and educational background. The three optional fields feed the
/// reference value and must be present before a student can be registered.
struct CulturalProfile {
  std::string student_id;
  SchoolType school_type = SchoolType::Government;
  std::optional<Medium> medium_of_instruction;
  std::optional<CourseContents> course_contents;
  std::optional<ComputerKnowledge> computer_knowledge;
  std::string region;
  std::string school_environment;
  EconomicBackground economic_background = EconomicBackground::Middle;

  bool operator==(const CulturalProfile&) const = default;
};

struct StudentRecord {
  PersonalProfile personal;
  CulturalProfile cultural;

  bool operator==(const StudentRecord&) const = default;
};

std::string format_date(const std::chrono::year_month_day& date);
// Accepts YYYY-MM-DD; throws ValidationError(field) otherwise.
std::chrono::year_month_day parse_date(const std::string& text, const std::string& field);

void to_json(Json& j, const PersonalProfile& p);
void from_json(const Json& j, PersonalProfile& p);
void to_json(Json& j, const CulturalProfile& c);
void from_json(const Json& j, CulturalProfile& c);

// Throw ValidationError naming the first failing field.
void validate(const PersonalProfile& p);
void validate(const CulturalProfile& c);

/// Registration over the personal and cultural repositories.
class StudentRegistry {
 public:
  explicit StudentRegistry(RepositorySet& repos) : repos_(repos) {}

  // An empty personal.student_id is replaced by a generated identifier;
  // an empty cultural.student_id inherits it.
  std::string register_student(PersonalProfile personal, CulturalProfile cultural);

  StudentRecord get_student(const std::string& student_id) const;
  PersonalProfile personal(const std::string& student_id) const;
  CulturalProfile cultural(const std::string& student_id) const;
  bool exists(const std::string& student_id) const;

 private:
  std::string next_generated_id() const;

  RepositorySet& repos_;
  std::mutex mutex_;
};

}  // namespace elearn
