#pragma once

#include <array>
#include <optional>
#include <string>

#include "elearn/assessment.hpp"
#include "elearn/enum_names.hpp"
#include "elearn/persistence.hpp"
#include "elearn/profiles.hpp"

namespace elearn {

// Declared in rank order so that comparisons follow placement seniority.
enum class Level { NotEligible, Beginner, Intermediate, Skilled };
enum class RuleFired { PaperSkilled, PaperIntermediate, PaperBeginner, PaperNotEligible, GapFill };

template <> struct EnumNames<Level> {
  static constexpr std::array<std::string_view, 4> names{"NotEligible", "Beginner",
                                                         "Intermediate", "Skilled"};
};
template <> struct EnumNames<RuleFired> {
  static constexpr std::array<std::string_view, 5> names{
      "PaperSkilled", "PaperIntermediate", "PaperBeginner", "PaperNotEligible", "GapFill"};
};

inline constexpr int kMinReferenceValue = 3;
inline constexpr int kMaxReferenceValue = 7;
inline constexpr double kEligibilityThreshold = 40.0;

int factor_score(Medium m);
int factor_score(ComputerKnowledge k);
int factor_score(CourseContents c);

struct FactorScores {
  int medium_of_instruction = 0;
  int computer_knowledge = 0;
  int course_contents = 0;

  bool operator==(const FactorScores&) const = default;
};

struct ReferenceValue {
  int ra = 0;
  FactorScores factor_scores;

  bool operator==(const ReferenceValue&) const = default;
};

struct PlacementDecision {
  Level level = Level::NotEligible;
  int ra = 0;
  double percentage = 0.0;
  RuleFired rule_fired = RuleFired::PaperNotEligible;

  bool operator==(const PlacementDecision&) const = default;
};

/// Sum of the three ordinal factor scores; always within [3, 7].
/// Throws ValidationError if a placement-relevant field is missing.
ReferenceValue compute_reference_value(const CulturalProfile& cultural);

/// The level chain, evaluated first-match in the order Skilled,
/// Intermediate, Beginner, NotEligible. A cell no rule covers takes the
/// level of the highest band below it for the same ra (GapFill).
/// Throws DomainError when ra is outside 3..7 or percentage outside [0,100].
PlacementDecision assign_level(int ra, double percentage);

/// One row of the level table: ra fixed, lower <= percentage < upper.
struct LevelBand {
  Level level;
  RuleFired rule;
  int ra;
  double lower;
  double upper;  // exclusive; +inf for open-ended Skilled bands
};

// The table in evaluation order, without the terminal percentage < 40 rule.
const std::array<LevelBand, 15>& level_bands();

struct StudentPlacement {
  std::string student_id;
  std::string session_id;
  ReferenceValue reference;
  PlacementDecision decision;

  bool operator==(const StudentPlacement&) const = default;
};

void to_json(Json& j, const FactorScores& f);
void from_json(const Json& j, FactorScores& f);
void to_json(Json& j, const ReferenceValue& r);
void from_json(const Json& j, ReferenceValue& r);
void to_json(Json& j, const PlacementDecision& d);
void from_json(const Json& j, PlacementDecision& d);
void to_json(Json& j, const StudentPlacement& p);
void from_json(const Json& j, StudentPlacement& p);

class PlacementService {
 public:
  PlacementService(RepositorySet& repos, const StudentRegistry& students,
                   const TestAdministrator& tests)
      : repos_(repos), students_(students), tests_(tests) {}

  StudentPlacement place_student(const std::string& student_id);
  std::optional<StudentPlacement> placement(const std::string& student_id) const;

 private:
  RepositorySet& repos_;
  const StudentRegistry& students_;
  const TestAdministrator& tests_;
};

}  // namespace elearn
