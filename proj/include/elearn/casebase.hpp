#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "elearn/clock.hpp"
#include "elearn/lms.hpp"
#include "elearn/persistence.hpp"
#include "elearn/placement.hpp"
#include "elearn/profiles.hpp"

namespace elearn {

struct Case {
  std::string case_id;
  std::string student_id;
  int attempt = 1;  // enrollment attempt that passed
  CulturalProfile cultural;
  int ra = 0;
  double aptitude_percentage = 0.0;
  Level assigned_level = Level::Beginner;
  int attempts_to_pass = 1;
  std::int64_t stored_at = 0;  // ms since epoch

  bool operator==(const Case&) const = default;
};

void to_json(Json& j, const Case& c);
void from_json(const Json& j, Case& c);

inline constexpr int kSimilarityAttributes = 5;

/// Fraction of matching attributes over medium_of_instruction,
/// computer_knowledge, course_contents, school_type and economic_background.
double similarity(const CulturalProfile& a, const CulturalProfile& b);

struct SimilarCase {
  Case match;
  double similarity = 0.0;
};

/// Append-only store of passed students.
class CaseBase {
 public:
  explicit CaseBase(RepositorySet& repos, Clock clock = system_now_ms);

  Case store_case(const std::string& student_id);

  /// Up to k cases by descending similarity; equal similarities keep
  /// stored_at order, then append order. Throws ValidationError if k < 1.
  std::vector<SimilarCase> similar_cases(const CulturalProfile& query, int k) const;

  std::vector<Case> all() const;
  std::size_t size() const;
  bool has_case(const std::string& student_id, int attempt) const;

  // One case per line, full field set.
  void export_cases(std::ostream& out) const;

 private:
  RepositorySet& repos_;
  Clock clock_;
  std::uint64_t next_id_ = 1;
};

}  // namespace elearn
