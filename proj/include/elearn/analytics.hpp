#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "elearn/persistence.hpp"
#include "elearn/placement.hpp"
#include "elearn/profiles.hpp"

namespace elearn {

// Cultural attributes available as cross-tab rows.
inline constexpr std::array<std::string_view, 3> kCohortDimensions = {
    "medium_of_instruction", "course_contents", "computer_knowledge"};

struct CohortFilter {
  std::optional<std::string> dimension;  // all three when empty
  std::optional<Gender> gender;
};

struct LevelCount {
  std::size_t count = 0;
  double percentage = 0.0;

  bool operator==(const LevelCount&) const = default;
};

/// Aggregates over placed students. Every declared variant appears as a key,
/// with zero counts where nobody falls.
struct CohortStats {
  std::size_t cohort_size = 0;
  std::map<std::string, double> gender_distribution;
  std::map<std::string, LevelCount> level_distribution;
  // dimension -> dimension value -> level -> count
  std::map<std::string, std::map<std::string, std::map<std::string, std::size_t>>> cross_tab;
  // dimension -> dimension value -> mean aptitude percentage (non-empty groups only)
  std::map<std::string, std::map<std::string, double>> mean_percentage;

  bool operator==(const CohortStats&) const = default;
};

void to_json(Json& j, const LevelCount& c);
void from_json(const Json& j, LevelCount& c);
void to_json(Json& j, const CohortStats& s);
void from_json(const Json& j, CohortStats& s);

// Throws UnknownDimension for a dimension outside kCohortDimensions.
CohortStats compute_cohort_stats(const RepositorySet& repos, const CohortFilter& filter = {});

}  // namespace elearn
