#include "elearn/analytics.hpp"

#include <algorithm>
#include <vector>

namespace elearn {

namespace {

template <class E>
std::string name_of(const std::optional<E>& value) {
  return value ? std::string(enum_name(*value)) : std::string("Unknown");
}

std::string dimension_value(const CulturalProfile& c, std::string_view dimension) {
  if (dimension == "medium_of_instruction") return name_of(c.medium_of_instruction);
  if (dimension == "course_contents") return name_of(c.course_contents);
  return name_of(c.computer_knowledge);
}

template <class E>
void seed_keys(std::map<std::string, std::map<std::string, std::size_t>>& rows) {
  for (E v : all_variants<E>()) {
    auto& row = rows[std::string(enum_name(v))];
    for (Level l : all_variants<Level>()) row[std::string(enum_name(l))] = 0;
  }
}

}  // namespace

void to_json(Json& j, const LevelCount& c) {
  j = Json{{"count", c.count}, {"percentage", c.percentage}};
}

void from_json(const Json& j, LevelCount& c) {
  c.count = j.at("count").get<std::size_t>();
  c.percentage = j.at("percentage").get<double>();
}

void to_json(Json& j, const CohortStats& s) {
  j = Json{{"cohort_size", s.cohort_size},
           {"gender_distribution", s.gender_distribution},
           {"level_distribution", s.level_distribution},
           {"cross_tab", s.cross_tab},
           {"mean_percentage", s.mean_percentage}};
}

void from_json(const Json& j, CohortStats& s) {
  s.cohort_size = j.at("cohort_size").get<std::size_t>();
  s.gender_distribution = j.at("gender_distribution").get<std::map<std::string, double>>();
  s.level_distribution = j.at("level_distribution").get<std::map<std::string, LevelCount>>();
  s.cross_tab = j.at("cross_tab")
                    .get<std::map<std::string,
                                  std::map<std::string, std::map<std::string, std::size_t>>>>();
  s.mean_percentage =
      j.at("mean_percentage").get<std::map<std::string, std::map<std::string, double>>>();
}

CohortStats compute_cohort_stats(const RepositorySet& repos, const CohortFilter& filter) {
  std::vector<std::string_view> dimensions;
  if (filter.dimension) {
    auto it = std::find(kCohortDimensions.begin(), kCohortDimensions.end(), *filter.dimension);
    if (it == kCohortDimensions.end()) fail(ErrorCode::UnknownDimension, *filter.dimension);
    dimensions.push_back(*it);
  } else {
    dimensions.assign(kCohortDimensions.begin(), kCohortDimensions.end());
  }

  CohortStats stats;
  std::map<std::string, std::size_t> gender_counts;
  for (Gender g : all_variants<Gender>()) gender_counts[std::string(enum_name(g))] = 0;
  for (Level l : all_variants<Level>()) stats.level_distribution[std::string(enum_name(l))] = {};
  for (auto dim : dimensions) {
    stats.mean_percentage[std::string(dim)];
    auto& rows = stats.cross_tab[std::string(dim)];
    if (dim == "medium_of_instruction") seed_keys<Medium>(rows);
    if (dim == "course_contents") seed_keys<CourseContents>(rows);
    if (dim == "computer_knowledge") seed_keys<ComputerKnowledge>(rows);
  }
  std::map<std::string, std::map<std::string, std::pair<double, std::size_t>>> sums;

  for (const auto& record : repos.placements().scan()) {
    auto placement = record.get<StudentPlacement>();
    auto personal_record = repos.personal().find(placement.student_id);
    auto cultural_record = repos.cultural().find(placement.student_id);
    if (!personal_record || !cultural_record) continue;
    auto personal = personal_record->get<PersonalProfile>();
    if (filter.gender && personal.gender != *filter.gender) continue;
    auto cultural = cultural_record->get<CulturalProfile>();

    ++stats.cohort_size;
    ++gender_counts[std::string(enum_name(personal.gender))];
    const std::string level(enum_name(placement.decision.level));
    ++stats.level_distribution[level].count;
    for (auto dim : dimensions) {
      const std::string value = dimension_value(cultural, dim);
      ++stats.cross_tab[std::string(dim)][value][level];
      auto& [sum, n] = sums[std::string(dim)][value];
      sum += placement.decision.percentage;
      ++n;
    }
  }

  const double size = static_cast<double>(stats.cohort_size);
  for (const auto& [gender, count] : gender_counts) {
    stats.gender_distribution[gender] = size > 0 ? 100.0 * static_cast<double>(count) / size : 0.0;
  }
  for (auto& [_, lc] : stats.level_distribution) {
    lc.percentage = size > 0 ? 100.0 * static_cast<double>(lc.count) / size : 0.0;
  }
  for (const auto& [dim, values] : sums) {
    for (const auto& [value, acc] : values) {
      stats.mean_percentage[dim][value] = acc.first / static_cast<double>(acc.second);
    }
  }
  return stats;
}

}  // namespace elearn
