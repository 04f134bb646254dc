#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "elearn/analytics.hpp"
#include "elearn/assessment.hpp"
#include "elearn/persistence.hpp"
#include "elearn/placement.hpp"
#include "elearn/profiles.hpp"

namespace elearn {

class Platform;

/// Probability vectors over the declared variants of each factor, in
/// declaration order.
struct FactorDistributions {
  std::vector<double> gender;
  std::vector<double> school_type;
  std::vector<double> medium_of_instruction;
  std::vector<double> course_contents;
  std::vector<double> computer_knowledge;
  std::vector<double> economic_background;
};

FactorDistributions uniform_distributions();
// Throws BadDistribution naming the factor.
void validate(const FactorDistributions& d);
// Object keyed by factor, each an object {variant: probability}. Factors
// left out stay uniform; unlisted variants get probability 0.
FactorDistributions distributions_from_json(const Json& j);

/// Per-question probability of a correct answer. English medium, computer
/// knowledge and international course contents each raise it, so simulated
/// cohorts show those groups scoring higher.
struct ScoreModel {
  double base = 0.35;
  double english_medium = 0.20;
  double per_computer_level = 0.10;  // None 0, Basic 1, Proficient 2 steps
  double international_contents = 0.05;

  double probability(const CulturalProfile& c) const;
};

ScoreModel score_model_from_json(const Json& j, ScoreModel base = {});

struct SimulationOptions {
  int questions_per_section = 12;
  ScoreModel model;
};

// Reads {<factors>..., "score_model": {...}, "questions_per_section": n}.
void simulation_config_from_json(const Json& j, FactorDistributions& distributions,
                                 SimulationOptions& options);

/// The calls the simulator drives; implemented in-process and over HTTP.
class CohortBackend {
 public:
  virtual ~CohortBackend() = default;

  virtual std::string add_question(const Question& q) = 0;
  virtual void approve_question(const std::string& question_id) = 0;
  virtual std::map<std::string, int> answer_key() = 0;
  virtual std::string register_student(const PersonalProfile& p, const CulturalProfile& c) = 0;
  virtual std::string start_test(const std::string& student_id, std::uint64_t seed) = 0;
  virtual SessionView current_section(const std::string& session_id) = 0;
  virtual int submit_section(const std::string& session_id, Section section,
                             const std::vector<int>& answers) = 0;
  virtual TestScore score_test(const std::string& session_id) = 0;
  virtual StudentPlacement place_student(const std::string& student_id) = 0;
  virtual CohortStats cohort_stats() = 0;
};

class InProcessBackend : public CohortBackend {
 public:
  explicit InProcessBackend(Platform& platform) : platform_(platform) {}

  std::string add_question(const Question& q) override;
  void approve_question(const std::string& question_id) override;
  std::map<std::string, int> answer_key() override;
  std::string register_student(const PersonalProfile& p, const CulturalProfile& c) override;
  std::string start_test(const std::string& student_id, std::uint64_t seed) override;
  SessionView current_section(const std::string& session_id) override;
  int submit_section(const std::string& session_id, Section section,
                     const std::vector<int>& answers) override;
  TestScore score_test(const std::string& session_id) override;
  StudentPlacement place_student(const std::string& student_id) override;
  CohortStats cohort_stats() override;

 private:
  Platform& platform_;
};

struct SimulatedStudent {
  std::string student_id;
  Gender gender = Gender::Other;
  CulturalProfile cultural;
  TestScore score;
  StudentPlacement placement;
};

struct SimulationSummary {
  int n = 0;
  std::uint64_t seed = 0;
  CohortStats stats;
  std::vector<SimulatedStudent> students;
};

void to_json(Json& j, const SimulationSummary& s);

/// Seeds and approves a question bank, then runs n synthetic students
/// through registration, the four test sections, scoring and placement.
/// Deterministic for fixed (n, seed, distributions) on an empty backend.
SimulationSummary simulate_cohort(CohortBackend& backend, int n, std::uint64_t seed,
                                  const FactorDistributions& distributions,
                                  const SimulationOptions& options = {});

}  // namespace elearn
