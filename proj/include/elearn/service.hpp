#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "elearn/analytics.hpp"
#include "elearn/assessment.hpp"
#include "elearn/casebase.hpp"
#include "elearn/clock.hpp"
#include "elearn/feedback.hpp"
#include "elearn/lms.hpp"
#include "elearn/persistence.hpp"
#include "elearn/placement.hpp"
#include "elearn/profiles.hpp"

namespace elearn {

// How start_test picks a seed when the caller supplies none.
enum class SeedPolicy { Derived, Random };

template <> struct EnumNames<SeedPolicy> {
  static constexpr std::array<std::string_view, 2> names{"derived", "random"};
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::filesystem::path> data_dir;  // in-memory when empty
  double pass_threshold = kDefaultPassThreshold;
  int default_k = 5;
  SeedPolicy seed_policy = SeedPolicy::Derived;
  bool sync_writes = true;
};

// Throws BadConfig naming the offending field.
void validate(const ServiceConfig& config);
// Keys: port, data_dir, pass_threshold, default_k, and optionally host and
// seed_policy. Unknown keys are rejected.
ServiceConfig config_from_json(const Json& j, ServiceConfig base = {});
ServiceConfig load_config(const std::filesystem::path& path, ServiceConfig base = {});

struct Registration {
  std::string student_id;
  ReferenceValue reference;
};

/// Thread-safe facade over every module. Mutations are serialized behind a
/// single writer lock; reads share it.
class Platform {
 public:
  explicit Platform(ServiceConfig config = {}, Clock clock = system_now_ms);

  const ServiceConfig& config() const noexcept { return config_; }

  Registration register_student(PersonalProfile personal, CulturalProfile cultural);
  StudentRecord get_student(const std::string& student_id) const;

  Question add_question(Question q);
  Question update_question(const std::string& question_id, Question q);
  void delete_question(const std::string& question_id);
  Question approve_question(const std::string& question_id);
  Question get_question(const std::string& question_id) const;
  std::vector<Question> list_questions(std::optional<Section> section = {},
                                       std::optional<QuestionStatus> status = {}) const;
  std::vector<std::string> seed_questions(std::istream& in, bool approve = false);

  TestSession start_test(const std::string& student_id, std::optional<std::uint64_t> seed = {});
  SessionView current_section(const std::string& session_id) const;
  int submit_section(const std::string& session_id, Section section,
                     const std::vector<int>& answers);
  TestScore score_test(const std::string& session_id);

  StudentPlacement place_student(const std::string& student_id);
  std::optional<StudentPlacement> placement(const std::string& student_id) const;

  Enrollment enroll(const std::string& student_id);
  Enrollment record_evaluation(const std::string& student_id, EvaluationKind kind,
                               double score_percentage);
  Enrollment retake(const std::string& student_id);
  std::optional<Enrollment> enrollment(const std::string& student_id) const;

  FeedbackRecord submit_feedback(const std::string& student_id, int rating,
                                 const std::string& comments);

  std::vector<SimilarCase> similar_cases(const std::string& student_id,
                                         std::optional<int> k = {}) const;
  CohortStats cohort_stats(const CohortFilter& filter = {}) const;

  void export_snapshot(const std::filesystem::path& path) const;
  void import_snapshot(const std::filesystem::path& path);
  void flush();

  /// Cross-store referential checks; empty when the nine stores agree.
  std::vector<std::string> consistency_violations() const;

  RepositorySet& repositories() noexcept { return *repos_; }
  const RepositorySet& repositories() const noexcept { return *repos_; }

 private:
  std::uint64_t derive_seed(const std::string& student_id) const;
  void build_modules();

  ServiceConfig config_;
  Clock clock_;
  std::unique_ptr<RepositorySet> repos_;
  std::unique_ptr<StudentRegistry> students_;
  std::unique_ptr<QuestionBank> bank_;
  std::unique_ptr<TestAdministrator> tests_;
  std::unique_ptr<PlacementService> placements_;
  std::unique_ptr<CaseBase> cases_;
  std::unique_ptr<LmsRouter> lms_;
  std::unique_ptr<FeedbackDesk> feedback_;
  mutable std::shared_mutex mutex_;
};

}  // namespace elearn
