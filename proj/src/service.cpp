#include "elearn/service.hpp"

#include <fstream>
#include <mutex>
#include <random>
#include <set>

#include "elearn/json_fields.hpp"

namespace elearn {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace

void validate(const ServiceConfig& config) {
  if (config.port < 0 || config.port > 65535) fail(ErrorCode::BadConfig, "port");
  if (!(config.pass_threshold >= 0.0 && config.pass_threshold <= 100.0)) {
    fail(ErrorCode::BadConfig, "pass_threshold");
  }
  if (config.default_k < 1) fail(ErrorCode::BadConfig, "default_k");
  if (config.host.empty()) fail(ErrorCode::BadConfig, "host");
  if (!is_declared(config.seed_policy)) fail(ErrorCode::BadConfig, "seed_policy");
}

ServiceConfig config_from_json(const Json& j, ServiceConfig base) {
  if (!j.is_object()) fail(ErrorCode::BadConfig, "config", "config must be a JSON object");
  static const std::set<std::string> kKeys{"port",      "data_dir", "pass_threshold",
                                           "default_k", "host",     "seed_policy"};
  for (const auto& [key, value] : j.items()) {
    if (kKeys.count(key) == 0) fail(ErrorCode::BadConfig, key, "unknown config key " + key);
  }
  try {
    if (j.contains("port")) {
      if (!j["port"].is_number_integer()) fail(ErrorCode::BadConfig, "port");
      base.port = j["port"].get<int>();
    }
    if (j.contains("data_dir")) {
      if (j["data_dir"].is_null()) {
        base.data_dir.reset();
      } else if (j["data_dir"].is_string()) {
        base.data_dir = j["data_dir"].get<std::string>();
      } else {
        fail(ErrorCode::BadConfig, "data_dir");
      }
    }
    if (j.contains("pass_threshold")) {
      if (!j["pass_threshold"].is_number()) fail(ErrorCode::BadConfig, "pass_threshold");
      base.pass_threshold = j["pass_threshold"].get<double>();
    }
    if (j.contains("default_k")) {
      if (!j["default_k"].is_number_integer()) fail(ErrorCode::BadConfig, "default_k");
      base.default_k = j["default_k"].get<int>();
    }
    if (j.contains("host")) {
      if (!j["host"].is_string()) fail(ErrorCode::BadConfig, "host");
      base.host = j["host"].get<std::string>();
    }
    if (j.contains("seed_policy")) {
      auto policy = j["seed_policy"].is_string()
                        ? parse_enum<SeedPolicy>(j["seed_policy"].get<std::string>())
                        : std::nullopt;
      if (!policy) fail(ErrorCode::BadConfig, "seed_policy");
      base.seed_policy = *policy;
    }
  } catch (const Json::exception&) {
    fail(ErrorCode::BadConfig, "config");
  }
  validate(base);
  return base;
}

ServiceConfig load_config(const std::filesystem::path& path, ServiceConfig base) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::BadConfig, "config", "cannot read " + path.string());
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::BadConfig, "config", "config is not valid JSON");
  return config_from_json(j, std::move(base));
}

Platform::Platform(ServiceConfig config, Clock clock)
    : config_(std::move(config)), clock_(std::move(clock)) {
  validate(config_);
  repos_ = std::make_unique<RepositorySet>(config_.data_dir, config_.sync_writes);
  build_modules();
}

// Id counters and indexes are derived from store contents at construction.
void Platform::build_modules() {
  students_ = std::make_unique<StudentRegistry>(*repos_);
  bank_ = std::make_unique<QuestionBank>(*repos_);
  tests_ = std::make_unique<TestAdministrator>(*repos_, *bank_, *students_);
  placements_ = std::make_unique<PlacementService>(*repos_, *students_, *tests_);
  cases_ = std::make_unique<CaseBase>(*repos_, clock_);
  lms_ = std::make_unique<LmsRouter>(*repos_, *placements_, *cases_, config_.pass_threshold);
  feedback_ = std::make_unique<FeedbackDesk>(*repos_, clock_);
}

Registration Platform::register_student(PersonalProfile personal, CulturalProfile cultural) {
  std::unique_lock lock(mutex_);
  Registration r;
  r.student_id = students_->register_student(std::move(personal), std::move(cultural));
  r.reference = compute_reference_value(students_->cultural(r.student_id));
  return r;
}

StudentRecord Platform::get_student(const std::string& student_id) const {
  std::shared_lock lock(mutex_);
  return students_->get_student(student_id);
}

Question Platform::add_question(Question q) {
  std::unique_lock lock(mutex_);
  return bank_->get(bank_->add_question(std::move(q)));
}

Question Platform::update_question(const std::string& question_id, Question q) {
  std::unique_lock lock(mutex_);
  return bank_->update_question(question_id, std::move(q));
}

void Platform::delete_question(const std::string& question_id) {
  std::unique_lock lock(mutex_);
  bank_->delete_question(question_id);
}

Question Platform::approve_question(const std::string& question_id) {
  std::unique_lock lock(mutex_);
  return bank_->approve_question(question_id);
}

Question Platform::get_question(const std::string& question_id) const {
  std::shared_lock lock(mutex_);
  return bank_->get(question_id);
}

std::vector<Question> Platform::list_questions(std::optional<Section> section,
                                               std::optional<QuestionStatus> status) const {
  std::shared_lock lock(mutex_);
  return bank_->list(section, status);
}

std::vector<std::string> Platform::seed_questions(std::istream& in, bool approve) {
  std::unique_lock lock(mutex_);
  auto ids = bank_->import_seed(in);
  if (approve) {
    for (const auto& id : ids) bank_->approve_question(id);
  }
  return ids;
}

std::uint64_t Platform::derive_seed(const std::string& student_id) const {
  return splitmix64(fnv1a(student_id) ^ splitmix64(repos_->sessions().size()));
}

TestSession Platform::start_test(const std::string& student_id,
                                 std::optional<std::uint64_t> seed) {
  std::unique_lock lock(mutex_);
  if (!seed) {
    if (config_.seed_policy == SeedPolicy::Random) {
      std::random_device rd;
      seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    } else {
      seed = derive_seed(student_id);
    }
  }
  return tests_->start_test(student_id, *seed);
}

SessionView Platform::current_section(const std::string& session_id) const {
  std::shared_lock lock(mutex_);
  return tests_->current_section(session_id);
}

int Platform::submit_section(const std::string& session_id, Section section,
                             const std::vector<int>& answers) {
  std::unique_lock lock(mutex_);
  return tests_->submit_section(session_id, section, answers);
}

TestScore Platform::score_test(const std::string& session_id) {
  std::unique_lock lock(mutex_);
  return tests_->score_test(session_id);
}

StudentPlacement Platform::place_student(const std::string& student_id) {
  std::unique_lock lock(mutex_);
  return placements_->place_student(student_id);
}

std::optional<StudentPlacement> Platform::placement(const std::string& student_id) const {
  std::shared_lock lock(mutex_);
  return placements_->placement(student_id);
}

Enrollment Platform::enroll(const std::string& student_id) {
  std::unique_lock lock(mutex_);
  return lms_->enroll(student_id);
}

Enrollment Platform::record_evaluation(const std::string& student_id, EvaluationKind kind,
                                       double score_percentage) {
  std::unique_lock lock(mutex_);
  return lms_->record_evaluation(student_id, kind, score_percentage);
}

Enrollment Platform::retake(const std::string& student_id) {
  std::unique_lock lock(mutex_);
  return lms_->retake(student_id);
}

std::optional<Enrollment> Platform::enrollment(const std::string& student_id) const {
  std::shared_lock lock(mutex_);
  return lms_->enrollment(student_id);
}

FeedbackRecord Platform::submit_feedback(const std::string& student_id, int rating,
                                         const std::string& comments) {
  std::unique_lock lock(mutex_);
  return feedback_->submit_feedback(student_id, rating, comments);
}

std::vector<SimilarCase> Platform::similar_cases(const std::string& student_id,
                                                 std::optional<int> k) const {
  std::shared_lock lock(mutex_);
  return cases_->similar_cases(students_->cultural(student_id), k.value_or(config_.default_k));
}

CohortStats Platform::cohort_stats(const CohortFilter& filter) const {
  std::shared_lock lock(mutex_);
  return compute_cohort_stats(*repos_, filter);
}

void Platform::export_snapshot(const std::filesystem::path& path) const {
  std::shared_lock lock(mutex_);
  repos_->export_snapshot(path);
}

void Platform::import_snapshot(const std::filesystem::path& path) {
  std::unique_lock lock(mutex_);
  repos_->import_snapshot(path);
  build_modules();
}

void Platform::flush() {
  std::unique_lock lock(mutex_);
  repos_->flush();
}

std::vector<std::string> Platform::consistency_violations() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  const auto& r = *repos_;

  for (const auto& [id, _] : r.personal().entries()) {
    if (!r.cultural().contains(id)) out.push_back("personal " + id + " has no cultural record");
  }
  for (const auto& [id, _] : r.cultural().entries()) {
    if (!r.personal().contains(id)) out.push_back("cultural " + id + " has no personal record");
  }
  for (const auto& [id, record] : r.sessions().entries()) {
    if (!r.personal().contains(record.at("student_id").get<std::string>())) {
      out.push_back("session " + id + " references an unknown student");
    }
  }
  for (const auto& [student, record] : r.scores().entries()) {
    auto score = record.get<TestScore>();
    auto session = r.sessions().find(score.session_id);
    if (!session || session->at("state") != enum_name(SessionState::Scored)) {
      out.push_back("score " + student + " references no scored session");
    }
  }
  for (const auto& [student, record] : r.placements().entries()) {
    auto placement = record.get<StudentPlacement>();
    auto score = r.scores().find(student);
    if (!score || score->at("session_id") != placement.session_id) {
      out.push_back("placement " + student + " references no stored score");
    }
  }
  std::size_t passes = 0;
  for (const auto& [student, record] : r.enrollments().entries()) {
    auto e = record.get<Enrollment>();
    auto placement = r.placements().find(student);
    if (!placement) {
      out.push_back("enrollment " + student + " references no placement");
      continue;
    }
    auto track = track_for(placement->get<StudentPlacement>().decision.level);
    if (!track || *track != e.track) out.push_back("enrollment " + student + " track mismatch");
    if (e.status == EnrollmentStatus::PassedCourse) ++passes;
  }
  if (r.cases().size() < passes) out.push_back("passed enrollment without a case");
  if (r.feedback().size() > r.cases().size()) out.push_back("more feedback than cases");
  return out;
}

}  // namespace elearn
