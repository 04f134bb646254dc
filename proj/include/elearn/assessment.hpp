#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "elearn/enum_names.hpp"
#include "elearn/persistence.hpp"
#include "elearn/profiles.hpp"

namespace elearn {

enum class Section { English, MathematicalReasoning, Computer, IntelligenceQuotient };
enum class QuestionStatus { Draft, Approved };
enum class SessionState { InProgress, Submitted, Scored };

template <> struct EnumNames<Section> {
  static constexpr std::array<std::string_view, 4> names{
      "English", "MathematicalReasoning", "Computer", "IntelligenceQuotient"};
};
template <> struct EnumNames<QuestionStatus> {
  static constexpr std::array<std::string_view, 2> names{"Draft", "Approved"};
};
template <> struct EnumNames<SessionState> {
  static constexpr std::array<std::string_view, 3> names{"InProgress", "Submitted", "Scored"};
};

inline constexpr std::array<Section, 4> kSectionOrder = {
    Section::English, Section::MathematicalReasoning, Section::Computer,
    Section::IntelligenceQuotient};
inline constexpr int kQuestionsPerSection = 10;
inline constexpr int kOptionsPerQuestion = 4;
inline constexpr int kMaxTotal = kQuestionsPerSection * static_cast<int>(kSectionOrder.size());

constexpr std::size_t section_index(Section s) { return static_cast<std::size_t>(s); }

struct Question {
  std::string question_id;
  Section section = Section::English;
  std::string prompt;
  std::vector<std::string> options;
  int correct_option = 0;
  QuestionStatus status = QuestionStatus::Draft;
  int points = 1;

  bool operator==(const Question&) const = default;
};

void to_json(Json& j, const Question& q);
void from_json(const Json& j, Question& q);
// Request bodies: question_id, status and points are server-controlled.
Question question_from_request(const Json& j);
void validate(const Question& q);

/// Student-facing projection of a question; carries no answer.
struct QuestionView {
  std::string question_id;
  std::string prompt;
  std::vector<std::string> options;

  bool operator==(const QuestionView&) const = default;
};

struct TestSession {
  std::string session_id;
  std::string student_id;
  std::uint64_t seed = 0;
  SessionState state = SessionState::InProgress;
  Section current_section = Section::English;  // meaningful while InProgress
  std::array<std::vector<std::string>, 4> served_questions;
  std::array<std::optional<std::vector<int>>, 4> answers;
  std::array<std::optional<int>, 4> section_scores;

  bool operator==(const TestSession&) const = default;
  std::size_t sections_done() const;
};

void to_json(Json& j, const TestSession& s);
void from_json(const Json& j, TestSession& s);

struct SessionView {
  std::string session_id;
  SessionState state = SessionState::InProgress;
  std::optional<Section> current_section;
  std::size_t sections_done = 0;
  std::vector<QuestionView> questions;
};

void to_json(Json& j, const QuestionView& q);
void to_json(Json& j, const SessionView& v);

struct TestScore {
  std::string student_id;
  std::string session_id;
  int s_english = 0;
  int s_math_reasoning = 0;
  int s_computer = 0;
  int s_iq = 0;
  int total = 0;
  double percentage = 0.0;

  bool operator==(const TestScore&) const = default;
};

// total = S_E + S_MR + S_C + S_IQ; percentage = total / 40 * 100.
TestScore make_score(int english, int math_reasoning, int computer, int iq);

void to_json(Json& j, const TestScore& s);
void from_json(const Json& j, TestScore& s);

/// Question bank with the Draft -> Approved review gate.
class QuestionBank {
 public:
  explicit QuestionBank(RepositorySet& repos);

  std::string add_question(Question q);
  Question approve_question(const std::string& question_id);
  Question update_question(const std::string& question_id, Question q);
  void delete_question(const std::string& question_id);

  Question get(const std::string& question_id) const;
  std::vector<Question> list(std::optional<Section> section = {},
                             std::optional<QuestionStatus> status = {}) const;
  std::vector<Question> approved_pool(Section section) const;

  /// One JSON object per line with exactly the fields section, prompt,
  /// options and correct_option. All lines are validated before any insert;
  /// imported questions enter as Draft.
  std::vector<std::string> import_seed(std::istream& in);

 private:
  bool in_open_session(const std::string& question_id) const;

  RepositorySet& repos_;
  std::uint64_t next_id_ = 1;
};

/// Sequential four-section test sessions and scoring.
class TestAdministrator {
 public:
  TestAdministrator(RepositorySet& repos, const QuestionBank& bank,
                    const StudentRegistry& students);

  TestSession start_test(const std::string& student_id, std::uint64_t seed);
  int submit_section(const std::string& session_id, Section section,
                     const std::vector<int>& answers);
  TestScore score_test(const std::string& session_id);

  TestSession session(const std::string& session_id) const;
  SessionView current_section(const std::string& session_id) const;
  std::optional<TestSession> latest_session(const std::string& student_id) const;
  std::optional<TestScore> latest_score(const std::string& student_id) const;

 private:
  RepositorySet& repos_;
  const QuestionBank& bank_;
  const StudentRegistry& students_;
  std::uint64_t next_id_ = 1;
  std::unordered_map<std::string, std::string> latest_by_student_;
};

}  // namespace elearn
