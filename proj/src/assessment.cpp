#include "elearn/assessment.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <unordered_map>

#include "elearn/json_fields.hpp"
#include "elearn/random.hpp"

namespace elearn {

namespace {

std::string make_id(const char* prefix, std::uint64_t n) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%s-%06llu", prefix, static_cast<unsigned long long>(n));
  return buf;
}

// Next counter value above every "<prefix>-N" key already in the store.
std::uint64_t next_counter(const RecordStore& store, const std::string& prefix) {
  std::uint64_t next = 1;
  for (const auto& [key, _] : store.entries()) {
    if (key.rfind(prefix + "-", 0) != 0) continue;
    try {
      next = std::max<std::uint64_t>(next, std::stoull(key.substr(prefix.size() + 1)) + 1);
    } catch (const std::exception&) {
    }
  }
  return next;
}

// A served question frozen at session start, answer included. Kept only in
// the stored session record; never leaves the administrator.
struct ServedItem {
  QuestionView view;
  int correct_option = 0;
};

Json encode_items(const std::array<std::vector<ServedItem>, 4>& items) {
  Json out = Json::array();
  for (const auto& section : items) {
    Json list = Json::array();
    for (const auto& item : section) {
      list.push_back({{"question_id", item.view.question_id},
                      {"prompt", item.view.prompt},
                      {"options", item.view.options},
                      {"correct_option", item.correct_option}});
    }
    out.push_back(std::move(list));
  }
  return out;
}

std::array<std::vector<ServedItem>, 4> decode_items(const Json& record) {
  std::array<std::vector<ServedItem>, 4> out;
  const auto& sections = record.at("served_items");
  for (std::size_t s = 0; s < out.size(); ++s) {
    for (const auto& item : sections.at(s)) {
      out[s].push_back({QuestionView{item.at("question_id").get<std::string>(),
                                     item.at("prompt").get<std::string>(),
                                     item.at("options").get<std::vector<std::string>>()},
                        item.at("correct_option").get<int>()});
    }
  }
  return out;
}

}  // namespace

void to_json(Json& j, const Question& q) {
  j = Json{{"question_id", q.question_id},
           {"section", enum_name(q.section)},
           {"prompt", q.prompt},
           {"options", q.options},
           {"correct_option", q.correct_option},
           {"status", enum_name(q.status)},
           {"points", q.points}};
}

void from_json(const Json& j, Question& q) {
  q = question_from_request(j);
  q.question_id = fields::string(j, "question_id");
  q.status = fields::enumeration<QuestionStatus>(j, "status");
  q.points = static_cast<int>(fields::integer(j, "points"));
}

Question question_from_request(const Json& j) {
  Question q;
  q.section = fields::enumeration<Section>(j, "section");
  q.prompt = fields::string(j, "prompt");
  const auto& options = fields::require(j, "options");
  if (!options.is_array()) fail(ErrorCode::ValidationError, "options");
  for (const auto& o : options) {
    if (!o.is_string()) fail(ErrorCode::ValidationError, "options");
    q.options.push_back(o.get<std::string>());
  }
  q.correct_option = static_cast<int>(fields::integer(j, "correct_option"));
  return q;
}

void validate(const Question& q) {
  if (!is_declared(q.section)) fail(ErrorCode::ValidationError, "section");
  if (q.prompt.find_first_not_of(" \t\r\n") == std::string::npos) {
    fail(ErrorCode::ValidationError, "prompt");
  }
  if (q.options.size() != kOptionsPerQuestion) fail(ErrorCode::ValidationError, "options");
  std::set<std::string> distinct;
  for (const auto& o : q.options) {
    if (o.empty() || !distinct.insert(o).second) fail(ErrorCode::ValidationError, "options");
  }
  if (q.correct_option < 0 || q.correct_option >= kOptionsPerQuestion) {
    fail(ErrorCode::ValidationError, "correct_option");
  }
  if (q.points != 1) fail(ErrorCode::ValidationError, "points");
}

std::size_t TestSession::sections_done() const {
  return static_cast<std::size_t>(
      std::count_if(answers.begin(), answers.end(), [](const auto& a) { return a.has_value(); }));
}

void to_json(Json& j, const TestSession& s) {
  Json served = Json::object();
  Json answers = Json::object();
  Json scores = Json::object();
  for (Section sec : kSectionOrder) {
    auto i = section_index(sec);
    std::string name(enum_name(sec));
    served[name] = s.served_questions[i];
    if (s.answers[i]) answers[name] = *s.answers[i];
    if (s.section_scores[i]) scores[name] = *s.section_scores[i];
  }
  j = Json{{"session_id", s.session_id},
           {"student_id", s.student_id},
           {"seed", s.seed},
           {"state", enum_name(s.state)},
           {"current_section", s.state == SessionState::InProgress
                                   ? Json(std::string(enum_name(s.current_section)))
                                   : Json(nullptr)},
           {"served_questions", std::move(served)},
           {"answers", std::move(answers)},
           {"section_scores", std::move(scores)}};
}

void from_json(const Json& j, TestSession& s) {
  s.session_id = j.at("session_id").get<std::string>();
  s.student_id = j.at("student_id").get<std::string>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.state = fields::enumeration<SessionState>(j, "state");
  s.current_section = fields::optional_enumeration<Section>(j, "current_section")
                          .value_or(Section::IntelligenceQuotient);
  for (Section sec : kSectionOrder) {
    auto i = section_index(sec);
    std::string name(enum_name(sec));
    s.served_questions[i] = j.at("served_questions").at(name).get<std::vector<std::string>>();
    const auto& answers = j.at("answers");
    if (answers.contains(name)) s.answers[i] = answers.at(name).get<std::vector<int>>();
    const auto& scores = j.at("section_scores");
    if (scores.contains(name)) s.section_scores[i] = scores.at(name).get<int>();
  }
}

void to_json(Json& j, const QuestionView& q) {
  j = Json{{"question_id", q.question_id}, {"prompt", q.prompt}, {"options", q.options}};
}

void to_json(Json& j, const SessionView& v) {
  j = Json{{"session_id", v.session_id},
           {"state", enum_name(v.state)},
           {"current_section", v.current_section
                                   ? Json(std::string(enum_name(*v.current_section)))
                                   : Json(nullptr)},
           {"sections_done", v.sections_done},
           {"sections_total", kSectionOrder.size()},
           {"questions", v.questions}};
}

TestScore make_score(int english, int math_reasoning, int computer, int iq) {
  TestScore s;
  s.s_english = english;
  s.s_math_reasoning = math_reasoning;
  s.s_computer = computer;
  s.s_iq = iq;
  s.total = english + math_reasoning + computer + iq;
  s.percentage = static_cast<double>(s.total) * 100.0 / static_cast<double>(kMaxTotal);
  return s;
}

void to_json(Json& j, const TestScore& s) {
  j = Json{{"student_id", s.student_id}, {"session_id", s.session_id},
           {"s_english", s.s_english},   {"s_math_reasoning", s.s_math_reasoning},
           {"s_computer", s.s_computer}, {"s_iq", s.s_iq},
           {"total", s.total},           {"percentage", s.percentage}};
}

void from_json(const Json& j, TestScore& s) {
  s.student_id = j.at("student_id").get<std::string>();
  s.session_id = j.at("session_id").get<std::string>();
  s.s_english = j.at("s_english").get<int>();
  s.s_math_reasoning = j.at("s_math_reasoning").get<int>();
  s.s_computer = j.at("s_computer").get<int>();
  s.s_iq = j.at("s_iq").get<int>();
  s.total = j.at("total").get<int>();
  s.percentage = j.at("percentage").get<double>();
}

// ---------------------------------------------------------------------------
// QuestionBank

QuestionBank::QuestionBank(RepositorySet& repos)
    : repos_(repos), next_id_(next_counter(repos.questions(), "q")) {}

std::string QuestionBank::add_question(Question q) {
  q.status = QuestionStatus::Draft;
  q.points = 1;
  validate(q);
  q.question_id = make_id("q", next_id_++);
  repos_.questions().put(q.question_id, q);
  return q.question_id;
}

Question QuestionBank::approve_question(const std::string& question_id) {
  Question q = get(question_id);
  if (q.status == QuestionStatus::Approved) fail(ErrorCode::AlreadyApproved, question_id);
  q.status = QuestionStatus::Approved;
  repos_.questions().put(question_id, q);
  return q;
}

Question QuestionBank::update_question(const std::string& question_id, Question q) {
  (void)get(question_id);
  q.question_id = question_id;
  q.status = QuestionStatus::Draft;
  q.points = 1;
  validate(q);
  repos_.questions().put(question_id, q);
  return q;
}

void QuestionBank::delete_question(const std::string& question_id) {
  (void)get(question_id);
  if (in_open_session(question_id)) fail(ErrorCode::InUse, question_id);
  repos_.questions().erase(question_id);
}

bool QuestionBank::in_open_session(const std::string& question_id) const {
  for (const auto& record : repos_.sessions().scan()) {
    if (record.at("state") != enum_name(SessionState::InProgress)) continue;
    for (const auto& [_, ids] : record.at("served_questions").items()) {
      for (const auto& id : ids) {
        if (id == question_id) return true;
      }
    }
  }
  return false;
}

Question QuestionBank::get(const std::string& question_id) const {
  auto found = repos_.questions().find(question_id);
  if (!found) fail(ErrorCode::NotFound, question_id);
  return found->get<Question>();
}

std::vector<Question> QuestionBank::list(std::optional<Section> section,
                                         std::optional<QuestionStatus> status) const {
  std::vector<Question> out;
  for (const auto& record : repos_.questions().scan()) {
    auto q = record.get<Question>();
    if (section && q.section != *section) continue;
    if (status && q.status != *status) continue;
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<Question> QuestionBank::approved_pool(Section section) const {
  return list(section, QuestionStatus::Approved);
}

std::vector<std::string> QuestionBank::import_seed(std::istream& in) {
  static const std::set<std::string> kFields{"section", "prompt", "options", "correct_option"};
  std::vector<Question> parsed;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    Json j = Json::parse(line, nullptr, false);
    if (!j.is_object()) fail(ErrorCode::ValidationError, where, where + ": not a JSON object");
    for (const auto& [key, _] : j.items()) {
      if (kFields.count(key) == 0) {
        fail(ErrorCode::ValidationError, where + ": " + key,
             where + ": unexpected field " + key);
      }
    }
    try {
      Question q = question_from_request(j);
      validate(q);
      parsed.push_back(std::move(q));
    } catch (const Error& e) {
      fail(e.code(), where + ": " + e.detail(), where + ": " + e.what());
    }
  }
  std::vector<std::string> ids;
  ids.reserve(parsed.size());
  for (auto& q : parsed) ids.push_back(add_question(std::move(q)));
  return ids;
}

// ---------------------------------------------------------------------------
// TestAdministrator

TestAdministrator::TestAdministrator(RepositorySet& repos, const QuestionBank& bank,
                                     const StudentRegistry& students)
    : repos_(repos),
      bank_(bank),
      students_(students),
      next_id_(next_counter(repos.sessions(), "sess")) {
  for (const auto& [key, record] : repos.sessions().entries()) {
    latest_by_student_[record.at("student_id").get<std::string>()] = key;
  }
}

TestSession TestAdministrator::start_test(const std::string& student_id, std::uint64_t seed) {
  if (!students_.exists(student_id)) fail(ErrorCode::NotFound, student_id);
  if (auto latest = latest_session(student_id);
      latest && latest->state != SessionState::Scored) {
    fail(ErrorCode::SessionAlreadyOpen, latest->session_id);
  }

  std::array<std::vector<Question>, 4> pools;
  for (Section sec : kSectionOrder) {
    pools[section_index(sec)] = bank_.approved_pool(sec);
    if (pools[section_index(sec)].size() < kQuestionsPerSection) {
      fail(ErrorCode::InsufficientQuestions, std::string(enum_name(sec)));
    }
  }

  TestSession session;
  session.session_id = make_id("sess", next_id_++);
  session.student_id = student_id;
  session.seed = seed;
  session.state = SessionState::InProgress;
  session.current_section = kSectionOrder.front();

  SeededRng rng(seed);
  std::array<std::vector<ServedItem>, 4> items;
  for (Section sec : kSectionOrder) {
    auto i = section_index(sec);
    const auto& pool = pools[i];
    for (std::size_t pick : sample_without_replacement(pool.size(), kQuestionsPerSection, rng)) {
      const Question& q = pool[pick];
      session.served_questions[i].push_back(q.question_id);
      items[i].push_back({QuestionView{q.question_id, q.prompt, q.options}, q.correct_option});
    }
  }

  Json record = session;
  record["served_items"] = encode_items(items);
  repos_.sessions().put(session.session_id, record);
  latest_by_student_[student_id] = session.session_id;
  return session;
}

int TestAdministrator::submit_section(const std::string& session_id, Section section,
                                      const std::vector<int>& answers) {
  auto found = repos_.sessions().find(session_id);
  if (!found) fail(ErrorCode::NotFound, session_id);
  auto session = found->get<TestSession>();
  if (!is_declared(section)) fail(ErrorCode::MalformedAnswers, "section");

  const auto i = section_index(section);
  if (session.answers[i]) fail(ErrorCode::AlreadyAnswered, std::string(enum_name(section)));
  if (session.state != SessionState::InProgress || session.current_section != section) {
    fail(ErrorCode::OutOfOrder, std::string(enum_name(section)));
  }
  if (answers.size() != kQuestionsPerSection) {
    fail(ErrorCode::MalformedAnswers, "answers",
         "expected " + std::to_string(kQuestionsPerSection) + " answers");
  }
  for (int a : answers) {
    if (a < 0 || a >= kOptionsPerQuestion) {
      fail(ErrorCode::MalformedAnswers, "answers", "answer index outside 0..3");
    }
  }

  const auto items = decode_items(*found);
  int score = 0;
  for (std::size_t q = 0; q < answers.size(); ++q) {
    if (answers[q] == items[i][q].correct_option) ++score;
  }
  session.answers[i] = answers;
  session.section_scores[i] = score;
  if (i + 1 < kSectionOrder.size()) {
    session.current_section = kSectionOrder[i + 1];
  } else {
    session.state = SessionState::Submitted;
  }

  Json record = session;
  record["served_items"] = found->at("served_items");
  repos_.sessions().put(session_id, record);
  return score;
}

TestScore TestAdministrator::score_test(const std::string& session_id) {
  auto found = repos_.sessions().find(session_id);
  if (!found) fail(ErrorCode::NotFound, session_id);
  auto session = found->get<TestSession>();
  if (session.state != SessionState::Submitted) fail(ErrorCode::NotSubmitted, session_id);

  auto section = [&](Section s) { return *session.section_scores[section_index(s)]; };
  TestScore score = make_score(section(Section::English), section(Section::MathematicalReasoning),
                               section(Section::Computer), section(Section::IntelligenceQuotient));
  score.student_id = session.student_id;
  score.session_id = session.session_id;
  repos_.scores().put(session.student_id, score);

  session.state = SessionState::Scored;
  Json record = session;
  record["served_items"] = found->at("served_items");
  repos_.sessions().put(session_id, record);
  return score;
}

TestSession TestAdministrator::session(const std::string& session_id) const {
  auto found = repos_.sessions().find(session_id);
  if (!found) fail(ErrorCode::NotFound, session_id);
  return found->get<TestSession>();
}

SessionView TestAdministrator::current_section(const std::string& session_id) const {
  auto found = repos_.sessions().find(session_id);
  if (!found) fail(ErrorCode::NotFound, session_id);
  auto session = found->get<TestSession>();

  SessionView view;
  view.session_id = session.session_id;
  view.state = session.state;
  view.sections_done = session.sections_done();
  if (session.state == SessionState::InProgress) {
    view.current_section = session.current_section;
    auto items = decode_items(*found);
    for (auto& item : items[section_index(session.current_section)]) {
      view.questions.push_back(std::move(item.view));
    }
  }
  return view;
}

std::optional<TestSession> TestAdministrator::latest_session(
    const std::string& student_id) const {
  auto it = latest_by_student_.find(student_id);
  if (it == latest_by_student_.end()) return std::nullopt;
  return session(it->second);
}

std::optional<TestScore> TestAdministrator::latest_score(const std::string& student_id) const {
  auto found = repos_.scores().find(student_id);
  if (!found) return std::nullopt;
  return found->get<TestScore>();
}

}  // namespace elearn
