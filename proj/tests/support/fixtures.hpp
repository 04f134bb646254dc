#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "elearn/assessment.hpp"
#include "elearn/profiles.hpp"

namespace fixtures {

using namespace elearn;

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("elearn-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline PersonalProfile personal(const std::string& id, Gender gender = Gender::Female) {
  PersonalProfile p;
  p.student_id = id;
  p.full_name = "Student " + id;
  p.gender = gender;
  p.date_of_birth = std::chrono::year_month_day{std::chrono::year{2001}, std::chrono::month{4},
                                               std::chrono::day{17}};
  p.contact_email = id + "@example.org";
  return p;
}

inline CulturalProfile cultural(const std::string& id, Medium medium = Medium::English,
                                ComputerKnowledge ck = ComputerKnowledge::Basic,
                                CourseContents cc = CourseContents::Local,
                                SchoolType school = SchoolType::Government,
                                EconomicBackground econ = EconomicBackground::Middle) {
  CulturalProfile c;
  c.student_id = id;
  c.school_type = school;
  c.medium_of_instruction = medium;
  c.course_contents = cc;
  c.computer_knowledge = ck;
  c.region = "Islamabad";
  c.school_environment = "urban";
  c.economic_background = econ;
  return c;
}

inline Question question(Section section, int n, int correct = 0) {
  Question q;
  q.section = section;
  q.prompt = std::string(enum_name(section)) + " question " + std::to_string(n);
  q.options = {"alpha " + std::to_string(n), "beta " + std::to_string(n),
               "gamma " + std::to_string(n), "delta " + std::to_string(n)};
  q.correct_option = correct;
  return q;
}

// Adds per_section questions to every section, approving them when asked.
// Returns question_id -> correct_option.
template <class Bank>
std::map<std::string, int> seed_bank(Bank& bank, int per_section = kQuestionsPerSection,
                                     bool approve = true) {
  std::map<std::string, int> key;
  for (Section s : kSectionOrder) {
    for (int i = 0; i < per_section; ++i) {
      const int correct = (i + static_cast<int>(section_index(s))) % kOptionsPerQuestion;
      auto added = bank.add_question(question(s, i, correct));
      std::string id;
      if constexpr (std::is_same_v<decltype(added), std::string>) {
        id = added;
      } else {
        id = added.question_id;
      }
      if (approve) bank.approve_question(id);
      key[id] = correct;
    }
  }
  return key;
}

// Answers for one section with the first `correct` positions right.
inline std::vector<int> answers_with(const std::vector<std::string>& served,
                                     const std::map<std::string, int>& key, int correct) {
  std::vector<int> out;
  for (std::size_t i = 0; i < served.size(); ++i) {
    const int right = key.at(served[i]);
    out.push_back(static_cast<int>(i) < correct ? right : (right + 1) % kOptionsPerQuestion);
  }
  return out;
}

}  // namespace fixtures
