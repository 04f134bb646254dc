#include "elearn/simulation.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <set>

#include "elearn/random.hpp"
#include "elearn/service.hpp"

namespace elearn {

namespace {

constexpr double kSumTolerance = 1e-9;

template <class E>
std::vector<double> uniform() {
  return std::vector<double>(variant_count<E>(), 1.0 / static_cast<double>(variant_count<E>()));
}

void check(const std::vector<double>& p, std::size_t size, const char* factor) {
  if (p.size() != size) fail(ErrorCode::BadDistribution, factor);
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) fail(ErrorCode::BadDistribution, factor);
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    fail(ErrorCode::BadDistribution, factor,
         std::string("probabilities for ") + factor + " sum to " + std::to_string(sum));
  }
}

template <class E>
std::vector<double> parse_factor(const Json& j, const char* factor) {
  if (!j.contains(factor)) return uniform<E>();
  const Json& weights = j.at(factor);
  if (!weights.is_object()) fail(ErrorCode::BadDistribution, factor);
  std::vector<double> p(variant_count<E>(), 0.0);
  for (const auto& [name, value] : weights.items()) {
    auto variant = parse_enum<E>(name);
    if (!variant || !value.is_number()) fail(ErrorCode::BadDistribution, factor);
    p[static_cast<std::size_t>(*variant)] = value.template get<double>();
  }
  return p;
}

template <class E>
E draw(const std::vector<double>& p, SeededRng& rng) {
  const double u = rng.unit();
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<E>(i);
  }
  // Rounding can leave acc a hair under 1; fall back to the last positive mass.
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] > 0.0) return static_cast<E>(i);
  }
  return static_cast<E>(0);
}

int computer_steps(ComputerKnowledge k) {
  switch (k) {
    case ComputerKnowledge::None: return 0;
    case ComputerKnowledge::Basic: return 1;
    case ComputerKnowledge::Proficient: return 2;
  }
  return 0;
}

std::string padded(const char* prefix, long long n) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%05lld", prefix, n);
  return buf;
}

}  // namespace

FactorDistributions uniform_distributions() {
  return {uniform<Gender>(), uniform<SchoolType>(), uniform<Medium>(),
          uniform<CourseContents>(), uniform<ComputerKnowledge>(),
          uniform<EconomicBackground>()};
}

void validate(const FactorDistributions& d) {
  check(d.gender, variant_count<Gender>(), "gender");
  check(d.school_type, variant_count<SchoolType>(), "school_type");
  check(d.medium_of_instruction, variant_count<Medium>(), "medium_of_instruction");
  check(d.course_contents, variant_count<CourseContents>(), "course_contents");
  check(d.computer_knowledge, variant_count<ComputerKnowledge>(), "computer_knowledge");
  check(d.economic_background, variant_count<EconomicBackground>(), "economic_background");
}

FactorDistributions distributions_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::BadDistribution, "distributions");
  static const std::set<std::string> kFactors{"gender",          "school_type",
                                              "medium_of_instruction", "course_contents",
                                              "computer_knowledge",    "economic_background"};
  for (const auto& [key, _] : j.items()) {
    if (kFactors.count(key) == 0) fail(ErrorCode::BadDistribution, key);
  }
  FactorDistributions d{parse_factor<Gender>(j, "gender"),
                        parse_factor<SchoolType>(j, "school_type"),
                        parse_factor<Medium>(j, "medium_of_instruction"),
                        parse_factor<CourseContents>(j, "course_contents"),
                        parse_factor<ComputerKnowledge>(j, "computer_knowledge"),
                        parse_factor<EconomicBackground>(j, "economic_background")};
  validate(d);
  return d;
}

double ScoreModel::probability(const CulturalProfile& c) const {
  double p = base;
  if (c.medium_of_instruction == Medium::English) p += english_medium;
  if (c.computer_knowledge) p += per_computer_level * computer_steps(*c.computer_knowledge);
  if (c.course_contents == CourseContents::International) p += international_contents;
  return std::clamp(p, 0.0, 1.0);
}

ScoreModel score_model_from_json(const Json& j, ScoreModel m) {
  if (!j.is_object()) fail(ErrorCode::ValidationError, "score_model");
  auto read = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) fail(ErrorCode::ValidationError, std::string("score_model.") + key);
    out = j.at(key).get<double>();
  };
  read("base", m.base);
  read("english_medium", m.english_medium);
  read("per_computer_level", m.per_computer_level);
  read("international_contents", m.international_contents);
  return m;
}

void simulation_config_from_json(const Json& j, FactorDistributions& distributions,
                                 SimulationOptions& options) {
  if (!j.is_object()) fail(ErrorCode::BadDistribution, "config");
  Json factors = j;
  if (j.contains("score_model")) {
    options.model = score_model_from_json(j.at("score_model"), options.model);
    factors.erase("score_model");
  }
  if (j.contains("questions_per_section")) {
    const auto& q = j.at("questions_per_section");
    if (!q.is_number_integer() || q.get<int>() < kQuestionsPerSection) {
      fail(ErrorCode::ValidationError, "questions_per_section");
    }
    options.questions_per_section = q.get<int>();
    factors.erase("questions_per_section");
  }
  distributions = distributions_from_json(factors);
}

std::string InProcessBackend::add_question(const Question& q) {
  return platform_.add_question(q).question_id;
}

void InProcessBackend::approve_question(const std::string& question_id) {
  platform_.approve_question(question_id);
}

std::map<std::string, int> InProcessBackend::answer_key() {
  std::map<std::string, int> key;
  for (const auto& q : platform_.list_questions()) key[q.question_id] = q.correct_option;
  return key;
}

std::string InProcessBackend::register_student(const PersonalProfile& p,
                                               const CulturalProfile& c) {
  return platform_.register_student(p, c).student_id;
}

std::string InProcessBackend::start_test(const std::string& student_id, std::uint64_t seed) {
  return platform_.start_test(student_id, seed).session_id;
}

SessionView InProcessBackend::current_section(const std::string& session_id) {
  return platform_.current_section(session_id);
}

int InProcessBackend::submit_section(const std::string& session_id, Section section,
                                     const std::vector<int>& answers) {
  return platform_.submit_section(session_id, section, answers);
}

TestScore InProcessBackend::score_test(const std::string& session_id) {
  return platform_.score_test(session_id);
}

StudentPlacement InProcessBackend::place_student(const std::string& student_id) {
  return platform_.place_student(student_id);
}

CohortStats InProcessBackend::cohort_stats() { return platform_.cohort_stats(); }

void to_json(Json& j, const SimulationSummary& s) {
  Json students = Json::array();
  for (const auto& st : s.students) {
    students.push_back({{"student_id", st.student_id},
                        {"gender", enum_name(st.gender)},
                        {"cultural", st.cultural},
                        {"score", st.score},
                        {"placement", st.placement}});
  }
  j = Json{{"n", s.n}, {"seed", s.seed}, {"stats", s.stats}, {"students", std::move(students)}};
}

SimulationSummary simulate_cohort(CohortBackend& backend, int n, std::uint64_t seed,
                                  const FactorDistributions& distributions,
                                  const SimulationOptions& options) {
  if (n < 1) fail(ErrorCode::ValidationError, "n");
  validate(distributions);
  if (options.questions_per_section < kQuestionsPerSection) {
    fail(ErrorCode::ValidationError, "questions_per_section");
  }

  for (Section sec : kSectionOrder) {
    for (int i = 0; i < options.questions_per_section; ++i) {
      Question q;
      q.section = sec;
      q.prompt = std::string(enum_name(sec)) + " item " + std::to_string(i + 1);
      for (int o = 0; o < kOptionsPerQuestion; ++o) {
        q.options.push_back(q.prompt + " / option " + std::string(1, static_cast<char>('A' + o)));
      }
      q.correct_option = (i * 3 + static_cast<int>(section_index(sec))) % kOptionsPerQuestion;
      backend.approve_question(backend.add_question(q));
    }
  }
  const auto key = backend.answer_key();

  SeededRng rng(seed);
  SimulationSummary summary;
  summary.n = n;
  summary.seed = seed;
  summary.students.reserve(static_cast<std::size_t>(n));

  for (int i = 0; i < n; ++i) {
    SimulatedStudent st;
    PersonalProfile personal;
    personal.student_id = padded("sim-", i + 1);
    personal.full_name = "Simulated Student " + std::to_string(i + 1);
    personal.gender = draw<Gender>(distributions.gender, rng);
    personal.date_of_birth = std::chrono::year_month_day{
        std::chrono::year{1995 + static_cast<int>(rng.below(10))},
        std::chrono::month{1 + static_cast<unsigned>(rng.below(12))},
        std::chrono::day{1 + static_cast<unsigned>(rng.below(28))}};
    personal.contact_email = personal.student_id + "@example.org";

    CulturalProfile cultural;
    cultural.student_id = personal.student_id;
    cultural.school_type = draw<SchoolType>(distributions.school_type, rng);
    cultural.medium_of_instruction = draw<Medium>(distributions.medium_of_instruction, rng);
    cultural.course_contents = draw<CourseContents>(distributions.course_contents, rng);
    cultural.computer_knowledge = draw<ComputerKnowledge>(distributions.computer_knowledge, rng);
    cultural.economic_background =
        draw<EconomicBackground>(distributions.economic_background, rng);
    cultural.region = "region-" + std::to_string(rng.below(5));
    cultural.school_environment = rng.bernoulli(0.5) ? "urban" : "rural";

    st.student_id = backend.register_student(personal, cultural);
    st.gender = personal.gender;
    st.cultural = cultural;

    const double p = options.model.probability(cultural);
    const std::string session_id = backend.start_test(st.student_id, rng.next());
    for (Section sec : kSectionOrder) {
      SessionView view = backend.current_section(session_id);
      std::vector<int> answers;
      answers.reserve(view.questions.size());
      for (const auto& q : view.questions) {
        auto known = key.find(q.question_id);
        const int correct = known == key.end() ? 0 : known->second;
        const bool right = rng.bernoulli(p);
        const int wrong_shift = 1 + static_cast<int>(rng.below(kOptionsPerQuestion - 1));
        answers.push_back(right ? correct : (correct + wrong_shift) % kOptionsPerQuestion);
      }
      backend.submit_section(session_id, sec, answers);
    }
    st.score = backend.score_test(session_id);
    st.placement = backend.place_student(st.student_id);
    summary.students.push_back(std::move(st));
  }

  summary.stats = backend.cohort_stats();
  return summary;
}

}  // namespace elearn
