// One line per acceptance criterion; exits non-zero if any fails.

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "elearn/analytics.hpp"
#include "elearn/casebase.hpp"
#include "elearn/http_api.hpp"
#include "elearn/placement.hpp"
#include "elearn/simulation.hpp"
#include "oracle/level_rules.hpp"
#include "support/flow.hpp"

using namespace elearn;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock_ = std::chrono::steady_clock;

double seconds_since(Clock_::time_point start) {
  return std::chrono::duration<double>(Clock_::now() - start).count();
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream out;
  out.precision(digits);
  out << std::fixed << v;
  return out.str();
}

// ---------------------------------------------------------------------------
// Placement rules

Outcome decision_table_oracle() {
  auto start = Clock_::now();
  int compared = 0, mismatches = 0;
  for (int ra = 3; ra <= 7; ++ra) {
    for (int pct = 0; pct <= 100; ++pct) {
      auto expected = oracle::published_level(ra, pct);
      if (!expected) continue;
      ++compared;
      if (assign_level(ra, pct).level != *expected) ++mismatches;
    }
  }
  const double t = seconds_since(start);
  return {mismatches == 0 && compared > 0 && t < 1.0,
          std::to_string(compared) + " matched cells, " + std::to_string(mismatches) +
              " mismatches, " + fmt(t) + " s"};
}

Outcome gap_census() {
  auto start = Clock_::now();
  // Integer grid, then a hundredth-step grid to pin the interval edges.
  std::set<std::pair<int, int>> unmatched;
  for (int ra = 3; ra <= 7; ++ra) {
    for (int pct = 0; pct <= 100; ++pct) {
      if (!oracle::published_level(ra, pct)) unmatched.insert({ra, pct});
    }
  }
  std::set<std::pair<int, int>> expected;
  for (int pct = 75; pct < 80; ++pct) expected.insert({5, pct});
  for (int pct = 50; pct < 60; ++pct) expected.insert({6, pct});

  int fine_violations = 0, gapfill_violations = 0;
  for (int ra = 3; ra <= 7; ++ra) {
    for (int h = 0; h <= 10000; ++h) {
      const double pct = h / 100.0;
      const bool in_interval =
          (ra == 5 && pct >= 75 && pct < 80) || (ra == 6 && pct >= 50 && pct < 60);
      const bool no_branch = !oracle::published_level(ra, pct).has_value();
      if (no_branch != in_interval) ++fine_violations;
      const bool gapfill = assign_level(ra, pct).rule_fired == RuleFired::GapFill;
      if (gapfill != in_interval) ++gapfill_violations;
    }
  }
  const double t = seconds_since(start);
  const bool ok = unmatched == expected && fine_violations == 0 && gapfill_violations == 0 &&
                  t < 1.0;
  return {ok, std::to_string(unmatched.size()) + " integer gap cells (expected " +
                  std::to_string(expected.size()) + "), " + std::to_string(fine_violations) +
                  " fine-grid and " + std::to_string(gapfill_violations) +
                  " GapFill mismatches, " + fmt(t) + " s"};
}

std::vector<double> fuzzed_percentages(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(0.0, 100.0);
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(dist(gen));
  // every threshold and its neighbours
  for (double edge : {0.0, 40.0, 50.0, 60.0, 70.0, 75.0, 80.0, 85.0, 90.0, 95.0, 100.0}) {
    out.push_back(edge);
    if (edge > 0) out.push_back(std::nextafter(edge, 0.0));
    if (edge < 100) out.push_back(std::nextafter(edge, 100.0));
  }
  return out;
}

Outcome monotonicity() {
  auto values = fuzzed_percentages(10'000, 2024);
  std::sort(values.begin(), values.end());
  int violations = 0;
  for (int ra = 3; ra <= 7; ++ra) {
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (assign_level(ra, values[i]).level < assign_level(ra, values[i - 1]).level) ++violations;
    }
  }
  for (double pct : values) {
    for (int ra = 4; ra <= 7; ++ra) {
      if (assign_level(ra, pct).level < assign_level(ra - 1, pct).level) ++violations;
    }
  }
  return {violations == 0, std::to_string(values.size()) + " percentages x 5 ra, " +
                               std::to_string(violations) + " violations"};
}

Outcome not_eligible_iff_below_40() {
  int checked = 0, violations = 0;
  auto check = [&](int ra, double pct) {
    ++checked;
    const bool ne = assign_level(ra, pct).level == Level::NotEligible;
    if (ne != (pct < 40.0)) ++violations;
  };
  for (int ra = 3; ra <= 7; ++ra) {
    for (int pct = 0; pct <= 100; ++pct) check(ra, pct);
    for (double pct : fuzzed_percentages(10'000, 40 + ra)) check(ra, pct);
  }
  return {violations == 0,
          std::to_string(checked) + " cells, " + std::to_string(violations) + " violations"};
}

Outcome rubric() {
  int combos = 0, violations = 0;
  const auto score = [](Medium m, ComputerKnowledge k, CourseContents c) {
    return compute_reference_value(fixtures::cultural("r", m, k, c)).ra;
  };
  const auto media = all_variants<Medium>();
  const auto knowledge = all_variants<ComputerKnowledge>();
  const auto contents = all_variants<CourseContents>();
  for (std::size_t mi = 0; mi < media.size(); ++mi) {
    for (std::size_t ki = 0; ki < knowledge.size(); ++ki) {
      for (std::size_t ci = 0; ci < contents.size(); ++ci) {
        ++combos;
        const int ra = score(media[mi], knowledge[ki], contents[ci]);
        if (ra < 3 || ra > 7) ++violations;
        // Raising any one factor by a step never lowers ra.
        if (mi + 1 < media.size() && score(media[mi + 1], knowledge[ki], contents[ci]) < ra)
          ++violations;
        if (ki + 1 < knowledge.size() && score(media[mi], knowledge[ki + 1], contents[ci]) < ra)
          ++violations;
        if (ci + 1 < contents.size() && score(media[mi], knowledge[ki], contents[ci + 1]) < ra)
          ++violations;
      }
    }
  }
  return {combos == 12 && violations == 0,
          std::to_string(combos) + " combinations, " + std::to_string(violations) + " violations"};
}

// ---------------------------------------------------------------------------
// Assessment

struct Bench {
  RepositorySet repos;
  StudentRegistry students{repos};
  QuestionBank bank{repos};
  TestAdministrator tests{repos, bank, students};
  std::map<std::string, int> key;
  std::set<std::string> drafts;

  explicit Bench(int per_section) {
    key = fixtures::seed_bank(bank, per_section);
    // unapproved questions that must never be served
    for (Section s : kSectionOrder) {
      drafts.insert(bank.add_question(fixtures::question(s, 900 + section_index(s))));
    }
  }
};

Outcome eq1_scoring() {
  Bench bench(14);
  std::mt19937_64 gen(1);
  std::uniform_int_distribution<int> option(0, kOptionsPerQuestion - 1);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::string id = "e" + std::to_string(i);
    bench.students.register_student(fixtures::personal(id), fixtures::cultural(id));
    auto session = bench.tests.start_test(id, gen());
    int expected_total = 0;
    std::array<int, 4> expected{};
    for (Section s : kSectionOrder) {
      const auto& served = session.served_questions[section_index(s)];
      std::vector<int> answers;
      for (const auto& q : served) {
        answers.push_back(option(gen));
        if (answers.back() == bench.key.at(q)) ++expected[section_index(s)];
      }
      bench.tests.submit_section(session.session_id, s, answers);
      expected_total += expected[section_index(s)];
    }
    auto score = bench.tests.score_test(session.session_id);
    const int sum = score.s_english + score.s_math_reasoning + score.s_computer + score.s_iq;
    if (score.total != sum || score.total != expected_total) ++violations;
    if (score.s_english != expected[0] || score.s_math_reasoning != expected[1] ||
        score.s_computer != expected[2] || score.s_iq != expected[3])
      ++violations;
    if (score.percentage != 2.5 * score.total) ++violations;
  }
  return {violations == 0, "1000 sessions, " + std::to_string(violations) + " violations"};
}

Outcome session_state_machine() {
  Bench bench(13);
  std::mt19937_64 gen(99);
  int accepted_out_of_order = 0, serving_violations = 0, attempts = 0, accepted = 0;
  auto approved_in = [&](Section s) {
    std::set<std::string> ids;
    for (const auto& q : bench.bank.approved_pool(s)) ids.insert(q.question_id);
    return ids;
  };
  std::array<std::set<std::string>, 4> approved;
  for (Section s : kSectionOrder) approved[section_index(s)] = approved_in(s);

  for (int i = 0; i < 300; ++i) {
    const std::string id = "m" + std::to_string(i);
    bench.students.register_student(fixtures::personal(id), fixtures::cultural(id));
    auto session = bench.tests.start_test(id, gen());
    for (Section s : kSectionOrder) {
      const auto& served = session.served_questions[section_index(s)];
      std::set<std::string> distinct(served.begin(), served.end());
      if (served.size() != 10 || distinct.size() != 10) ++serving_violations;
      for (const auto& q : served) {
        if (!approved[section_index(s)].count(q) || bench.drafts.count(q)) ++serving_violations;
      }
    }
    // Random submission attempts until the session is complete.
    while (bench.tests.session(session.session_id).state == SessionState::InProgress) {
      const auto before = bench.tests.session(session.session_id);
      const Section pick = kSectionOrder[gen() % 4];
      ++attempts;
      try {
        bench.tests.submit_section(session.session_id, pick, std::vector<int>(10, 0));
        ++accepted;
        if (pick != before.current_section || before.answers[section_index(pick)].has_value()) {
          ++accepted_out_of_order;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::OutOfOrder && e.code() != ErrorCode::AlreadyAnswered) {
          ++accepted_out_of_order;
        }
      }
    }
    // Nothing is accepted once all four are in.
    for (Section s : kSectionOrder) {
      ++attempts;
      try {
        bench.tests.submit_section(session.session_id, s, std::vector<int>(10, 0));
        ++accepted_out_of_order;
      } catch (const Error&) {
      }
    }
    bench.tests.score_test(session.session_id);
  }
  return {accepted_out_of_order == 0 && serving_violations == 0 && accepted == 1200,
          std::to_string(attempts) + " attempts, " + std::to_string(accepted) + " accepted, " +
              std::to_string(accepted_out_of_order) + " out-of-order accepted, " +
              std::to_string(serving_violations) + " serving violations"};
}

// ---------------------------------------------------------------------------
// Case base

CulturalProfile random_profile(std::mt19937_64& gen, const std::string& id) {
  auto pick = [&](auto variants) { return variants[gen() % variants.size()]; };
  return fixtures::cultural(id, pick(all_variants<Medium>()), pick(all_variants<ComputerKnowledge>()),
                            pick(all_variants<CourseContents>()), pick(all_variants<SchoolType>()),
                            pick(all_variants<EconomicBackground>()));
}

// Passes `n` random students and returns the ranked results for `queries`.
std::string ranked_cases(int n, int queries, std::uint64_t seed, int& order_violations) {
  auto now = std::make_shared<std::int64_t>(10'000);
  fixtures::Campus campus({}, [now] { return (*now)++; });
  std::mt19937_64 gen(seed);
  for (int i = 0; i < n; ++i) {
    const std::string id = "c" + std::to_string(i);
    campus.place(id, random_profile(gen, id), {10, 10, 10, 10});
    campus.platform.enroll(id);
    campus.platform.record_evaluation(id, EvaluationKind::Final, 90);
  }
  Json all = Json::array();
  for (int q = 0; q < queries; ++q) {
    const std::string id = "c" + std::to_string(gen() % n);
    auto results = campus.platform.similar_cases(id, 25);
    for (std::size_t i = 1; i < results.size(); ++i) {
      const auto& a = results[i - 1];
      const auto& b = results[i];
      if (b.similarity > a.similarity) ++order_violations;
      if (b.similarity == a.similarity && b.match.stored_at < a.match.stored_at) {
        ++order_violations;
      }
    }
    for (const auto& r : results) all.push_back({r.match.case_id, r.similarity});
  }
  return all.dump();
}

Outcome cbr_metric() {
  std::mt19937_64 gen(31);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    auto p = random_profile(gen, "p");
    auto q = random_profile(gen, "q");
    const double pq = similarity(p, q);
    if (similarity(p, p) != 1.0 || similarity(q, q) != 1.0) ++violations;
    if (pq != similarity(q, p)) ++violations;
    if (pq < 0.0 || pq > 1.0) ++violations;
  }
  int order_violations = 0;
  const auto first = ranked_cases(120, 40, 5, order_violations);
  const auto second = ranked_cases(120, 40, 5, order_violations);
  const bool identical = first == second;
  return {violations == 0 && order_violations == 0 && identical,
          "1000 pairs, " + std::to_string(violations) + " metric violations, " +
              std::to_string(order_violations) + " ordering violations, reruns " +
              (identical ? "identical" : "differ")};
}

// ---------------------------------------------------------------------------
// Service

struct LiveServer {
  fixtures::TempDir dir;
  Platform platform;
  ApiServer api;
  int port;

  LiveServer() : platform(config_for(dir)), api(platform) {
    port = api.bind("127.0.0.1", 0);
    api.start();
  }

  static ServiceConfig config_for(const fixtures::TempDir& d) {
    ServiceConfig c;
    c.data_dir = d / "data";
    return c;
  }
};

Outcome end_to_end_http() {
  std::vector<std::string> bodies;
  double slowest = 0;
  int marginal_violations = 0;
  std::vector<std::string> consistency;
  for (int run = 0; run < 2; ++run) {
    LiveServer server;
    auto start = Clock_::now();
    {
      HttpBackend backend("127.0.0.1", server.port);
      simulate_cohort(backend, 200, 7, uniform_distributions());
      bodies.push_back(backend.cohort_stats_body());
    }
    slowest = std::max(slowest, seconds_since(start));

    auto stats = Json::parse(bodies.back()).get<CohortStats>();
    if (stats.cohort_size != 200) ++marginal_violations;
    for (const auto& [dim, rows] : stats.cross_tab) {
      for (const auto& [level, lc] : stats.level_distribution) {
        std::size_t column = 0;
        for (const auto& [_, levels] : rows) column += levels.at(level);
        if (column != lc.count) ++marginal_violations;
      }
    }
    for (auto& v : server.platform.consistency_violations()) consistency.push_back(v);
    server.api.stop();
  }
  const bool identical = bodies[0] == bodies[1];
  return {identical && marginal_violations == 0 && consistency.empty() && slowest < 30.0,
          std::string("stats JSON ") + (identical ? "byte-identical" : "differs") + " (" +
              std::to_string(bodies[0].size()) + " bytes), " +
              std::to_string(marginal_violations) + " marginal violations, " +
              std::to_string(consistency.size()) + " consistency violations, slowest run " +
              fmt(slowest, 2) + " s"};
}

Outcome persistence() {
  fixtures::TempDir dir;
  ServiceConfig config;
  config.data_dir = dir / "source";
  std::map<std::string, std::vector<Json>> before;
  int short_stores = 0;
  {
    fixtures::Campus campus(config);
    auto& p = campus.platform;
    std::mt19937_64 gen(8);
    for (int i = 0; i < 30; ++i) {
      const std::string id = "r" + std::to_string(i);
      campus.place(id, random_profile(gen, id), {10, 9, 8, 7});
      p.enroll(id);
      p.record_evaluation(id, EvaluationKind::Quiz, 70);
      p.record_evaluation(id, EvaluationKind::Final, i % 3 == 0 ? 30 : 80);
      if (i % 3 != 0) p.submit_feedback(id, 1 + i % 5, "comment " + std::to_string(i));
    }
    for (StoreId s : kAllStores) {
      before[std::string(store_name(s))] = p.repositories().store(s).scan();
      if (before[std::string(store_name(s))].empty()) ++short_stores;
    }
    p.export_snapshot(dir / "snapshot.txt");
  }
  Platform imported;
  imported.import_snapshot(dir / "snapshot.txt");
  int round_trip_diffs = 0;
  for (StoreId s : kAllStores) {
    if (imported.repositories().store(s).scan() != before[std::string(store_name(s))]) {
      ++round_trip_diffs;
    }
  }

  // 1000 acknowledged writes, then a restart.
  const auto store_dir = dir / "durable";
  std::map<std::pair<StoreId, std::string>, Json> written;
  {
    RepositorySet repos(store_dir);
    for (int i = 0; i < 1000; ++i) {
      const StoreId id = kAllStores[i % kAllStores.size()];
      const std::string key = "k" + std::to_string(i);
      Json record = {{"i", i}, {"text", "record " + std::to_string(i)}};
      repos.store(id).put(key, record);
      written[{id, key}] = record;
    }
  }
  RepositorySet reopened(store_dir);
  int lost = 0;
  for (const auto& [where, record] : written) {
    auto found = reopened.store(where.first).find(where.second);
    if (!found || *found != record) ++lost;
  }
  return {short_stores == 0 && round_trip_diffs == 0 && lost == 0,
          "9 stores round-tripped with " + std::to_string(round_trip_diffs) + " differences (" +
              std::to_string(short_stores) + " empty), " + std::to_string(written.size() - lost) +
              "/1000 writes visible after restart"};
}

Outcome directional_pattern() {
  Platform platform;
  InProcessBackend backend(platform);
  auto summary = simulate_cohort(backend, 500, 7, uniform_distributions());
  const auto& means = summary.stats.mean_percentage.at("medium_of_instruction");
  const auto& rows = summary.stats.cross_tab.at("medium_of_instruction");
  auto group = [&](const char* v) {
    std::size_t n = 0;
    for (const auto& [_, count] : rows.at(v)) n += count;
    return n;
  };
  const double english = means.at("English");
  const double local = means.at("LocalLanguage");
  return {english > local, "n=500, English-medium mean " + fmt(english, 2) + "% (" +
                               std::to_string(group("English")) + "), local-language mean " +
                               fmt(local, 2) + "% (" + std::to_string(group("LocalLanguage")) +
                               ")"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"decision table agrees with the transcribed pseudo-code", decision_table_oracle},
      {"gap census finds exactly the two unmatched bands", gap_census},
      {"level is monotone in ra and percentage", monotonicity},
      {"NotEligible iff percentage below 40", not_eligible_iff_below_40},
      {"total is the section sum and percentage is 2.5 x total", eq1_scoring},
      {"sessions accept only in-order submissions of 10 approved questions",
       session_state_machine},
      {"reference value rubric stays in [3,7] and is monotone", rubric},
      {"case similarity is reflexive, symmetric and deterministically ordered", cbr_metric},
      {"seeded HTTP simulation is reproducible with consistent marginals", end_to_end_http},
      {"snapshot round-trip and restart durability", persistence},
      {"English-medium cohort outscores local-language cohort", directional_pattern},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome outcome;
    const auto start = Clock_::now();
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << name << " -- " << outcome.detail
              << " [" << fmt(seconds_since(start), 2) << " s]" << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
