#include <doctest.h>

#include <fstream>
#include <thread>

#include "elearn/service.hpp"
#include "elearn/simulation.hpp"
#include "support/flow.hpp"

using namespace elearn;

namespace {

std::string bad_config(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadConfig);
    return e.detail();
  }
  return "<valid>";
}

}  // namespace

TEST_CASE("config validation names the field") {
  ServiceConfig c;
  CHECK_NOTHROW(validate(c));
  c.pass_threshold = -1;
  CHECK(bad_config([&] { validate(c); }) == "pass_threshold");
  c = {};
  c.pass_threshold = 101;
  CHECK(bad_config([&] { validate(c); }) == "pass_threshold");
  c = {};
  c.port = 70000;
  CHECK(bad_config([&] { validate(c); }) == "port");
  c = {};
  c.default_k = 0;
  CHECK(bad_config([&] { validate(c); }) == "default_k");
  c = {};
  c.pass_threshold = -5;
  CHECK(bad_config([&] { Platform p(c); }) == "pass_threshold");
}

TEST_CASE("config from json") {
  auto c = config_from_json(Json::parse(
      R"({"port": 9000, "data_dir": "/tmp/x", "pass_threshold": 60, "default_k": 3,
          "seed_policy": "random"})"));
  CHECK(c.port == 9000);
  CHECK(c.data_dir == std::filesystem::path("/tmp/x"));
  CHECK(c.pass_threshold == 60);
  CHECK(c.default_k == 3);
  CHECK(c.seed_policy == SeedPolicy::Random);
  CHECK(c.host == "127.0.0.1");

  CHECK(bad_config([] { config_from_json(Json::parse(R"({"colour": "red"})")); }) == "colour");
  CHECK(bad_config([] { config_from_json(Json::parse(R"({"port": "80"})")); }) == "port");
  CHECK(bad_config([] { config_from_json(Json::parse(R"({"pass_threshold": -3})")); }) ==
        "pass_threshold");
  CHECK(bad_config([] { config_from_json(Json::parse(R"({"seed_policy": "lucky"})")); }) ==
        "seed_policy");

  fixtures::TempDir dir;
  std::ofstream(dir / "bad.json") << "{ not json";
  CHECK(bad_config([&] { load_config(dir / "bad.json"); }) == "config");
  std::ofstream(dir / "good.json") << R"({"default_k": 7})";
  CHECK(load_config(dir / "good.json").default_k == 7);
}

TEST_CASE("derived seeds make unseeded sessions reproducible") {
  fixtures::Campus a, b;
  for (auto* campus : {&a, &b}) {
    campus->platform.register_student(fixtures::personal("s1"), fixtures::cultural("s1"));
  }
  CHECK(a.platform.start_test("s1").served_questions ==
        b.platform.start_test("s1").served_questions);
}

TEST_CASE("full flow leaves the stores consistent") {
  fixtures::Campus campus;
  auto& p = campus.platform;
  auto reg = p.register_student(fixtures::personal("s1"), fixtures::cultural("s1"));
  CHECK(reg.reference.ra == 5);
  campus.sit("s1", {9, 8, 8, 7});
  p.place_student("s1");
  p.enroll("s1");
  p.record_evaluation("s1", EvaluationKind::Final, 77);
  p.submit_feedback("s1", 5, "ok");
  CHECK(p.consistency_violations().empty());

  // Break a reference by hand and it is reported.
  p.repositories().scores().erase("s1");
  auto problems = p.consistency_violations();
  REQUIRE_FALSE(problems.empty());
  CHECK(problems[0].find("s1") != std::string::npos);
}

TEST_CASE("similar_cases uses default_k") {
  ServiceConfig config;
  config.default_k = 2;
  fixtures::Campus campus(config);
  auto& p = campus.platform;
  for (const char* id : {"a", "b", "c"}) {
    campus.place(id, fixtures::ra5(), {10, 10, 10, 10});
    p.enroll(id);
    p.record_evaluation(id, EvaluationKind::Final, 90);
  }
  CHECK(p.similar_cases("a").size() == 2);
  CHECK(p.similar_cases("a", 3).size() == 3);
  CHECK_THROWS_AS(p.similar_cases("ghost"), Error);
}

TEST_CASE("data survives restart and snapshot import rebuilds counters") {
  fixtures::TempDir dir;
  ServiceConfig config;
  config.data_dir = dir / "data";
  std::string first_session;
  {
    fixtures::Campus campus(config);
    campus.place("s1", fixtures::ra5(), {7, 7, 7, 7});
    campus.platform.enroll("s1");
    first_session = campus.platform.placement("s1")->session_id;
    campus.platform.export_snapshot(dir / "snap.txt");
  }
  {
    Platform reopened(config);
    CHECK(reopened.placement("s1")->session_id == first_session);
    CHECK(reopened.enrollment("s1")->status == EnrollmentStatus::Active);
    CHECK(reopened.list_questions().size() == 40);
    CHECK(reopened.consistency_violations().empty());
  }
  Platform fresh;
  fresh.import_snapshot(dir / "snap.txt");
  CHECK(fresh.get_student("s1").cultural.student_id == "s1");
  // new ids continue after the imported ones
  auto added = fresh.add_question(fixtures::question(Section::English, 99));
  CHECK(added.question_id == "q-000041");
  fresh.register_student(fixtures::personal("s2"), fixtures::cultural("s2"));
  auto session = fresh.start_test("s2", 1);
  CHECK(session.session_id != first_session);
  try {
    fresh.import_snapshot(dir / "snap.txt");
    FAIL("expected NonEmptyTarget");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonEmptyTarget);
  }
}

TEST_CASE("concurrent students do not interfere") {
  fixtures::Campus campus;
  auto& p = campus.platform;
  constexpr int kThreads = 6;
  constexpr int kPerThread = 15;
  std::vector<std::thread> threads;
  std::atomic<int> errors{0};
  for (int t = 0; t < kThreads; ++t) {
    threads.emplace_back([&, t] {
      try {
        for (int i = 0; i < kPerThread; ++i) {
          const std::string id = "t" + std::to_string(t) + "-" + std::to_string(i);
          auto c = fixtures::ra5(id);
          p.register_student(fixtures::personal(id), c);
          auto session = p.start_test(id);
          for (Section s : kSectionOrder) {
            p.submit_section(session.session_id, s,
                             fixtures::answers_with(session.served_questions[section_index(s)],
                                                    campus.key, 6 + t % 5));
            (void)p.cohort_stats();
          }
          p.score_test(session.session_id);
          p.place_student(id);
        }
      } catch (const std::exception&) {
        ++errors;
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(errors == 0);
  CHECK(p.cohort_stats().cohort_size == kThreads * kPerThread);
  CHECK(p.consistency_violations().empty());
}

TEST_CASE("concurrent duplicate start_test opens one session") {
  fixtures::Campus campus;
  auto& p = campus.platform;
  p.register_student(fixtures::personal("s1"), fixtures::cultural("s1"));
  std::atomic<int> opened{0}, refused{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      try {
        p.start_test("s1");
        ++opened;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::SessionAlreadyOpen) ++refused;
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(opened == 1);
  CHECK(refused == 7);
}
