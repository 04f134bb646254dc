#include "elearn/http_api.hpp"

#include <httplib.h>

#include "elearn/json_fields.hpp"

namespace elearn {

namespace {

using httplib::Request;
using httplib::Response;

constexpr const char* kJson = "application/json";

void send(Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(Response& res, const Error& e) {
  send(res, http_status(e.code()),
       Json{{"error",
             {{"code", to_string(e.code())}, {"detail", e.detail()}, {"message", e.what()}}}});
}

template <class Handler>
auto guarded(Handler handler) {
  return [handler](const Request& req, Response& res) {
    try {
      handler(req, res);
    } catch (const Error& e) {
      send_error(res, e);
    } catch (const Json::exception& e) {
      send_error(res, Error(ErrorCode::BadRequest, "body", e.what()));
    } catch (const std::exception& e) {
      send(res, 500, Json{{"error", {{"code", "Internal"}, {"detail", ""}, {"message", e.what()}}}});
    }
  };
}

Json parse_body(const Request& req, bool allow_empty = false) {
  if (req.body.empty()) {
    if (allow_empty) return Json::object();
    fail(ErrorCode::BadRequest, "body", "request body required");
  }
  Json j = Json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail(ErrorCode::BadRequest, "body", "request body must be a JSON object");
  }
  return j;
}

bool flag(const Request& req, const char* name) {
  if (!req.has_param(name)) return false;
  auto v = req.get_param_value(name);
  return v == "true" || v == "1";
}

int int_param(const Request& req, const char* name) {
  const auto text = req.get_param_value(name);
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::ValidationError, name);
  }
  if (used != text.size()) fail(ErrorCode::ValidationError, name);
  return value;
}

// correct_option is an admin-only field and is left out unless asked for.
Json question_json(const Question& q, bool include_answers) {
  Json j = q;
  if (!include_answers) j.erase("correct_option");
  return j;
}

Json session_json(const TestSession& s, const SessionView& view) {
  Json j = view;
  j["student_id"] = s.student_id;
  j["seed"] = s.seed;
  Json served = Json::object();
  for (Section sec : kSectionOrder) {
    served[std::string(enum_name(sec))] = s.served_questions[section_index(sec)];
  }
  j["served_questions"] = std::move(served);
  return j;
}

Json placement_json(const StudentPlacement& p) {
  Json j = p;
  auto track = track_for(p.decision.level);
  j["track"] = track ? Json(std::string(enum_name(*track))) : Json(nullptr);
  return j;
}

}  // namespace

ApiServer::ApiServer(Platform& platform)
    : platform_(platform), server_(std::make_unique<httplib::Server>()) {
  // httplib's defaults include SO_REUSEPORT, which would let a second
  // server share a port that is already taken.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  server_->set_tcp_nodelay(true);
  // Idle keep-alive connections hold up stop() for this long.
  server_->set_keep_alive_timeout(1);
  install_routes();
}

ApiServer::~ApiServer() {
  if (thread_.joinable()) stop();
}

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    port_ = server_->bind_to_port(host, port) ? port : -1;
  }
  if (port_ < 0) {
    fail(ErrorCode::PortInUse, std::to_string(port),
         "cannot bind " + host + ":" + std::to_string(port));
  }
  return port_;
}

void ApiServer::listen() { server_->listen_after_bind(); }

void ApiServer::start() {
  thread_ = std::thread([this] { listen(); });
  server_->wait_until_ready();
}

void ApiServer::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
  platform_.flush();
}

void ApiServer::install_routes() {
  auto& svr = *server_;
  Platform& p = platform_;

  svr.Get("/api/health", guarded([](const Request&, Response& res) {
            send(res, 200, Json{{"status", "ok"}});
          }));

  // Students

  svr.Post("/api/students", guarded([&p](const Request& req, Response& res) {
             Json body = parse_body(req);
             auto personal = fields::require(body, "personal").get<PersonalProfile>();
             auto cultural = fields::require(body, "cultural").get<CulturalProfile>();
             auto reg = p.register_student(std::move(personal), std::move(cultural));
             send(res, 201, Json{{"student_id", reg.student_id}, {"reference_value", reg.reference}});
           }));

  svr.Get(R"(/api/students/([^/]+))", guarded([&p](const Request& req, Response& res) {
            auto record = p.get_student(req.matches[1]);
            send(res, 200, Json{{"personal", record.personal}, {"cultural", record.cultural}});
          }));

  svr.Post(R"(/api/students/([^/]+)/test-sessions)",
           guarded([&p](const Request& req, Response& res) {
             Json body = parse_body(req, true);
             std::optional<std::uint64_t> seed;
             if (fields::has(body, "seed")) {
               const auto& s = body.at("seed");
               if (!s.is_number_unsigned()) fail(ErrorCode::ValidationError, "seed");
               seed = s.get<std::uint64_t>();
             }
             auto session = p.start_test(req.matches[1], seed);
             send(res, 201, session_json(session, p.current_section(session.session_id)));
           }));

  svr.Get(R"(/api/test-sessions/([^/]+)/current-section)",
          guarded([&p](const Request& req, Response& res) {
            send(res, 200, p.current_section(req.matches[1]));
          }));

  svr.Post(R"(/api/test-sessions/([^/]+)/sections/([^/]+)/answers)",
           guarded([&p](const Request& req, Response& res) {
             const std::string session_id = req.matches[1];
             auto section = parse_enum<Section>(std::string(req.matches[2]));
             if (!section) fail(ErrorCode::ValidationError, "section");
             Json body = parse_body(req);
             const auto& raw = fields::require(body, "answers");
             if (!raw.is_array()) fail(ErrorCode::MalformedAnswers, "answers");
             std::vector<int> answers;
             for (const auto& a : raw) {
               if (!a.is_number_integer()) fail(ErrorCode::MalformedAnswers, "answers");
               answers.push_back(a.get<int>());
             }
             int score = p.submit_section(session_id, *section, answers);
             send(res, 200, Json{{"section", enum_name(*section)},
                                 {"section_score", score},
                                 {"next", p.current_section(session_id)}});
           }));

  svr.Post(R"(/api/test-sessions/([^/]+)/score)", guarded([&p](const Request& req, Response& res) {
             send(res, 200, p.score_test(req.matches[1]));
           }));

  svr.Post(R"(/api/students/([^/]+)/placement)", guarded([&p](const Request& req, Response& res) {
             send(res, 200, placement_json(p.place_student(req.matches[1])));
           }));

  svr.Post(R"(/api/students/([^/]+)/enrollment)", guarded([&p](const Request& req, Response& res) {
             send(res, 201, p.enroll(req.matches[1]));
           }));

  svr.Post(R"(/api/students/([^/]+)/evaluations)",
           guarded([&p](const Request& req, Response& res) {
             Json body = parse_body(req);
             auto kind = fields::enumeration<EvaluationKind>(body, "kind");
             double pct = fields::number(body, "score_percentage");
             send(res, 200, p.record_evaluation(req.matches[1], kind, pct));
           }));

  svr.Post(R"(/api/students/([^/]+)/retake)", guarded([&p](const Request& req, Response& res) {
             send(res, 200, p.retake(req.matches[1]));
           }));

  svr.Post(R"(/api/students/([^/]+)/feedback)", guarded([&p](const Request& req, Response& res) {
             Json body = parse_body(req);
             auto rating = fields::integer(body, "rating");
             if (rating < kMinRating || rating > kMaxRating) {
               fail(ErrorCode::ValidationError, "rating");
             }
             auto comments = fields::string_or(body, "comments", "");
             send(res, 201,
                  p.submit_feedback(req.matches[1], static_cast<int>(rating), comments));
           }));

  // Case base and analytics

  svr.Get("/api/cases/similar", guarded([&p](const Request& req, Response& res) {
            if (!req.has_param("student_id")) fail(ErrorCode::ValidationError, "student_id");
            std::optional<int> k;
            if (req.has_param("k")) k = int_param(req, "k");
            const auto student_id = req.get_param_value("student_id");
            Json results = Json::array();
            for (const auto& s : p.similar_cases(student_id, k)) {
              results.push_back({{"case", s.match}, {"similarity", s.similarity}});
            }
            send(res, 200, Json{{"student_id", student_id},
                                {"k", k.value_or(p.config().default_k)},
                                {"results", std::move(results)}});
          }));

  svr.Get("/api/analytics/cohort", guarded([&p](const Request& req, Response& res) {
            CohortFilter filter;
            if (req.has_param("dimension") && !req.get_param_value("dimension").empty()) {
              filter.dimension = req.get_param_value("dimension");
            }
            if (req.has_param("gender") && !req.get_param_value("gender").empty()) {
              filter.gender =
                  parse_enum_or_fail<Gender>(req.get_param_value("gender"), "gender");
            }
            send(res, 200, p.cohort_stats(filter));
          }));

  // Question bank administration

  svr.Get("/api/admin/questions", guarded([&p](const Request& req, Response& res) {
            std::optional<Section> section;
            std::optional<QuestionStatus> status;
            if (req.has_param("section")) {
              section = parse_enum_or_fail<Section>(req.get_param_value("section"), "section");
            }
            if (req.has_param("status")) {
              status =
                  parse_enum_or_fail<QuestionStatus>(req.get_param_value("status"), "status");
            }
            const bool answers = flag(req, "include_answers");
            Json list = Json::array();
            for (const auto& q : p.list_questions(section, status)) {
              list.push_back(question_json(q, answers));
            }
            Json approved = Json::object();
            for (Section sec : kSectionOrder) {
              approved[std::string(enum_name(sec))] =
                  p.list_questions(sec, QuestionStatus::Approved).size();
            }
            send(res, 200, Json{{"questions", std::move(list)}, {"approved_counts", approved}});
          }));

  svr.Get(R"(/api/admin/questions/([^/]+))", guarded([&p](const Request& req, Response& res) {
            send(res, 200, question_json(p.get_question(req.matches[1]), flag(req, "include_answers")));
          }));

  svr.Post("/api/admin/questions", guarded([&p](const Request& req, Response& res) {
             auto q = p.add_question(question_from_request(parse_body(req)));
             send(res, 201, question_json(q, flag(req, "include_answers")));
           }));

  svr.Put(R"(/api/admin/questions/([^/]+))", guarded([&p](const Request& req, Response& res) {
            auto q = p.update_question(req.matches[1], question_from_request(parse_body(req)));
            send(res, 200, question_json(q, flag(req, "include_answers")));
          }));

  svr.Delete(R"(/api/admin/questions/([^/]+))", guarded([&p](const Request& req, Response& res) {
               p.delete_question(req.matches[1]);
               res.status = 204;
             }));

  svr.Post(R"(/api/admin/questions/([^/]+)/approve)",
           guarded([&p](const Request& req, Response& res) {
             send(res, 200, question_json(p.approve_question(req.matches[1]),
                                          flag(req, "include_answers")));
           }));
}

// ---------------------------------------------------------------------------
// HttpBackend

HttpBackend::HttpBackend(const std::string& host, int port)
    : client_(std::make_unique<httplib::Client>(host, port)) {
  client_->set_keep_alive(true);
  client_->set_tcp_nodelay(true);
}

HttpBackend::~HttpBackend() = default;

Json HttpBackend::call(const std::string& method, const std::string& path, const Json* body) {
  httplib::Result result;
  const std::string payload = body ? body->dump() : std::string();
  if (method == "GET") {
    result = client_->Get(path);
  } else if (method == "POST") {
    result = client_->Post(path, payload, kJson);
  } else if (method == "PUT") {
    result = client_->Put(path, payload, kJson);
  } else {
    result = client_->Delete(path);
  }
  if (!result) fail(ErrorCode::IoError, path, "request failed: " + method + " " + path);
  Json reply = result->body.empty() ? Json::object() : Json::parse(result->body, nullptr, false);
  if (result->status >= 300) {
    ErrorCode code = ErrorCode::IoError;
    std::string detail, message = "HTTP " + std::to_string(result->status);
    if (reply.is_object() && reply.contains("error")) {
      const auto& err = reply["error"];
      code = parse_error_code(err.value("code", "")).value_or(ErrorCode::IoError);
      detail = err.value("detail", "");
      message = err.value("message", message);
    }
    throw Error(code, detail, message);
  }
  return reply;
}

std::string HttpBackend::add_question(const Question& q) {
  Json body = {{"section", enum_name(q.section)},
               {"prompt", q.prompt},
               {"options", q.options},
               {"correct_option", q.correct_option}};
  return call("POST", "/api/admin/questions", &body).at("question_id").get<std::string>();
}

void HttpBackend::approve_question(const std::string& question_id) {
  call("POST", "/api/admin/questions/" + question_id + "/approve");
}

std::map<std::string, int> HttpBackend::answer_key() {
  std::map<std::string, int> key;
  const Json listing = call("GET", "/api/admin/questions?include_answers=true");
  for (const auto& q : listing.at("questions")) {
    key[q.at("question_id").get<std::string>()] = q.at("correct_option").get<int>();
  }
  return key;
}

std::string HttpBackend::register_student(const PersonalProfile& p, const CulturalProfile& c) {
  Json body = {{"personal", p}, {"cultural", c}};
  return call("POST", "/api/students", &body).at("student_id").get<std::string>();
}

std::string HttpBackend::start_test(const std::string& student_id, std::uint64_t seed) {
  Json body = {{"seed", seed}};
  return call("POST", "/api/students/" + student_id + "/test-sessions", &body)
      .at("session_id")
      .get<std::string>();
}

SessionView HttpBackend::current_section(const std::string& session_id) {
  Json j = call("GET", "/api/test-sessions/" + session_id + "/current-section");
  SessionView view;
  view.session_id = j.at("session_id").get<std::string>();
  view.state = fields::enumeration<SessionState>(j, "state");
  view.current_section = fields::optional_enumeration<Section>(j, "current_section");
  view.sections_done = j.at("sections_done").get<std::size_t>();
  for (const auto& q : j.at("questions")) {
    view.questions.push_back({q.at("question_id").get<std::string>(),
                              q.at("prompt").get<std::string>(),
                              q.at("options").get<std::vector<std::string>>()});
  }
  return view;
}

int HttpBackend::submit_section(const std::string& session_id, Section section,
                                const std::vector<int>& answers) {
  Json body = {{"answers", answers}};
  return call("POST",
              "/api/test-sessions/" + session_id + "/sections/" +
                  std::string(enum_name(section)) + "/answers",
              &body)
      .at("section_score")
      .get<int>();
}

TestScore HttpBackend::score_test(const std::string& session_id) {
  return call("POST", "/api/test-sessions/" + session_id + "/score").get<TestScore>();
}

StudentPlacement HttpBackend::place_student(const std::string& student_id) {
  return call("POST", "/api/students/" + student_id + "/placement").get<StudentPlacement>();
}

CohortStats HttpBackend::cohort_stats() {
  return call("GET", "/api/analytics/cohort").get<CohortStats>();
}

std::string HttpBackend::cohort_stats_body(const std::string& query) {
  auto result = client_->Get("/api/analytics/cohort" + query);
  if (!result) fail(ErrorCode::IoError, "/api/analytics/cohort");
  return result->body;
}

}  // namespace elearn
