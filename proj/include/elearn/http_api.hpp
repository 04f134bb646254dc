#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "elearn/service.hpp"
#include "elearn/simulation.hpp"

namespace httplib {
class Server;
class Client;
}  // namespace httplib

namespace elearn {

/// REST surface over a Platform. Every error response has the body
/// {"error": {"code", "detail", "message"}} with the status from http_status().
class ApiServer {
 public:
  explicit ApiServer(Platform& platform);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Port 0 picks a free port. Throws PortInUse when the bind fails.
  int bind(const std::string& host, int port);
  int port() const noexcept { return port_; }

  void listen();  // blocks until stop()
  void start();   // listen() on a background thread
  // Stops accepting requests, then flushes every store.
  void stop();

 private:
  void install_routes();

  Platform& platform_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = -1;
};

/// CohortBackend speaking the REST API, so simulations exercise the full
/// HTTP path. Error responses are rethrown as Error with the server's code.
class HttpBackend : public CohortBackend {
 public:
  HttpBackend(const std::string& host, int port);
  ~HttpBackend() override;

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

  // Raw body of GET /api/analytics/cohort.
  std::string cohort_stats_body(const std::string& query = {});

 private:
  Json call(const std::string& method, const std::string& path, const Json* body = nullptr);

  std::unique_ptr<httplib::Client> client_;
};

}  // namespace elearn
