#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include <pthread.h>

#include <CLI11.hpp>

#include "elearn/http_api.hpp"
#include "elearn/service.hpp"
#include "elearn/simulation.hpp"

namespace {

using namespace elearn;

ServiceConfig offline_config(const std::string& data_dir) {
  ServiceConfig config;
  config.data_dir = data_dir;
  return config;
}

int serve(ServiceConfig config) {
  // Block termination signals in every thread; a dedicated waiter stops the
  // server so shutdown runs outside signal context.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Platform platform(config);
  ApiServer server(platform);
  const int port = server.bind(config.host, config.port);
  std::cerr << "listening on " << config.host << ':' << port << '\n';

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.listen();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  platform.flush();
  return 0;
}

int simulate(int n, std::uint64_t seed, const std::string& config_path,
             const std::string& data_dir, const std::string& server, bool full,
             const std::string& output) {
  FactorDistributions distributions = uniform_distributions();
  SimulationOptions options;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) fail(ErrorCode::BadConfig, "config", "cannot read " + config_path);
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) fail(ErrorCode::BadConfig, "config", "config is not valid JSON");
    simulation_config_from_json(j, distributions, options);
  }

  SimulationSummary summary;
  if (!server.empty()) {
    auto colon = server.rfind(':');
    if (colon == std::string::npos) fail(ErrorCode::BadConfig, "server", "expected HOST:PORT");
    HttpBackend backend(server.substr(0, colon), std::stoi(server.substr(colon + 1)));
    summary = simulate_cohort(backend, n, seed, distributions, options);
  } else {
    ServiceConfig config;
    if (!data_dir.empty()) config.data_dir = data_dir;
    Platform platform(config);
    if (!platform.repositories().all_empty()) {
      fail(ErrorCode::NonEmptyTarget, data_dir, "simulate needs an empty data directory");
    }
    InProcessBackend backend(platform);
    summary = simulate_cohort(backend, n, seed, distributions, options);
  }

  const Json out = full ? Json(summary) : Json(summary.stats);
  if (output.empty()) {
    std::cout << out.dump(2) << '\n';
  } else {
    std::ofstream(output) << out.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learner placement service"};
  app.require_subcommand(1);

  ServiceConfig serve_config;
  std::string config_path;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--config", config_path, "JSON config file");
  auto* port_opt = serve_cmd->add_option("--port", serve_config.port, "Listen port");
  auto* host_opt = serve_cmd->add_option("--host", serve_config.host, "Listen address");
  std::string serve_dir;
  auto* dir_opt = serve_cmd->add_option("--data-dir", serve_dir, "Data directory");
  auto* threshold_opt =
      serve_cmd->add_option("--pass-threshold", serve_config.pass_threshold, "Course pass mark");
  auto* k_opt = serve_cmd->add_option("--default-k", serve_config.default_k, "Default case count");

  std::string seed_file, data_dir;
  bool approve = false;
  auto* seed_cmd = app.add_subcommand("seed-questions", "Import a question seed file");
  seed_cmd->add_option("file", seed_file)->required();
  seed_cmd->add_option("--data-dir", data_dir)->required();
  seed_cmd->add_flag("--approve", approve, "Approve imported questions");

  int n = 0;
  std::uint64_t seed = 0;
  std::string sim_config, sim_dir, sim_server, sim_output;
  bool full = false;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a seeded synthetic cohort");
  sim_cmd->add_option("--n", n, "Cohort size")->required();
  sim_cmd->add_option("--seed", seed, "Random seed")->required();
  sim_cmd->add_option("--config", sim_config, "Factor distributions (JSON)");
  sim_cmd->add_option("--data-dir", sim_dir, "Empty data directory to fill");
  sim_cmd->add_option("--server", sim_server, "Drive a running service at HOST:PORT");
  sim_cmd->add_option("--output", sim_output, "Write JSON here instead of stdout");
  sim_cmd->add_flag("--full", full, "Include per-student results");

  std::string snapshot_path;
  auto* export_cmd = app.add_subcommand("export-snapshot", "Archive all stores");
  export_cmd->add_option("path", snapshot_path)->required();
  export_cmd->add_option("--data-dir", data_dir)->required();
  auto* import_cmd = app.add_subcommand("import-snapshot", "Restore an archive");
  import_cmd->add_option("path", snapshot_path)->required();
  import_cmd->add_option("--data-dir", data_dir)->required();
  auto* cases_cmd = app.add_subcommand("export-cases", "Write the case base as JSON lines");
  cases_cmd->add_option("path", snapshot_path)->required();
  cases_cmd->add_option("--data-dir", data_dir)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) {
      ServiceConfig config;
      if (!config_path.empty()) config = load_config(config_path, config);
      if (*port_opt) config.port = serve_config.port;
      if (*host_opt) config.host = serve_config.host;
      if (*dir_opt) config.data_dir = serve_dir;
      if (*threshold_opt) config.pass_threshold = serve_config.pass_threshold;
      if (*k_opt) config.default_k = serve_config.default_k;
      validate(config);
      return serve(config);
    }
    if (*seed_cmd) {
      std::ifstream in(seed_file);
      if (!in) fail(ErrorCode::NotFound, seed_file, "cannot read " + seed_file);
      Platform platform(offline_config(data_dir));
      auto ids = platform.seed_questions(in, approve);
      std::cout << "imported " << ids.size() << " questions\n";
      return 0;
    }
    if (*sim_cmd) return simulate(n, seed, sim_config, sim_dir, sim_server, full, sim_output);
    if (*export_cmd) {
      Platform(offline_config(data_dir)).export_snapshot(snapshot_path);
      return 0;
    }
    if (*import_cmd) {
      Platform(offline_config(data_dir)).import_snapshot(snapshot_path);
      return 0;
    }
    if (*cases_cmd) {
      Platform platform(offline_config(data_dir));
      std::ofstream out(snapshot_path);
      CaseBase(platform.repositories()).export_cases(out);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return 2;
  }
  return 0;
}
