// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include <csignal>
#include <memory>
#include <thread>

#include <pthread.h>

#include "common.hpp"
#include "plantsam/error.hpp"
#include "plantsam/service/service.hpp"

namespace plantsam::cli {

namespace {

struct ServeOptions {
  std::filesystem::path data_dir;
  std::string listen = "127.0.0.1:8080";
  int job_runners = 1;
  int undo_depth = 32;
  PipelineFlags flags;
};

std::pair<std::string, int> split_address(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::InvalidArgument, "--listen must be HOST:PORT");
  int port = -1;
  try {
    port = std::stoi(address.substr(colon + 1));
  } catch (const std::exception&) {
  }
  if (port < 0 || port > 65535) throw Error(ErrorCode::InvalidArgument, "bad port in '" + address + "'");
  return {address.substr(0, colon), port};
}

int run_serve(const ServeOptions& o, const GlobalOptions& g) {
  const auto [host, port] = split_address(o.listen);

  // SIGINT/SIGTERM are consumed by a watcher thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  service::ServiceConfig config;
  config.data_dir = o.data_dir;
  config.workers = g.workers;
  config.job_runners = o.job_runners;
  config.undo_depth = o.undo_depth;
  config.pipeline = o.flags.pipeline();
  service::Service svc(config);
  service::HttpServer server(svc);
  const int bound = server.bind(host, port);
  fmt::print("listening on http://{}:{} (data {})\n", host, bound, o.data_dir.string());
  std::fflush(stdout);

  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.run();
  pthread_kill(watcher.native_handle(), SIGTERM);
  watcher.join();
  svc.jobs().shutdown();
  return 0;
}

}  // namespace

void add_serve(CLI::App& app, const GlobalOptions& g, Runner& run) {
  auto o = std::make_shared<ServeOptions>();
  CLI::App* sub = app.add_subcommand("serve", "Run the HTTP job and refinement service");
  sub->footer(R"(Data directory layout:
  images/{image_id}.{png,jpg,jpeg}  inputs
  masks/{image_id}.png              ground truth for the oracle detector
  jobs/, sessions/, exports/        written by the service
Endpoints:
  POST /jobs {image_id, strategy, detector, segmenter} -> {job_id}
  GET  /jobs/{id}, GET /jobs/{id}/mask
  POST /sessions {image_id, seed: "empty" | "job:<id>"}
  GET  /sessions[?tag=usable|unusable], GET /sessions/{id}
  POST /sessions/{id}/points {x, y, polarity}
  POST /sessions/{id}/undo | redo | rerun | accept | discard | resume
  POST /sessions/{id}/tag {"tag": "usable" | "unusable"}
  GET  /sessions/{id}/mask[?version=n], GET /images, GET /images/{id}
Errors are {"code", "message"} with status 400, 404 or 409.)");
  sub->add_option("--data-dir", o->data_dir, "Service data directory")->required();
  sub->add_option("--listen", o->listen, "Listen address as HOST:PORT")->capture_default_str();
  sub->add_option("--job-runners", o->job_runners, "Jobs run concurrently")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  sub->add_option("--undo-depth", o->undo_depth, "Undo steps kept per session")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  o->flags.add_morphology(*sub);
  o->flags.add_detector(*sub);
  sub->callback([o, &g, &run] { run = [o, &g] { return run_serve(*o, g); }; });
}

}  // namespace plantsam::cli
