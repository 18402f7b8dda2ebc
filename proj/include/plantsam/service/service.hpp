// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "plantsam/error.hpp"
#include "plantsam/pipeline.hpp"
#include "plantsam/service/jobs.hpp"
#include "plantsam/service/sessions.hpp"
#include "plantsam/service/store.hpp"

namespace plantsam::service {

struct ServiceConfig {
  std::filesystem::path data_dir;
  /// OpenMP threads per pipeline run; 0 uses every core.
  int workers = 0;
  /// Jobs executed concurrently.
  int job_runners = 1;
  int undo_depth = 32;
  PipelineConfig pipeline{};
};

class Service {
 public:
  explicit Service(ServiceConfig config);

  const ServiceConfig& config() const { return config_; }
  const DataStore& store() const { return store_; }
  JobQueue& jobs() { return jobs_; }
  SessionStore& sessions() { return sessions_; }

 private:
  ServiceConfig config_;
  DataStore store_;
  JobQueue jobs_;
  SessionStore sessions_;
};

/// JSON-over-HTTP front end. Errors are returned as {"code", "message"} with
/// 400 for validation failures, 404 for unknown ids and 409 for state conflicts.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the listening socket; port 0 picks a free port. Returns the port.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called.
  void run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

int http_status(ErrorCode code);

}  // namespace plantsam::service
