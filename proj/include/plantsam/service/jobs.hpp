// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "plantsam/image.hpp"
#include "plantsam/pipeline.hpp"
#include "plantsam/service/store.hpp"

namespace plantsam::service {

enum class JobState { Queued, Running, Done, Failed };

std::string to_string(JobState state);
JobState parse_job_state(const std::string& text);

struct JobRequest {
  std::string image_id;
  PromptStrategy strategy = PromptStrategy::MultiRegion;
  std::string detector = "heuristic";
  std::string segmenter = "reference";
};

/// Box prompts the pipeline used for one grid cell, in patch coordinates.
struct CellPrompts {
  int grid_row = 0;
  int grid_col = 0;
  std::vector<BoundingBox> boxes;
};

struct JobRecord {
  std::string job_id;
  JobRequest request;
  JobState state = JobState::Queued;
  std::string error;
  int width = 0;
  int height = 0;
  double queue_seconds = 0.0;
  double run_seconds = 0.0;
  /// Filled once the job is done.
  std::vector<CellPrompts> prompts;

  nlohmann::ordered_json to_json() const;
  static JobRecord from_json(const nlohmann::json& j);
};

nlohmann::ordered_json box_to_json(const BoundingBox& box);
BoundingBox box_from_json(const nlohmann::json& j);

/// Runs submitted pipeline jobs on a fixed set of runner threads. Each run
/// calls segment_image with the configured worker count.
class JobQueue {
 public:
  JobQueue(const DataStore& store, PipelineConfig pipeline, int runners = 1);
  ~JobQueue();
  JobQueue(const JobQueue&) = delete;
  JobQueue& operator=(const JobQueue&) = delete;

  /// Validates the image and backend names, then enqueues.
  std::string submit(const JobRequest& request);

  JobRecord get(const std::string& job_id) const;
  std::vector<JobRecord> list() const;
  /// StateConflict unless the job is done.
  BinaryMask mask(const std::string& job_id) const;
  /// Blocks until the job is done or failed, or the timeout passes.
  JobRecord wait(const std::string& job_id, std::chrono::milliseconds timeout) const;

  void shutdown();

 private:
  void run_loop();
  void execute(const std::string& job_id);
  void persist(const JobRecord& record) const;

  const DataStore& store_;
  PipelineConfig pipeline_;
  mutable std::mutex mutex_;
  mutable std::condition_variable changed_;
  std::map<std::string, JobRecord> jobs_;
  std::map<std::string, std::chrono::steady_clock::time_point> enqueued_at_;
  std::deque<std::string> pending_;
  std::uint64_t next_id_ = 1;
  bool stopping_ = false;
  std::vector<std::thread> runners_;
};

}  // namespace plantsam::service
