// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/service/jobs.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "plantsam/error.hpp"
#include "plantsam/image_io.hpp"
#include "plantsam/service/backends.hpp"

namespace plantsam::service {

std::string to_string(JobState state) {
  switch (state) {
    case JobState::Queued: return "queued";
    case JobState::Running: return "running";
    case JobState::Done: return "done";
    case JobState::Failed: return "failed";
  }
  return "unknown";
}

JobState parse_job_state(const std::string& text) {
  if (text == "queued") return JobState::Queued;
  if (text == "running") return JobState::Running;
  if (text == "done") return JobState::Done;
  if (text == "failed") return JobState::Failed;
  throw Error(ErrorCode::InvalidArgument, "unknown job state '" + text + "'");
}

nlohmann::ordered_json box_to_json(const BoundingBox& box) {
  return {box.x_min, box.y_min, box.x_max, box.y_max, box.confidence};
}

BoundingBox box_from_json(const nlohmann::json& j) {
  return {j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>(), j.at(3).get<int>(),
          j.at(4).get<double>()};
}

nlohmann::ordered_json JobRecord::to_json() const {
  nlohmann::ordered_json j;
  j["job_id"] = job_id;
  j["image_id"] = request.image_id;
  j["strategy"] = plantsam::to_string(request.strategy);
  j["detector"] = request.detector;
  j["segmenter"] = request.segmenter;
  j["state"] = to_string(state);
  j["error"] = error.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(error);
  j["width"] = width;
  j["height"] = height;
  j["mask"] = state == JobState::Done ? nlohmann::ordered_json("/jobs/" + job_id + "/mask")
                                      : nlohmann::ordered_json(nullptr);
  j["timings"] = {{"queue_seconds", queue_seconds}, {"run_seconds", run_seconds}};
  auto cells = nlohmann::ordered_json::array();
  for (const auto& c : prompts) {
    auto boxes = nlohmann::ordered_json::array();
    for (const auto& b : c.boxes) boxes.push_back(box_to_json(b));
    cells.push_back({{"row", c.grid_row}, {"col", c.grid_col}, {"boxes", boxes}});
  }
  j["prompts"] = cells;
  return j;
}

JobRecord JobRecord::from_json(const nlohmann::json& j) {
  JobRecord r;
  r.job_id = j.at("job_id").get<std::string>();
  r.request.image_id = j.at("image_id").get<std::string>();
  r.request.strategy = parse_strategy(j.at("strategy").get<std::string>());
  r.request.detector = j.at("detector").get<std::string>();
  r.request.segmenter = j.at("segmenter").get<std::string>();
  r.state = parse_job_state(j.at("state").get<std::string>());
  if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
  r.width = j.at("width").get<int>();
  r.height = j.at("height").get<int>();
  r.queue_seconds = j.at("timings").at("queue_seconds").get<double>();
  r.run_seconds = j.at("timings").at("run_seconds").get<double>();
  for (const auto& c : j.at("prompts")) {
    CellPrompts cell{c.at("row").get<int>(), c.at("col").get<int>(), {}};
    for (const auto& b : c.at("boxes")) cell.boxes.push_back(box_from_json(b));
    r.prompts.push_back(std::move(cell));
  }
  return r;
}

JobQueue::JobQueue(const DataStore& store, PipelineConfig pipeline, int runners)
    : store_(store), pipeline_(std::move(pipeline)) {
  if (runners < 1) throw Error(ErrorCode::InvalidArgument, "job runners must be >= 1");
  for (const auto& entry : std::filesystem::directory_iterator(store_.jobs_dir())) {
    if (entry.path().extension() != ".json") continue;
    JobRecord r = JobRecord::from_json(nlohmann::json::parse(read_file(entry.path())));
    if (r.state == JobState::Queued || r.state == JobState::Running) {
      r.state = JobState::Failed;
      r.error = "interrupted by service restart";
      persist(r);
    }
    unsigned long long n = 0;
    if (std::sscanf(r.job_id.c_str(), "job-%llu", &n) == 1) next_id_ = std::max<std::uint64_t>(next_id_, n + 1);
    jobs_.emplace(r.job_id, std::move(r));
  }
  for (int i = 0; i < runners; ++i) runners_.emplace_back([this] { run_loop(); });
}

JobQueue::~JobQueue() { shutdown(); }

void JobQueue::shutdown() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  changed_.notify_all();
  for (auto& t : runners_) {
    if (t.joinable()) t.join();
  }
}

std::string JobQueue::submit(const JobRequest& request) {
  if (!store_.find_image(request.image_id)) {
    throw Error(ErrorCode::NotFound, "unknown image '" + request.image_id + "'");
  }
  validate_detector_name(request.detector);
  validate_segmenter_name(request.segmenter);
  if (request.detector == "oracle" &&
      !std::filesystem::is_regular_file(store_.oracle_mask(request.image_id))) {
    throw Error(ErrorCode::InvalidArgument, "no oracle mask for image '" + request.image_id + "'");
  }

  std::lock_guard lock(mutex_);
  if (stopping_) throw Error(ErrorCode::StateConflict, "job queue is shutting down");
  JobRecord r;
  r.job_id = fmt::format("job-{:06d}", next_id_++);
  r.request = request;
  persist(r);
  pending_.push_back(r.job_id);
  enqueued_at_[r.job_id] = std::chrono::steady_clock::now();
  const std::string id = r.job_id;
  jobs_.emplace(id, std::move(r));
  changed_.notify_all();
  return id;
}

JobRecord JobQueue::get(const std::string& job_id) const {
  std::lock_guard lock(mutex_);
  const auto it = jobs_.find(job_id);
  if (it == jobs_.end()) throw Error(ErrorCode::NotFound, "unknown job '" + job_id + "'");
  return it->second;
}

std::vector<JobRecord> JobQueue::list() const {
  std::lock_guard lock(mutex_);
  std::vector<JobRecord> out;
  for (const auto& [id, r] : jobs_) out.push_back(r);
  return out;
}

BinaryMask JobQueue::mask(const std::string& job_id) const {
  const JobRecord r = get(job_id);
  if (r.state != JobState::Done) {
    throw Error(ErrorCode::StateConflict, "job " + job_id + " is " + to_string(r.state));
  }
  return load_mask(store_.jobs_dir() / (job_id + ".png"));
}

JobRecord JobQueue::wait(const std::string& job_id, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  const auto finished = [&] {
    const auto it = jobs_.find(job_id);
    if (it == jobs_.end()) throw Error(ErrorCode::NotFound, "unknown job '" + job_id + "'");
    return it->second.state == JobState::Done || it->second.state == JobState::Failed;
  };
  changed_.wait_for(lock, timeout, finished);
  return jobs_.at(job_id);
}

void JobQueue::persist(const JobRecord& record) const {
  write_file_atomic(store_.jobs_dir() / (record.job_id + ".json"), record.to_json().dump(2) + "\n");
}

void JobQueue::run_loop() {
  for (;;) {
    std::string id;
    {
      std::unique_lock lock(mutex_);
      changed_.wait(lock, [&] { return stopping_ || !pending_.empty(); });
      if (stopping_) return;
      id = pending_.front();
      pending_.pop_front();
      JobRecord& r = jobs_.at(id);
      r.state = JobState::Running;
      r.queue_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                      enqueued_at_.at(id)).count();
      enqueued_at_.erase(id);
      persist(r);
    }
    changed_.notify_all();
    execute(id);
  }
}

void JobQueue::execute(const std::string& job_id) {
  const JobRequest request = get(job_id).request;
  JobRecord outcome;
  try {
    const auto image_path = store_.find_image(request.image_id);
    if (!image_path) throw Error(ErrorCode::NotFound, "image disappeared: " + request.image_id);
    const RasterImage image = load_image(*image_path);
    const auto detector = make_detector(request.detector, store_.oracle_mask(request.image_id),
                                        pipeline_.detector);
    const auto segmenter = make_segmenter(request.segmenter);
    PipelineConfig config = pipeline_;
    config.strategy = request.strategy;
    PipelineResult result = segment_image(image, *detector, *segmenter, config);
    save_mask(store_.jobs_dir() / (job_id + ".png"), result.mask);
    outcome.state = JobState::Done;
    outcome.width = image.width();
    outcome.height = image.height();
    outcome.run_seconds = result.seconds;
    for (const auto& p : result.patches) {
      outcome.prompts.push_back({p.grid_row, p.grid_col, p.prompts.boxes});
    }
  } catch (const std::exception& e) {
    outcome.state = JobState::Failed;
    outcome.error = e.what();
  }

  {
    std::lock_guard lock(mutex_);
    JobRecord& r = jobs_.at(job_id);
    r.state = outcome.state;
    r.error = outcome.error;
    r.width = outcome.width;
    r.height = outcome.height;
    r.run_seconds = outcome.run_seconds;
    r.prompts = std::move(outcome.prompts);
    persist(r);
  }
  changed_.notify_all();
}

}  // namespace plantsam::service
