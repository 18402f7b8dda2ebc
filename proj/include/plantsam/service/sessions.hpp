// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "plantsam/image.hpp"
#include "plantsam/morphology.hpp"
#include "plantsam/segmentation.hpp"
#include "plantsam/service/jobs.hpp"
#include "plantsam/service/store.hpp"
#include "plantsam/tiling.hpp"

namespace plantsam::service {

enum class SessionStatus { Active, Accepted, Discarded };
enum class Polarity { Positive, Negative };
enum class UsabilityTag { Usable, Unusable };

std::string to_string(SessionStatus s);
std::string to_string(Polarity p);
std::string to_string(UsabilityTag t);
SessionStatus parse_session_status(const std::string& text);
Polarity parse_polarity(const std::string& text);
UsabilityTag parse_usability_tag(const std::string& text);

/// One entry of a session's prompt history.
struct PromptEvent {
  enum class Kind { Point, Rerun };
  Kind kind = Kind::Point;
  /// Image coordinates; unused for reruns.
  Point point{};
  Polarity polarity = Polarity::Positive;
  /// Mask version this event produced.
  int version = 0;
};

struct SessionState {
  std::string session_id;
  std::string image_id;
  int width = 0;
  int height = 0;
  /// "empty" or "job:<id>".
  std::string seed;
  std::string segmenter = "reference";
  SessionStatus status = SessionStatus::Active;
  std::optional<UsabilityTag> tag;
  int mask_version = 0;
  /// Highest version written so far.
  int latest_version = 0;
  /// Events that produced the current mask, oldest first.
  std::vector<PromptEvent> history;
  /// Versions to return to on undo, oldest first.
  std::vector<int> undo_stack;
  /// Undone events, most recently undone last.
  std::vector<PromptEvent> redo_stack;
  /// Box prompts per grid cell taken from the seeding job.
  std::vector<CellPrompts> seed_prompts;

  nlohmann::ordered_json to_json() const;
  static SessionState from_json(const nlohmann::json& j);
};

struct SessionConfig {
  int undo_depth = 32;
  MorphologyConfig morphology{};
};

/// Everything needed to recompute a session mask from prompts.
struct RefinementContext {
  const RasterImage& prepared;
  const PatchPlan& plan;
  const Segmenter& segmenter;
  std::span<const CellPrompts> seed_prompts;
};

/// Applies `event` to `previous`, given the events preceding it. A point event
/// re-segments the point's grid cell with the cell's seed boxes plus every
/// accumulated point in the cell, then merges: union for positive points,
/// intersection for negative points. A rerun re-segments every cell.
BinaryMask apply_event(const RefinementContext& ctx, const BinaryMask& previous,
                       std::span<const PromptEvent> earlier, const PromptEvent& event);

class SessionStore {
 public:
  /// Reloads every session found under the data directory.
  SessionStore(const DataStore& store, const JobQueue& jobs, SessionConfig config = {});

  /// seed is "empty" or "job:<id>"; the job must be done and match image_id.
  SessionState open(const std::string& image_id, const std::string& seed,
                    const std::optional<std::string>& segmenter = std::nullopt);

  SessionState get(const std::string& session_id) const;
  std::vector<SessionState> list(std::optional<UsabilityTag> tag = std::nullopt) const;

  int apply_point(const std::string& session_id, Point point, Polarity polarity);
  int rerun(const std::string& session_id);
  int undo(const std::string& session_id);
  int redo(const std::string& session_id);

  SessionState accept(const std::string& session_id);
  SessionState tag(const std::string& session_id, UsabilityTag tag);
  SessionState discard(const std::string& session_id);
  SessionState resume(const std::string& session_id);

  /// Current mask when `version` is empty.
  BinaryMask mask(const std::string& session_id, std::optional<int> version = std::nullopt) const;
  BinaryMask seed_mask(const std::string& session_id) const;
  /// Recomputes the current mask from the seed and prompt history.
  BinaryMask replay(const std::string& session_id) const;

  std::filesystem::path export_path(const std::string& session_id) const;

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& session_id) const;
  std::shared_ptr<Session> load(const std::filesystem::path& dir);
  void prepare(Session& s) const;
  void persist_state(const Session& s) const;
  void write_version(const Session& s, int version, const BinaryMask& mask) const;
  BinaryMask read_version(const Session& s, int version) const;
  int commit(Session& s, PromptEvent event, bool clear_redo);

  const DataStore& store_;
  const JobQueue& jobs_;
  SessionConfig config_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace plantsam::service
