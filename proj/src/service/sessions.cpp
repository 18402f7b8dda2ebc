// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/service/sessions.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdio>

#include "plantsam/error.hpp"
#include "plantsam/image_io.hpp"
#include "plantsam/pipeline.hpp"
#include "plantsam/service/backends.hpp"

namespace plantsam::service {

std::string to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::Active: return "active";
    case SessionStatus::Accepted: return "accepted";
    case SessionStatus::Discarded: return "discarded";
  }
  return "unknown";
}

std::string to_string(Polarity p) { return p == Polarity::Positive ? "positive" : "negative"; }

std::string to_string(UsabilityTag t) { return t == UsabilityTag::Usable ? "usable" : "unusable"; }

SessionStatus parse_session_status(const std::string& text) {
  if (text == "active") return SessionStatus::Active;
  if (text == "accepted") return SessionStatus::Accepted;
  if (text == "discarded") return SessionStatus::Discarded;
  throw Error(ErrorCode::InvalidArgument, "unknown session status '" + text + "'");
}

Polarity parse_polarity(const std::string& text) {
  if (text == "positive") return Polarity::Positive;
  if (text == "negative") return Polarity::Negative;
  throw Error(ErrorCode::InvalidArgument, "polarity must be positive or negative, got '" + text + "'");
}

UsabilityTag parse_usability_tag(const std::string& text) {
  if (text == "usable") return UsabilityTag::Usable;
  if (text == "unusable") return UsabilityTag::Unusable;
  throw Error(ErrorCode::InvalidArgument, "tag must be usable or unusable, got '" + text + "'");
}

namespace {

nlohmann::ordered_json event_to_json(const PromptEvent& e) {
  nlohmann::ordered_json j;
  if (e.kind == PromptEvent::Kind::Rerun) {
    j["kind"] = "rerun";
  } else {
    j["kind"] = "point";
    j["x"] = e.point.x;
    j["y"] = e.point.y;
    j["polarity"] = to_string(e.polarity);
  }
  j["version"] = e.version;
  return j;
}

PromptEvent event_from_json(const nlohmann::json& j) {
  PromptEvent e;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "rerun") {
    e.kind = PromptEvent::Kind::Rerun;
  } else if (kind == "point") {
    e.point = {j.at("x").get<int>(), j.at("y").get<int>()};
    e.polarity = parse_polarity(j.at("polarity").get<std::string>());
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown event kind '" + kind + "'");
  }
  e.version = j.at("version").get<int>();
  return e;
}

PromptSet cell_prompts(const RefinementContext& ctx, int row, int col,
                       std::span<const PromptEvent> events) {
  PromptSet prompts;
  for (const auto& c : ctx.seed_prompts) {
    if (c.grid_row == row && c.grid_col == col) prompts.boxes = c.boxes;
  }
  const Point o = ctx.plan.origin(row, col);
  for (const auto& e : events) {
    if (e.kind != PromptEvent::Kind::Point) continue;
    if (ctx.plan.cell_of(e.point) != std::pair{row, col}) continue;
    const Point local{e.point.x - o.x, e.point.y - o.y};
    (e.polarity == Polarity::Positive ? prompts.positive_points : prompts.negative_points)
        .push_back(local);
  }
  return prompts;
}

BinaryMask segment_cell(const RefinementContext& ctx, int row, int col,
                        std::span<const PromptEvent> events) {
  const Patch patch = extract_patch(ctx.prepared, ctx.plan, row, col);
  return run_segmenter(ctx.segmenter, patch.pixels, cell_prompts(ctx, row, col, events)).mask;
}

enum class Merge { Union, Intersection, Replace };

void merge_cell(BinaryMask& out, const BinaryMask& cell, const PatchPlan& plan, int row, int col,
                Merge how) {
  const BoundingBox valid = plan.valid_region(row, col);
  for (int y = valid.y_min; y <= valid.y_max; ++y) {
    for (int x = valid.x_min; x <= valid.x_max; ++x) {
      const bool prev = out.get(x, y);
      const bool seg = cell.get(x - valid.x_min, y - valid.y_min);
      switch (how) {
        case Merge::Union: out.set(x, y, prev || seg); break;
        case Merge::Intersection: out.set(x, y, prev && seg); break;
        case Merge::Replace: out.set(x, y, seg); break;
      }
    }
  }
}

}  // namespace

BinaryMask apply_event(const RefinementContext& ctx, const BinaryMask& previous,
                       std::span<const PromptEvent> earlier, const PromptEvent& event) {
  std::vector<PromptEvent> events(earlier.begin(), earlier.end());
  events.push_back(event);
  BinaryMask out = previous;
  if (event.kind == PromptEvent::Kind::Point) {
    const auto [row, col] = ctx.plan.cell_of(event.point);
    const BinaryMask seg = segment_cell(ctx, row, col, events);
    merge_cell(out, seg, ctx.plan, row, col,
               event.polarity == Polarity::Positive ? Merge::Union : Merge::Intersection);
    return out;
  }
  for (int row = 0; row < ctx.plan.rows; ++row) {
    for (int col = 0; col < ctx.plan.cols; ++col) {
      merge_cell(out, segment_cell(ctx, row, col, events), ctx.plan, row, col, Merge::Replace);
    }
  }
  return out;
}

nlohmann::ordered_json SessionState::to_json() const {
  nlohmann::ordered_json j;
  j["session_id"] = session_id;
  j["image_id"] = image_id;
  j["width"] = width;
  j["height"] = height;
  j["seed"] = seed;
  j["segmenter"] = segmenter;
  j["status"] = to_string(status);
  j["tag"] = tag ? nlohmann::ordered_json(to_string(*tag)) : nlohmann::ordered_json(nullptr);
  j["mask_version"] = mask_version;
  j["latest_version"] = latest_version;
  auto hist = nlohmann::ordered_json::array();
  for (const auto& e : history) hist.push_back(event_to_json(e));
  j["history"] = hist;
  j["undo_stack"] = undo_stack;
  auto redo = nlohmann::ordered_json::array();
  for (const auto& e : redo_stack) redo.push_back(event_to_json(e));
  j["redo_stack"] = redo;
  auto cells = nlohmann::ordered_json::array();
  for (const auto& c : seed_prompts) {
    auto boxes = nlohmann::ordered_json::array();
    for (const auto& b : c.boxes) boxes.push_back(box_to_json(b));
    cells.push_back({{"row", c.grid_row}, {"col", c.grid_col}, {"boxes", boxes}});
  }
  j["seed_prompts"] = cells;
  return j;
}

SessionState SessionState::from_json(const nlohmann::json& j) {
  SessionState s;
  s.session_id = j.at("session_id").get<std::string>();
  s.image_id = j.at("image_id").get<std::string>();
  s.width = j.at("width").get<int>();
  s.height = j.at("height").get<int>();
  s.seed = j.at("seed").get<std::string>();
  s.segmenter = j.at("segmenter").get<std::string>();
  s.status = parse_session_status(j.at("status").get<std::string>());
  if (!j.at("tag").is_null()) s.tag = parse_usability_tag(j.at("tag").get<std::string>());
  s.mask_version = j.at("mask_version").get<int>();
  s.latest_version = j.at("latest_version").get<int>();
  for (const auto& e : j.at("history")) s.history.push_back(event_from_json(e));
  s.undo_stack = j.at("undo_stack").get<std::vector<int>>();
  for (const auto& e : j.at("redo_stack")) s.redo_stack.push_back(event_from_json(e));
  for (const auto& c : j.at("seed_prompts")) {
    CellPrompts cell{c.at("row").get<int>(), c.at("col").get<int>(), {}};
    for (const auto& b : c.at("boxes")) cell.boxes.push_back(box_from_json(b));
    s.seed_prompts.push_back(std::move(cell));
  }
  return s;
}

struct SessionStore::Session {
  mutable std::mutex mutex;
  SessionState state;
  RasterImage prepared;
  PatchPlan plan;
  std::unique_ptr<Segmenter> segmenter;
  BinaryMask current;

  RefinementContext context() const { return {prepared, plan, *segmenter, state.seed_prompts}; }
};

namespace {

void require_active(const SessionState& s) {
  if (s.status != SessionStatus::Active) {
    throw Error(ErrorCode::StateConflict,
                fmt::format("session {} is {}", s.session_id, to_string(s.status)));
  }
}

}  // namespace

SessionStore::SessionStore(const DataStore& store, const JobQueue& jobs, SessionConfig config)
    : store_(store), jobs_(jobs), config_(config) {
  if (config_.undo_depth < 0) throw Error(ErrorCode::InvalidArgument, "undo depth must be >= 0");
  std::vector<std::filesystem::path> dirs;
  for (const auto& entry : std::filesystem::directory_iterator(store_.sessions_dir())) {
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "session.json")) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& dir : dirs) {
    try {
      auto s = load(dir);
      unsigned long long n = 0;
      if (std::sscanf(s->state.session_id.c_str(), "ses-%llu", &n) == 1) {
        next_id_ = std::max<std::uint64_t>(next_id_, n + 1);
      }
      sessions_.emplace(s->state.session_id, std::move(s));
    } catch (const std::exception& e) {
      fmt::print(stderr, "skipping session {}: {}\n", dir.filename().string(), e.what());
    }
  }
}

std::shared_ptr<SessionStore::Session> SessionStore::load(const std::filesystem::path& dir) {
  auto s = std::make_shared<Session>();
  s->state = SessionState::from_json(nlohmann::json::parse(read_file(dir / "session.json")));
  prepare(*s);
  s->current = read_version(*s, s->state.mask_version);
  return s;
}

void SessionStore::prepare(Session& s) const {
  const auto path = store_.find_image(s.state.image_id);
  if (!path) throw Error(ErrorCode::NotFound, "unknown image '" + s.state.image_id + "'");
  const RasterImage image = load_image(*path);
  s.state.width = image.width();
  s.state.height = image.height();
  s.prepared = preprocess(image, config_.morphology);
  s.plan = plan_for(image.width(), image.height());
  s.segmenter = make_segmenter(s.state.segmenter);
}

void SessionStore::persist_state(const Session& s) const {
  write_file_atomic(store_.sessions_dir() / s.state.session_id / "session.json",
                    s.state.to_json().dump(2) + "\n");
}

void SessionStore::write_version(const Session& s, int version, const BinaryMask& mask) const {
  const auto bytes = encode_mask_png(mask);
  write_file_atomic(store_.sessions_dir() / s.state.session_id / fmt::format("v{}.png", version),
                    std::string(bytes.begin(), bytes.end()));
}

BinaryMask SessionStore::read_version(const Session& s, int version) const {
  if (version < 0 || version > s.state.latest_version) {
    throw Error(ErrorCode::NotFound,
                fmt::format("session {} has no mask version {}", s.state.session_id, version));
  }
  return load_mask(store_.sessions_dir() / s.state.session_id / fmt::format("v{}.png", version));
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& session_id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(ErrorCode::NotFound, "unknown session '" + session_id + "'");
  return it->second;
}

SessionState SessionStore::open(const std::string& image_id, const std::string& seed,
                                const std::optional<std::string>& segmenter) {
  if (!store_.find_image(image_id)) {
    throw Error(ErrorCode::NotFound, "unknown image '" + image_id + "'");
  }
  auto s = std::make_shared<Session>();
  s->state.image_id = image_id;
  s->state.seed = seed;
  std::optional<BinaryMask> seed_mask;
  if (seed == "empty") {
    s->state.segmenter = segmenter.value_or("reference");
  } else if (seed.starts_with("job:")) {
    const JobRecord job = jobs_.get(seed.substr(4));
    if (job.request.image_id != image_id) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("job {} segmented image '{}', not '{}'", job.job_id,
                              job.request.image_id, image_id));
    }
    seed_mask = jobs_.mask(job.job_id);
    s->state.segmenter = segmenter.value_or(job.request.segmenter);
    s->state.seed_prompts = job.prompts;
  } else {
    throw Error(ErrorCode::InvalidArgument, "seed must be \"empty\" or \"job:<id>\", got '" + seed + "'");
  }
  validate_segmenter_name(s->state.segmenter);
  prepare(*s);
  s->current = seed_mask ? std::move(*seed_mask) : BinaryMask(s->state.width, s->state.height);
  if (s->current.width() != s->state.width || s->current.height() != s->state.height) {
    throw Error(ErrorCode::DimensionMismatch, "seed mask does not match the image size");
  }

  std::lock_guard lock(mutex_);
  s->state.session_id = fmt::format("ses-{:06d}", next_id_++);
  write_version(*s, 0, s->current);
  persist_state(*s);
  sessions_.emplace(s->state.session_id, s);
  return s->state;
}

SessionState SessionStore::get(const std::string& session_id) const {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  return s->state;
}

std::vector<SessionState> SessionStore::list(std::optional<UsabilityTag> tag) const {
  std::vector<std::shared_ptr<Session>> all;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [id, s] : sessions_) all.push_back(s);
  }
  std::vector<SessionState> out;
  for (const auto& s : all) {
    std::lock_guard lock(s->mutex);
    if (!tag || s->state.tag == tag) out.push_back(s->state);
  }
  return out;
}

int SessionStore::commit(Session& s, PromptEvent event, bool clear_redo) {
  const BinaryMask next = apply_event(s.context(), s.current, s.state.history, event);
  const int version = s.state.latest_version + 1;
  event.version = version;
  write_version(s, version, next);
  s.state.latest_version = version;
  s.state.undo_stack.push_back(s.state.mask_version);
  if (static_cast<int>(s.state.undo_stack.size()) > config_.undo_depth) {
    s.state.undo_stack.erase(s.state.undo_stack.begin());
  }
  s.state.history.push_back(event);
  if (clear_redo) s.state.redo_stack.clear();
  s.state.mask_version = version;
  s.current = next;
  persist_state(s);
  return version;
}

int SessionStore::apply_point(const std::string& session_id, Point point, Polarity polarity) {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  require_active(s->state);
  if (point.x < 0 || point.y < 0 || point.x >= s->state.width || point.y >= s->state.height) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("point ({}, {}) outside {}x{} image", point.x, point.y,
                            s->state.width, s->state.height));
  }
  PromptEvent e;
  e.kind = PromptEvent::Kind::Point;
  e.point = point;
  e.polarity = polarity;
  return commit(*s, e, true);
}

int SessionStore::rerun(const std::string& session_id) {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  require_active(s->state);
  PromptEvent e;
  e.kind = PromptEvent::Kind::Rerun;
  return commit(*s, e, true);
}

int SessionStore::undo(const std::string& session_id) {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  require_active(s->state);
  if (s->state.undo_stack.empty()) {
    throw Error(ErrorCode::StateConflict, "nothing to undo in session " + session_id);
  }
  const int previous = s->state.undo_stack.back();
  s->current = read_version(*s, previous);
  s->state.undo_stack.pop_back();
  s->state.redo_stack.push_back(s->state.history.back());
  s->state.history.pop_back();
  s->state.mask_version = previous;
  persist_state(*s);
  return previous;
}

int SessionStore::redo(const std::string& session_id) {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  require_active(s->state);
  if (s->state.redo_stack.empty()) {
    throw Error(ErrorCode::StateConflict, "nothing to redo in session " + session_id);
  }
  const PromptEvent e = s->state.redo_stack.back();
  s->current = read_version(*s, e.version);
  s->state.redo_stack.pop_back();
  s->state.undo_stack.push_back(s->state.mask_version);
  if (static_cast<int>(s->state.undo_stack.size()) > config_.undo_depth) {
    s->state.undo_stack.erase(s->state.undo_stack.begin());
  }
  s->state.history.push_back(e);
  s->state.mask_version = e.version;
  persist_state(*s);
  return e.version;
}

SessionState SessionStore::accept(const std::string& session_id) {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  require_active(s->state);
  save_mask(export_path(session_id), s->current);
  s->state.status = SessionStatus::Accepted;
  s->state.undo_stack.clear();
  s->state.redo_stack.clear();
  persist_state(*s);
  return s->state;
}

SessionState SessionStore::tag(const std::string& session_id, UsabilityTag tag) {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  require_active(s->state);
  s->state.tag = tag;
  persist_state(*s);
  return s->state;
}

SessionState SessionStore::discard(const std::string& session_id) {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  require_active(s->state);
  s->state.status = SessionStatus::Discarded;
  persist_state(*s);
  return s->state;
}

SessionState SessionStore::resume(const std::string& session_id) {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  if (s->state.status == SessionStatus::Accepted) {
    throw Error(ErrorCode::StateConflict, "session " + session_id + " was accepted and cannot be reopened");
  }
  s->state.status = SessionStatus::Active;
  persist_state(*s);
  return s->state;
}

BinaryMask SessionStore::mask(const std::string& session_id, std::optional<int> version) const {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  if (!version || *version == s->state.mask_version) return s->current;
  return read_version(*s, *version);
}

BinaryMask SessionStore::seed_mask(const std::string& session_id) const {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  return read_version(*s, 0);
}

BinaryMask SessionStore::replay(const std::string& session_id) const {
  auto s = find(session_id);
  std::lock_guard lock(s->mutex);
  BinaryMask m = read_version(*s, 0);
  const auto& h = s->state.history;
  for (std::size_t i = 0; i < h.size(); ++i) {
    m = apply_event(s->context(), m, std::span(h).first(i), h[i]);
  }
  return m;
}

std::filesystem::path SessionStore::export_path(const std::string& session_id) const {
  return store_.exports_dir() / (session_id + ".png");
}

}  // namespace plantsam::service
