// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>
#include <functional>
#include <thread>

#include "oracles.hpp"
#include "plantsam/error.hpp"
#include "plantsam/evaluation.hpp"
#include "plantsam/service/service.hpp"
#include "service_fixture.hpp"

namespace plantsam::service {
namespace {

using plantsam::testing::kJobTimeout;

bool subset(const BinaryMask& a, const BinaryMask& b) {
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x)
      if (a.get(x, y) && !b.get(x, y)) return false;
  return true;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

ServiceConfig config_for(const std::filesystem::path& root) {
  ServiceConfig cfg;
  cfg.data_dir = root;
  cfg.workers = 1;
  return cfg;
}

TEST(Jobs, OracleJobLifecycle) {
  Service svc(config_for(testing::seeded_data_dir("jobs_life")));
  const std::string id = svc.jobs().submit({"sheet", PromptStrategy::MultiRegion, "oracle"});
  EXPECT_EQ(id, "job-000001");
  const JobRecord done = svc.jobs().wait(id, kJobTimeout);
  ASSERT_EQ(done.state, JobState::Done) << done.error;
  EXPECT_EQ(done.width, 600);
  EXPECT_FALSE(done.prompts.empty());
  const BinaryMask truth = load_mask(svc.store().oracle_mask("sheet"));
  EXPECT_GE(iou(svc.jobs().mask(id), truth), 0.95);
  const auto j = done.to_json();
  EXPECT_EQ(j["mask"], "/jobs/" + id + "/mask");
  EXPECT_EQ(JobRecord::from_json(j).prompts.size(), done.prompts.size());
  EXPECT_EQ(svc.jobs().list().size(), 1u);
}

TEST(Jobs, SubmitValidation) {
  Service svc(config_for(testing::seeded_data_dir("jobs_bad")));
  EXPECT_EQ(code_of([&] { svc.jobs().submit({"nope"}); }), ErrorCode::NotFound);
  EXPECT_EQ(code_of([&] { svc.jobs().submit({"../x"}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { svc.jobs().submit({"sheet", PromptStrategy::SingleBox, "yolo"}); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] {
              svc.jobs().submit({"sheet", PromptStrategy::SingleBox, "heuristic", "model:/no"});
            }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { svc.jobs().get("job-999999"); }), ErrorCode::NotFound);
}

TEST(Jobs, MasksAreDeterministicAcrossJobs) {
  Service svc(config_for(testing::seeded_data_dir("jobs_det")));
  const auto a = svc.jobs().submit({"sheet"});
  const auto b = svc.jobs().submit({"sheet"});
  ASSERT_EQ(svc.jobs().wait(a, kJobTimeout).state, JobState::Done);
  ASSERT_EQ(svc.jobs().wait(b, kJobTimeout).state, JobState::Done);
  EXPECT_EQ(svc.jobs().mask(a), svc.jobs().mask(b));
}

TEST(Jobs, RestartMarksUnfinishedFailed) {
  const auto root = testing::seeded_data_dir("jobs_restart");
  std::string done_id;
  {
    Service svc(config_for(root));
    done_id = svc.jobs().submit({"blobs", PromptStrategy::MultiRegion, "oracle"});
    ASSERT_EQ(svc.jobs().wait(done_id, kJobTimeout).state, JobState::Done);
  }
  JobRecord stale;
  stale.job_id = "job-000007";
  stale.request.image_id = "blobs";
  stale.state = JobState::Running;
  std::ofstream(root / "jobs" / "job-000007.json") << stale.to_json().dump();
  Service again(config_for(root));
  EXPECT_EQ(again.jobs().get(done_id).state, JobState::Done);
  EXPECT_EQ(again.jobs().get("job-000007").state, JobState::Failed);
  EXPECT_EQ(again.jobs().submit({"blobs"}), "job-000008");
}

TEST(Sessions, TwoBlobGrowsThenShrinks) {
  Service svc(config_for(testing::seeded_data_dir("ses_blobs")));
  auto& ss = svc.sessions();
  const auto fx = testing::two_blob();
  const SessionState s = ss.open("blobs", "empty");
  EXPECT_EQ(s.mask_version, 0);
  EXPECT_EQ(ss.mask(s.session_id).count(), 0u);

  const BinaryMask m0 = ss.mask(s.session_id);
  EXPECT_EQ(ss.apply_point(s.session_id, fx.plant_point, Polarity::Positive), 1);
  const BinaryMask m1 = ss.mask(s.session_id);
  EXPECT_TRUE(subset(m0, m1));
  EXPECT_GT(iou(m1, fx.plant), 0.9);

  EXPECT_EQ(ss.apply_point(s.session_id, fx.artifact_point, Polarity::Positive), 2);
  const BinaryMask m2 = ss.mask(s.session_id);
  EXPECT_TRUE(subset(m1, m2));
  EXPECT_GT(m2.count(), m1.count());

  EXPECT_EQ(ss.apply_point(s.session_id, fx.artifact_point, Polarity::Negative), 3);
  const BinaryMask m3 = ss.mask(s.session_id);
  EXPECT_TRUE(subset(m3, m2));
  EXPECT_LT(m3.count(), m2.count());
  EXPECT_FALSE(m3.get(fx.artifact_point.x, fx.artifact_point.y));
  EXPECT_TRUE(m3.get(fx.plant_point.x, fx.plant_point.y));

  EXPECT_EQ(ss.replay(s.session_id), m3);
  EXPECT_EQ(ss.mask(s.session_id, 1), m1);
}

TEST(Sessions, UndoRedoAndBounds) {
  Service svc(config_for(testing::seeded_data_dir("ses_undo")));
  auto& ss = svc.sessions();
  const auto fx = testing::two_blob();
  const auto id = ss.open("blobs", "empty").session_id;
  EXPECT_EQ(code_of([&] { ss.undo(id); }), ErrorCode::StateConflict);
  ss.apply_point(id, fx.plant_point, Polarity::Positive);
  ss.apply_point(id, fx.artifact_point, Polarity::Positive);
  const BinaryMask two = ss.mask(id);
  EXPECT_EQ(ss.undo(id), 1);
  EXPECT_EQ(ss.get(id).history.size(), 1u);
  EXPECT_EQ(ss.redo(id), 2);
  EXPECT_EQ(ss.mask(id), two);
  EXPECT_EQ(code_of([&] { ss.redo(id); }), ErrorCode::StateConflict);
  ss.undo(id);
  ss.apply_point(id, fx.artifact_point, Polarity::Negative);
  EXPECT_TRUE(ss.get(id).redo_stack.empty());
  EXPECT_EQ(ss.replay(id), ss.mask(id));
  EXPECT_EQ(code_of([&] { ss.apply_point(id, {256, 0}, Polarity::Positive); }),
            ErrorCode::InvalidArgument);
}

TEST(Sessions, UndoDepthIsBounded) {
  auto cfg = config_for(testing::seeded_data_dir("ses_depth"));
  cfg.undo_depth = 3;
  Service svc(cfg);
  auto& ss = svc.sessions();
  const auto id = ss.open("blobs", "empty").session_id;
  for (int i = 0; i < 6; ++i) ss.apply_point(id, {10 + i, 10}, Polarity::Positive);
  EXPECT_EQ(ss.get(id).undo_stack.size(), 3u);
  for (int i = 0; i < 3; ++i) ss.undo(id);
  EXPECT_EQ(code_of([&] { ss.undo(id); }), ErrorCode::StateConflict);
  EXPECT_EQ(ss.replay(id), ss.mask(id));
}

TEST(Sessions, SeededFromJobAcceptAndTag) {
  Service svc(config_for(testing::seeded_data_dir("ses_job")));
  const auto job = svc.jobs().submit({"blobs", PromptStrategy::MultiRegion, "oracle"});
  ASSERT_EQ(svc.jobs().wait(job, kJobTimeout).state, JobState::Done);
  auto& ss = svc.sessions();
  EXPECT_EQ(code_of([&] { ss.open("sheet", "job:" + job); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { ss.open("blobs", "job:job-000099"); }), ErrorCode::NotFound);
  const auto s = ss.open("blobs", "job:" + job);
  EXPECT_EQ(ss.mask(s.session_id), svc.jobs().mask(job));
  EXPECT_EQ(ss.rerun(s.session_id), 1);
  EXPECT_EQ(ss.mask(s.session_id), svc.jobs().mask(job));

  ss.tag(s.session_id, UsabilityTag::Usable);
  const auto accepted = ss.accept(s.session_id);
  EXPECT_EQ(accepted.status, SessionStatus::Accepted);
  EXPECT_EQ(load_mask(ss.export_path(s.session_id)), ss.mask(s.session_id));
  EXPECT_EQ(code_of([&] { ss.apply_point(s.session_id, {1, 1}, Polarity::Positive); }),
            ErrorCode::StateConflict);
  EXPECT_EQ(code_of([&] { ss.undo(s.session_id); }), ErrorCode::StateConflict);
  EXPECT_EQ(code_of([&] { ss.resume(s.session_id); }), ErrorCode::StateConflict);
  EXPECT_EQ(ss.list(UsabilityTag::Usable).size(), 1u);
  EXPECT_TRUE(ss.list(UsabilityTag::Unusable).empty());
}

TEST(Sessions, DiscardResumeAndReload) {
  const auto root = testing::seeded_data_dir("ses_reload");
  const auto fx = testing::two_blob();
  std::string id;
  BinaryMask before;
  {
    Service svc(config_for(root));
    id = svc.sessions().open("blobs", "empty").session_id;
    svc.sessions().apply_point(id, fx.plant_point, Polarity::Positive);
    svc.sessions().discard(id);
    EXPECT_EQ(code_of([&] { svc.sessions().apply_point(id, {1, 1}, Polarity::Positive); }),
              ErrorCode::StateConflict);
    svc.sessions().resume(id);
    before = svc.sessions().mask(id);
  }
  Service again(config_for(root));
  const auto s = again.sessions().get(id);
  EXPECT_EQ(s.status, SessionStatus::Active);
  EXPECT_EQ(s.mask_version, 1);
  EXPECT_EQ(again.sessions().mask(id), before);
  EXPECT_EQ(again.sessions().replay(id), before);
  EXPECT_EQ(again.sessions().open("blobs", "empty").session_id, "ses-000002");
}

TEST(Sessions, ConcurrentClicksOnSeparateSessions) {
  Service svc(config_for(testing::seeded_data_dir("ses_conc")));
  const auto fx = testing::two_blob();
  std::vector<std::string> ids;
  for (int i = 0; i < 4; ++i) ids.push_back(svc.sessions().open("blobs", "empty").session_id);
  std::vector<std::thread> threads;
  for (const auto& id : ids) {
    threads.emplace_back([&, id] {
      svc.sessions().apply_point(id, fx.plant_point, Polarity::Positive);
      svc.sessions().apply_point(id, fx.artifact_point, Polarity::Positive);
      svc.sessions().undo(id);
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& id : ids) EXPECT_EQ(svc.sessions().mask(id), svc.sessions().mask(ids[0]));
}

TEST(Sessions, ParseHelpers) {
  EXPECT_EQ(parse_polarity("negative"), Polarity::Negative);
  EXPECT_EQ(parse_usability_tag("unusable"), UsabilityTag::Unusable);
  EXPECT_THROW(parse_polarity("maybe"), Error);
  EXPECT_EQ(to_string(SessionStatus::Discarded), "discarded");
}

}  // namespace
}  // namespace plantsam::service
