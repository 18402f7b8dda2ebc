// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "plantsam/pipeline.hpp"

namespace plantsam::cli {

using Json = nlohmann::ordered_json;

struct GlobalOptions {
  bool json = false;
  bool keep_going = false;
  int workers = 0;
};

/// Thrown to stop a batch after the first failure when --keep-going is off.
struct BatchAborted {};

/// Collects per-input results and failures for one subcommand run.
class Batch {
 public:
  Batch(const GlobalOptions& global, std::string command);

  void record(Json item) { items_.push_back(std::move(item)); }
  /// Prints a one-line diagnostic; throws BatchAborted unless --keep-going.
  void fail(const std::string& input, const std::string& message);
  std::size_t failures() const { return failures_.size(); }

  /// Emits the --json summary and returns the exit code.
  int finish(Json extra = Json::object());

  /// Prints a human-readable line unless --json is set.
  template <typename... Args>
  void say(fmt::format_string<Args...> f, Args&&... args) const {
    if (!global_.json) fmt::print("{}\n", fmt::format(f, std::forward<Args>(args)...));
  }

 private:
  const GlobalOptions& global_;
  std::string command_;
  Json items_ = Json::array();
  std::vector<std::string> failures_;
};

/// Regular files directly under `dir` with one of `extensions`, sorted by name.
std::vector<std::filesystem::path> discover(const std::filesystem::path& dir,
                                            std::initializer_list<const char*> extensions);
std::vector<std::filesystem::path> discover_images(const std::filesystem::path& dir);
std::vector<std::filesystem::path> discover_masks(const std::filesystem::path& dir);

/// Morphology, connectivity and detector-threshold flags shared by several subcommands.
struct PipelineFlags {
  int morphology_radius = 1;
  int morphology_passes = 1;
  int connectivity = 8;
  double confidence_threshold = 0.25;
  int min_component_pixels = 16;

  void add_morphology(CLI::App& app);
  void add_components(CLI::App& app);
  void add_detector(CLI::App& app);
  PipelineConfig pipeline() const;
  DetectorConfig detector() const;
};

using Runner = std::function<int()>;

void add_segment(CLI::App& app, const GlobalOptions& g, Runner& run);
void add_eval(CLI::App& app, const GlobalOptions& g, Runner& run);
void add_heatmap(CLI::App& app, const GlobalOptions& g, Runner& run);
void add_coverage(CLI::App& app, const GlobalOptions& g, Runner& run);
void add_make_dataset(CLI::App& app, const GlobalOptions& g, Runner& run);
void add_crop(CLI::App& app, const GlobalOptions& g, Runner& run);
void add_ratio_study(CLI::App& app, const GlobalOptions& g, Runner& run);
void add_serve(CLI::App& app, const GlobalOptions& g, Runner& run);

/// Entry point shared by the executable and in-process tests.
int run(int argc, const char* const* argv);

}  // namespace plantsam::cli
