// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include <memory>

#include "common.hpp"
#include "plantsam/dataset.hpp"
#include "plantsam/image_io.hpp"

namespace plantsam::cli {

namespace {

struct DatasetOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  std::uint64_t seed = 0;
  double train = 0.75;
  double val = 0.20;
  double test = 0.05;
  int nonblack_threshold = 0;
  bool drop_negatives = false;
  PipelineFlags flags;
};

int run_make_dataset(const DatasetOptions& o, const GlobalOptions& g) {
  Batch batch(g, "make-dataset");
  std::vector<SegmentedImage> images;
  for (const auto& path : discover_images(o.input)) {
    try {
      images.push_back({path.stem().string(), load_image(path)});
    } catch (const std::exception& e) {
      batch.fail(path.string(), e.what());
    }
  }

  DatasetConfig config;
  const PipelineConfig p = o.flags.pipeline();
  config.morphology = p.morphology;
  config.detector = p.detector;
  config.nonblack_threshold = o.nonblack_threshold;
  config.keep_negatives = !o.drop_negatives;
  const auto patches = build_detection_dataset(images, config);

  std::vector<std::string> ids;
  for (const auto& patch : patches) ids.push_back(patch.annotation.patch_id);
  const SplitManifest manifest = split_ids(ids, {o.train, o.val, o.test}, o.seed);
  write_dataset(o.output, patches, manifest);

  std::size_t boxes = 0;
  for (const auto& patch : patches) {
    boxes += patch.annotation.boxes.size();
    batch.record({{"patch_id", patch.annotation.patch_id}, {"boxes", patch.annotation.boxes.size()}});
  }
  batch.say("{} images -> {} patches, {} boxes; train {} / val {} / test {} (seed {})", images.size(),
            patches.size(), boxes, manifest.train.size(), manifest.val.size(), manifest.test.size(),
            o.seed);
  return batch.finish({{"seed", o.seed},
                       {"train", manifest.train.size()},
                       {"val", manifest.val.size()},
                       {"test", manifest.test.size()}});
}

}  // namespace

void add_make_dataset(CLI::App& app, const GlobalOptions& g, Runner& run) {
  auto o = std::make_shared<DatasetOptions>();
  CLI::App* sub = app.add_subcommand("make-dataset", "Build a YOLO detection dataset from segmented images");
  sub->footer(R"(Inputs: segmented images (plant on black) directly under --input.
Layout under --output:
  images/{split}/{patch_id}.png   patch pixels after preprocessing
  labels/{split}/{patch_id}.txt   one "0 cx cy w h" line per box, normalized
                                  to the patch size, 6 decimals
  splits.json                     {"seed", "train", "val", "test"} id lists
patch_id is {image_id}_r{row}_c{col}. Splits are a seeded shuffle of all
patch ids; the same inputs, flags and seed give byte-identical output.)");
  sub->add_option("--input", o->input, "Directory of segmented images")->required()->check(CLI::ExistingDirectory);
  sub->add_option("--output", o->output, "Dataset root")->required();
  sub->add_option("--seed", o->seed, "Split shuffle seed")->capture_default_str();
  sub->add_option("--train-ratio", o->train, "Fraction of patches in train")->capture_default_str();
  sub->add_option("--val-ratio", o->val, "Fraction of patches in val")->capture_default_str();
  sub->add_option("--test-ratio", o->test, "Fraction of patches in test")->capture_default_str();
  sub->add_option("--nonblack-threshold", o->nonblack_threshold, "Pixels brighter than this are plant")
      ->check(CLI::Range(0, 254))
      ->capture_default_str();
  sub->add_flag("--drop-negatives", o->drop_negatives, "Skip patches without any box");
  o->flags.add_morphology(*sub);
  o->flags.add_components(*sub);
  sub->callback([o, &g, &run] { run = [o, &g] { return run_make_dataset(*o, g); }; });
}

}  // namespace plantsam::cli
