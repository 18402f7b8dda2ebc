// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include <memory>

#include "common.hpp"
#include "plantsam/error.hpp"
#include "plantsam/image_io.hpp"
#include "plantsam/service/backends.hpp"
#include "plantsam/tiling.hpp"

namespace plantsam::cli {

namespace {

struct SegmentOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  std::filesystem::path truth_dir;
  std::filesystem::path dump_patches;
  std::string strategy = "multi_region";
  std::string detector = "heuristic";
  std::string segmenter = "reference";
  bool no_clip = false;
  PipelineFlags flags;
};

int run_segment(const SegmentOptions& o, const GlobalOptions& g) {
  PipelineConfig config = o.flags.pipeline();
  config.strategy = parse_strategy(o.strategy);
  config.clip_to_boxes = !o.no_clip;
  config.workers = g.workers;
  service::validate_detector_name(o.detector);
  if (o.detector == "oracle" && o.truth_dir.empty()) {
    throw Error(ErrorCode::InvalidArgument, "--detector oracle needs --truth-dir");
  }
  const auto segmenter = service::make_segmenter(o.segmenter);
  std::unique_ptr<Detector> shared_detector;
  if (o.detector != "oracle") shared_detector = service::make_detector(o.detector, std::nullopt, config.detector);

  Batch batch(g, "segment");
  const auto inputs = discover_images(o.input);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& path = inputs[i];
    const std::string id = path.stem().string();
    try {
      const RasterImage image = load_image(path);
      std::unique_ptr<Detector> oracle;
      if (!shared_detector) {
        oracle = service::make_detector("oracle", o.truth_dir / (id + ".png"), config.detector);
      }
      const Detector& detector = shared_detector ? *shared_detector : *oracle;
      const PipelineResult result = segment_image(image, detector, *segmenter, config);
      save_mask(o.output / (id + ".png"), result.mask);
      if (!o.dump_patches.empty()) {
        write_patch_dump(o.dump_patches, id, split(preprocess(image, config.morphology), result.plan),
                         result.plan);
      }
      std::size_t boxes = 0;
      for (const auto& p : result.patches) boxes += p.prompts.boxes.size();
      batch.record({{"image_id", id},
                    {"width", image.width()},
                    {"height", image.height()},
                    {"patch_size", result.plan.patch_size},
                    {"patches", result.plan.patch_count()},
                    {"boxes", boxes},
                    {"foreground_pixels", result.mask.count()},
                    {"seconds", result.seconds}});
      batch.say("[{}/{}] {}: {}x{}, {} patches of {}, {} boxes, {:.3f} s", i + 1, inputs.size(), id,
                image.width(), image.height(), result.plan.patch_count(), result.plan.patch_size,
                boxes, result.seconds);
    } catch (const std::exception& e) {
      batch.fail(path.string(), e.what());
    }
  }
  return batch.finish({{"strategy", o.strategy}, {"detector", o.detector}, {"segmenter", o.segmenter}});
}

}  // namespace

void add_segment(CLI::App& app, const GlobalOptions& g, Runner& run) {
  auto o = std::make_shared<SegmentOptions>();
  CLI::App* sub = app.add_subcommand("segment", "Segment every image in a directory");
  sub->footer(R"(Inputs: *.png, *.jpg, *.jpeg directly under --input, processed in name order.
Outputs: --output/{image_id}.png, 8-bit masks with 0 = background, 255 = plant.
Patch dump: {image_id}_r{row}_c{col}.png plus {image_id}.plan.json.
Backends: --detector heuristic | oracle | model:<adapter.json>;
          --segmenter reference | model:<adapter.json>.
The oracle detector reads --truth-dir/{image_id}.png.)");
  sub->add_option("--input", o->input, "Directory of specimen images")->required()->check(CLI::ExistingDirectory);
  sub->add_option("--output", o->output, "Directory for the masks")->required();
  sub->add_option("--strategy", o->strategy, "Prompt strategy")
      ->check(CLI::IsMember({"single_box", "multi_region"}))
      ->capture_default_str();
  sub->add_option("--detector", o->detector, "Detector backend")->capture_default_str();
  sub->add_option("--segmenter", o->segmenter, "Segmenter backend")->capture_default_str();
  sub->add_option("--truth-dir", o->truth_dir, "Ground-truth masks for the oracle detector");
  sub->add_option("--dump-patches", o->dump_patches, "Also write the preprocessed patches here");
  sub->add_flag("--no-clip", o->no_clip, "Keep segmenter output outside its prompt boxes");
  o->flags.add_morphology(*sub);
  o->flags.add_detector(*sub);
  sub->callback([o, &g, &run] { run = [o, &g] { return run_segment(*o, g); }; });
}

}  // namespace plantsam::cli
