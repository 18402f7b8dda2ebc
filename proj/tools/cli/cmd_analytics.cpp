// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <map>
#include <memory>

#include "common.hpp"
#include "plantsam/analytics.hpp"
#include "plantsam/error.hpp"
#include "plantsam/image_io.hpp"
#include "plantsam/ratio_study.hpp"

namespace plantsam::cli {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

std::optional<CanvasSize> parse_canvas(const std::string& text) {
  if (text.empty()) return std::nullopt;
  int w = 0;
  int h = 0;
  char x = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%d%c%d%c", &w, &x, &h, &extra) != 3 || x != 'x' || w < 1 || h < 1) {
    throw Error(ErrorCode::InvalidArgument, "canvas must look like 1024x768, got '" + text + "'");
  }
  return CanvasSize{w, h};
}

// heatmap

struct HeatmapOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  std::string alignment = "center";
  std::string canvas;
};

int run_heatmap(const HeatmapOptions& o, const GlobalOptions& g) {
  Batch batch(g, "heatmap");
  const auto canvas = parse_canvas(o.canvas);
  std::vector<BinaryMask> masks;
  for (const auto& path : discover_masks(o.input)) {
    try {
      masks.push_back(load_mask(path));
      batch.record({{"mask", path.filename().string()}});
    } catch (const std::exception& e) {
      batch.fail(path.string(), e.what());
    }
  }
  if (masks.empty()) throw Error(ErrorCode::InvalidArgument, "no masks under " + o.input.string());

  const HeatMap map = heatmap(masks, canvas, parse_alignment(o.alignment));
  save_png(o.output, render_heatmap(map));
  auto sidecar = o.output;
  sidecar.replace_extension(".f32");
  write_heatmap_values(sidecar, map);
  batch.say("heatmap of {} masks, {}x{}: {} (+ {})", map.sample_count, map.width, map.height,
            o.output.string(), sidecar.filename().string());
  return batch.finish({{"width", map.width},
                       {"height", map.height},
                       {"samples", map.sample_count},
                       {"image", o.output.string()},
                       {"values", sidecar.string()}});
}

// coverage

struct CoverageOptions {
  std::filesystem::path input;
  std::filesystem::path output;
};

int run_coverage(const CoverageOptions& o, const GlobalOptions& g) {
  Batch batch(g, "coverage");
  std::vector<std::filesystem::path> taxa;
  for (const auto& e : std::filesystem::directory_iterator(o.input)) {
    if (e.is_directory()) taxa.push_back(e.path());
  }
  std::sort(taxa.begin(), taxa.end());
  if (taxa.empty()) throw Error(ErrorCode::InvalidArgument, "no taxon directories under " + o.input.string());

  std::map<std::string, std::vector<BinaryMask>> groups;
  for (const auto& dir : taxa) {
    const std::string taxon = dir.filename().string();
    for (const auto& path : discover_masks(dir)) {
      try {
        BinaryMask m = load_mask(path);
        batch.record({{"taxon", taxon}, {"mask", path.filename().string()}, {"plant_fraction", plant_fraction(m)}});
        groups[taxon].push_back(std::move(m));
      } catch (const std::exception& e) {
        batch.fail(path.string(), e.what());
      }
    }
  }
  const auto stats = coverage(groups);
  const std::string csv = coverage_to_csv(stats);
  if (!o.output.empty()) {
    write_text(o.output, csv);
  } else if (!g.json) {
    fmt::print("{}", csv);
  }
  Json rows = Json::array();
  for (const auto& s : stats) {
    rows.push_back({{"taxon", s.taxon}, {"n", s.image_count}, {"plant_pct", s.plant_pct},
                    {"background_pct", s.background_pct}});
  }
  return batch.finish({{"taxa", rows}});
}

// crop

struct CropOptions {
  std::filesystem::path images;
  std::filesystem::path masks;
  std::filesystem::path output;
  int margin = 0;
  bool keep_background = false;
};

int run_crop(const CropOptions& o, const GlobalOptions& g) {
  Batch batch(g, "crop");
  std::string boxes = "image_id,x_min,y_min,x_max,y_max\n";
  for (const auto& path : discover_images(o.images)) {
    const std::string id = path.stem().string();
    try {
      const CropResult r = crop_to_content(load_image(path), load_mask(o.masks / (id + ".png")),
                                           o.margin, o.keep_background);
      save_png(o.output / (id + ".png"), r.image);
      boxes += fmt::format("{},{},{},{},{}\n", id, r.box.x_min, r.box.y_min, r.box.x_max, r.box.y_max);
      batch.record({{"image_id", id}, {"box", {r.box.x_min, r.box.y_min, r.box.x_max, r.box.y_max}}});
      batch.say("{}: {}x{}", id, r.image.width(), r.image.height());
    } catch (const std::exception& e) {
      batch.fail(path.string(), e.what());
    }
  }
  write_text(o.output / "crops.csv", boxes);
  return batch.finish();
}

// ratio-study

struct RatioOptions {
  std::filesystem::path input;
  std::filesystem::path per_image;
  PipelineFlags flags;
};

int run_ratio_study(const RatioOptions& o, const GlobalOptions& g) {
  Batch batch(g, "ratio-study");
  DetectorConfig config = o.flags.detector();
  std::vector<ImageRatios> all;
  for (const auto& path : discover_masks(o.input)) {
    try {
      ImageRatios r = image_box_ratios(path.stem().string(), load_mask(path), config);
      batch.record({{"image_id", r.image_id},
                    {"single_box_boxes", r.single_box.boxes},
                    {"single_box_mean", r.single_box.boxes ? Json(r.single_box.mean()) : Json(nullptr)},
                    {"multi_region_boxes", r.multi_region.boxes},
                    {"multi_region_mean", r.multi_region.boxes ? Json(r.multi_region.mean()) : Json(nullptr)}});
      all.push_back(std::move(r));
    } catch (const std::exception& e) {
      batch.fail(path.string(), e.what());
    }
  }
  const RatioSummary s = summarize_ratios(all);
  if (!o.per_image.empty()) {
    std::string text = "image_id,single_box_boxes,single_box_ratio,multi_region_boxes,multi_region_ratio\n";
    for (const auto& r : all) {
      if (r.single_box.boxes == 0) continue;
      text += fmt::format("{},{},{:.4f},{},{:.4f}\n", r.image_id, r.single_box.boxes, r.single_box.mean(),
                          r.multi_region.boxes, r.multi_region.mean());
    }
    write_text(o.per_image, text);
  }
  batch.say("images: {} (skipped {} without plant pixels)", s.images, s.skipped);
  batch.say("single_box   mean ratio: {:.2f}  (per-image mean {:.2f})", s.single_box_pooled,
            s.single_box_image_mean);
  batch.say("multi_region mean ratio: {:.2f}  (per-image mean {:.2f})", s.multi_region_pooled,
            s.multi_region_image_mean);
  return batch.finish({{"images", s.images},
                       {"skipped", s.skipped},
                       {"single_box_mean", s.single_box_pooled},
                       {"multi_region_mean", s.multi_region_pooled},
                       {"single_box_image_mean", s.single_box_image_mean},
                       {"multi_region_image_mean", s.multi_region_image_mean}});
}

}  // namespace

void add_heatmap(CLI::App& app, const GlobalOptions& g, Runner& run) {
  auto o = std::make_shared<HeatmapOptions>();
  CLI::App* sub = app.add_subcommand("heatmap", "Per-pixel foreground frequency over a set of masks");
  sub->footer(R"(Inputs: *.png masks directly under --input (any nonzero value is plant).
Outputs: --output as an 8-bit RGB PNG rendered through a fixed color ramp, and
a sidecar with the same stem and extension .f32 holding width*height
little-endian float32 values in [0, 1], row-major.
The default canvas is the largest mask width by the largest mask height.)");
  sub->add_option("--input", o->input, "Directory of masks")->required()->check(CLI::ExistingDirectory);
  sub->add_option("--output", o->output, "Heatmap PNG path")->required();
  sub->add_option("--alignment", o->alignment, "Placement of smaller masks")
      ->check(CLI::IsMember({"center", "none"}))
      ->capture_default_str();
  sub->add_option("--canvas", o->canvas, "Canvas size as WIDTHxHEIGHT");
  sub->callback([o, &g, &run] { run = [o, &g] { return run_heatmap(*o, g); }; });
}

void add_coverage(CLI::App& app, const GlobalOptions& g, Runner& run) {
  auto o = std::make_shared<CoverageOptions>();
  CLI::App* sub = app.add_subcommand("coverage", "Average plant and background percentages per taxon");
  sub->footer(R"(Input layout: --input/{taxon}/*.png, one subdirectory per taxon.
Output CSV header: taxon,n,plant_pct,background_pct
  Percentages have 2 decimals and each row sums to 100.00; rows are ordered
  by plant_pct, highest first.)");
  sub->add_option("--input", o->input, "Directory of per-taxon mask directories")
      ->required()
      ->check(CLI::ExistingDirectory);
  sub->add_option("--output", o->output, "CSV path; printed to stdout when omitted");
  sub->callback([o, &g, &run] { run = [o, &g] { return run_coverage(*o, g); }; });
}

void add_crop(CLI::App& app, const GlobalOptions& g, Runner& run) {
  auto o = std::make_shared<CropOptions>();
  CLI::App* sub = app.add_subcommand("crop", "Crop images to their mask's bounding box");
  sub->footer(R"(Pairs --images/{id}.{png,jpg,jpeg} with --masks/{id}.png.
Outputs: --output/{id}.png and --output/crops.csv with header
image_id,x_min,y_min,x_max,y_max (inclusive source coordinates).
Background pixels become black unless --keep-background is given.)");
  sub->add_option("--images", o->images, "Directory of images")->required()->check(CLI::ExistingDirectory);
  sub->add_option("--masks", o->masks, "Directory of masks")->required()->check(CLI::ExistingDirectory);
  sub->add_option("--output", o->output, "Directory for the crops")->required();
  sub->add_option("--margin", o->margin, "Pixels added around the tight box")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_flag("--keep-background", o->keep_background, "Keep pixels outside the mask");
  sub->callback([o, &g, &run] { run = [o, &g] { return run_crop(*o, g); }; });
}

void add_ratio_study(CLI::App& app, const GlobalOptions& g, Runner& run) {
  auto o = std::make_shared<RatioOptions>();
  CLI::App* sub = app.add_subcommand("ratio-study", "Compare plant-to-box ratios of the two prompt strategies");
  sub->footer(R"(Inputs: *.png plant masks directly under --input. Each mask is patched like
a specimen image. Every patch holding a component of at least
--min-component-pixels contributes one single_box hull box and one
multi_region box per such component. The headline numbers average the
plant-to-box ratio over all boxes; per-image means are shown alongside.
--per-image CSV header:
image_id,single_box_boxes,single_box_ratio,multi_region_boxes,multi_region_ratio)");
  sub->add_option("--input", o->input, "Directory of plant masks")->required()->check(CLI::ExistingDirectory);
  sub->add_option("--per-image", o->per_image, "Also write per-image ratios to this CSV");
  o->flags.add_components(*sub);
  sub->callback([o, &g, &run] { run = [o, &g] { return run_ratio_study(*o, g); }; });
}

}  // namespace plantsam::cli
