// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <memory>

#include "common.hpp"
#include "plantsam/error.hpp"
#include "plantsam/evaluation.hpp"

namespace plantsam::cli {

namespace {

struct EvalOptions {
  std::filesystem::path manifest;
  std::filesystem::path output;
  std::filesystem::path baseline;
  std::filesystem::path per_image;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

Json report_row(const TaxonReport& t) {
  Json j{{"taxon", t.taxon}, {"n", t.image_count}, {"mean_iou", t.mean_iou}, {"mean_dice", t.mean_dice}};
  j["delta_iou"] = t.delta_iou ? Json(*t.delta_iou) : Json(nullptr);
  j["delta_dice"] = t.delta_dice ? Json(*t.delta_dice) : Json(nullptr);
  return j;
}

int run_eval(const EvalOptions& o, const GlobalOptions& g) {
  const auto rows = read_manifest(o.manifest);
  Batch batch(g, "eval");
  ManifestEvaluation evaluation;
  try {
    evaluation = evaluate_manifest(rows, g.keep_going, g.workers);
  } catch (const Error& e) {
    batch.fail(o.manifest.string(), e.what());
  }
  for (const auto& f : evaluation.failures) batch.fail(o.manifest.string(), f);

  std::optional<Baseline> baseline;
  if (!o.baseline.empty()) baseline = load_baseline(o.baseline);
  const EvaluationReport report = summarize(evaluation.records, baseline ? &*baseline : nullptr);
  for (const auto& w : report.warnings) fmt::print(stderr, "warning: {}\n", w);

  const std::string csv = report_to_csv(report);
  if (!o.output.empty()) {
    write_text(o.output, csv);
  } else if (!g.json) {
    fmt::print("{}", csv);
  }
  if (!o.per_image.empty()) {
    std::string text = "image_id,taxon,iou,dice\n";
    for (const auto& r : evaluation.records) {
      text += fmt::format("{},{},{:.6f},{:.6f}\n", r.image_id, r.taxon, r.iou, r.dice);
    }
    write_text(o.per_image, text);
  }

  for (const auto& r : evaluation.records) {
    batch.record({{"image_id", r.image_id}, {"taxon", r.taxon}, {"iou", r.iou}, {"dice", r.dice}});
  }
  Json taxa = Json::array();
  for (const auto& t : report.taxa) taxa.push_back(report_row(t));
  return batch.finish({{"taxa", taxa}, {"overall", report_row(report.overall)}, {"warnings", report.warnings}});
}

}  // namespace

void add_eval(CLI::App& app, const GlobalOptions& g, Runner& run) {
  auto o = std::make_shared<EvalOptions>();
  CLI::App* sub = app.add_subcommand("eval", "Score predicted masks against ground truth");
  sub->footer(R"(Manifest CSV header: image_id,taxon,pred_path,truth_path
  Relative paths resolve against the manifest's directory.
Report CSV header: taxon,n,mean_iou,mean_dice,delta_iou,delta_dice
  One row per taxon in name order, then an ALL row. Means have 4 decimals;
  deltas are signed percentage points with 2 decimals, empty without --baseline.
Baseline CSV: taxon,mean_iou,mean_dice (extra columns are ignored).)");
  sub->add_option("--manifest", o->manifest, "Evaluation manifest CSV")->required()->check(CLI::ExistingFile);
  sub->add_option("--output", o->output, "Report CSV path; printed to stdout when omitted");
  sub->add_option("--baseline", o->baseline, "Per-taxon baseline means for the delta columns")
      ->check(CLI::ExistingFile);
  sub->add_option("--per-image", o->per_image, "Also write per-image scores to this CSV");
  sub->callback([o, &g, &run] { run = [o, &g] { return run_eval(*o, g); }; });
}

}  // namespace plantsam::cli
