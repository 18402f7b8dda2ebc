// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plantsam/image.hpp"

namespace plantsam {

struct OverlapCounts {
  std::size_t intersection = 0;
  std::size_t predicted = 0;
  std::size_t truth = 0;

  std::size_t union_size() const { return predicted + truth - intersection; }
};

OverlapCounts overlap_counts(const BinaryMask& pred, const BinaryMask& truth);

// Both metrics treat two empty masks as perfect agreement (1.0).
double iou(const OverlapCounts& counts);
double dice(const OverlapCounts& counts);
double iou(const BinaryMask& pred, const BinaryMask& truth);
double dice(const BinaryMask& pred, const BinaryMask& truth);

struct EvaluationRecord {
  std::string image_id;
  std::string taxon;
  double iou = 0.0;
  double dice = 0.0;
  std::size_t predicted_foreground = 0;
  std::size_t truth_foreground = 0;
};

EvaluationRecord evaluate_pair(const std::string& image_id, const std::string& taxon,
                               const BinaryMask& pred, const BinaryMask& truth);

struct MetricMeans {
  double iou = 0.0;
  double dice = 0.0;
};

/// Per-taxon means of a previous run, keyed by taxon ("ALL" for overall).
using Baseline = std::map<std::string, MetricMeans>;

struct TaxonReport {
  std::string taxon;
  double mean_iou = 0.0;
  double mean_dice = 0.0;
  std::size_t image_count = 0;
  /// Percentage points against the baseline, from means rounded to 4 places.
  std::optional<double> delta_iou;
  std::optional<double> delta_dice;
};

struct EvaluationReport {
  /// Sorted by taxon name.
  std::vector<TaxonReport> taxa;
  /// Pooled over every image; taxon "ALL".
  TaxonReport overall;
  std::vector<std::string> warnings;
};

EvaluationReport summarize(std::span<const EvaluationRecord> records,
                           const Baseline* baseline = nullptr);

/// Signed difference in percentage points with two decimals ("+1.59",
/// "-0.44", "+0.00"). Both inputs are rounded to 4 decimals first, so the
/// result matches the difference of the printed means.
std::string format_delta(double current, double baseline);
/// Same difference as a number.
double delta_points(double current, double baseline);

/// `taxon,n,mean_iou,mean_dice,delta_iou,delta_dice`, one row per taxon then
/// `ALL`; deltas are empty without a baseline.
std::string report_to_csv(const EvaluationReport& report);
Baseline baseline_from_csv(const std::string& text);
Baseline load_baseline(const std::filesystem::path& path);

struct ManifestRow {
  std::string image_id;
  std::string taxon;
  std::filesystem::path pred_path;
  std::filesystem::path truth_path;
};

/// `image_id,taxon,pred_path,truth_path` with header; relative paths are
/// resolved against the manifest's directory.
std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);

/// Loads and scores every row. Failures are collected per row when
/// `keep_going` is set, otherwise the first one is thrown.
struct ManifestEvaluation {
  std::vector<EvaluationRecord> records;
  std::vector<std::string> failures;
};
ManifestEvaluation evaluate_manifest(std::span<const ManifestRow> rows, bool keep_going,
                                     int workers = 0);

}  // namespace plantsam
