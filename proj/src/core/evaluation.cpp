// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/evaluation.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>

#include "plantsam/error.hpp"
#include "plantsam/image_io.hpp"
#include "plantsam/parallel.hpp"
#include "text_util.hpp"

namespace plantsam {

namespace {

long long basis_points(double value) { return std::llround(value * 10000.0); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double parse_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("bad {} value '{}'", what, s));
  }
  return v;
}

}  // namespace

OverlapCounts overlap_counts(const BinaryMask& pred, const BinaryMask& truth) {
  if (pred.width() != truth.width() || pred.height() != truth.height()) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("prediction is {}x{} but ground truth is {}x{}", pred.width(),
                            pred.height(), truth.width(), truth.height()));
  }
  const auto p = pred.bits();
  const auto t = truth.bits();
  const auto n = static_cast<std::ptrdiff_t>(p.size());
  std::size_t inter = 0;
  std::size_t np = 0;
  std::size_t nt = 0;

#pragma omp parallel for schedule(static) reduction(+ : inter, np, nt)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    np += p[i];
    nt += t[i];
    inter += p[i] & t[i];
  }
  return {inter, np, nt};
}

double iou(const OverlapCounts& c) {
  const std::size_t u = c.union_size();
  return u == 0 ? 1.0 : static_cast<double>(c.intersection) / static_cast<double>(u);
}

double dice(const OverlapCounts& c) {
  const std::size_t total = c.predicted + c.truth;
  return total == 0 ? 1.0
                    : 2.0 * static_cast<double>(c.intersection) / static_cast<double>(total);
}

double iou(const BinaryMask& pred, const BinaryMask& truth) {
  return iou(overlap_counts(pred, truth));
}

double dice(const BinaryMask& pred, const BinaryMask& truth) {
  return dice(overlap_counts(pred, truth));
}

EvaluationRecord evaluate_pair(const std::string& image_id, const std::string& taxon,
                               const BinaryMask& pred, const BinaryMask& truth) {
  const OverlapCounts c = overlap_counts(pred, truth);
  return {image_id, taxon, iou(c), dice(c), c.predicted, c.truth};
}

double delta_points(double current, double baseline) {
  return static_cast<double>(basis_points(current) - basis_points(baseline)) / 100.0;
}

std::string format_delta(double current, double baseline) {
  const long long bp = basis_points(current) - basis_points(baseline);
  const long long mag = std::llabs(bp);
  return fmt::format("{}{}.{:02d}", bp < 0 ? '-' : '+', mag / 100, mag % 100);
}

EvaluationReport summarize(std::span<const EvaluationRecord> records, const Baseline* baseline) {
  if (records.empty()) throw Error(ErrorCode::InvalidArgument, "nothing to evaluate");

  struct Sums {
    double iou = 0.0;
    double dice = 0.0;
    std::size_t n = 0;
  };
  std::map<std::string, Sums> by_taxon;
  Sums all;
  for (const auto& r : records) {
    auto& s = by_taxon[r.taxon];
    s.iou += r.iou;
    s.dice += r.dice;
    ++s.n;
    all.iou += r.iou;
    all.dice += r.dice;
    ++all.n;
  }

  auto make = [&](const std::string& taxon, const Sums& s) {
    TaxonReport t;
    t.taxon = taxon;
    t.image_count = s.n;
    t.mean_iou = s.iou / static_cast<double>(s.n);
    t.mean_dice = s.dice / static_cast<double>(s.n);
    if (baseline) {
      if (auto it = baseline->find(taxon); it != baseline->end()) {
        t.delta_iou = delta_points(t.mean_iou, it->second.iou);
        t.delta_dice = delta_points(t.mean_dice, it->second.dice);
      }
    }
    return t;
  };

  EvaluationReport report;
  for (const auto& [taxon, sums] : by_taxon) report.taxa.push_back(make(taxon, sums));
  report.overall = make("ALL", all);

  if (baseline) {
    for (const auto& [taxon, means] : *baseline) {
      if (taxon != "ALL" && !by_taxon.contains(taxon)) {
        report.warnings.push_back(
            fmt::format("baseline taxon '{}' has no evaluated images; ignored", taxon));
      }
    }
  }
  return report;
}

std::string report_to_csv(const EvaluationReport& report) {
  std::string out = "taxon,n,mean_iou,mean_dice,delta_iou,delta_dice\n";
  auto row = [&](const TaxonReport& t) {
    // Deltas hold whole basis points.
    auto fmt_delta = [](const std::optional<double>& d) -> std::string {
      if (!d) return "";
      const long long bp = std::llround(*d * 100.0);
      const long long mag = std::llabs(bp);
      return fmt::format("{}{}.{:02d}", bp < 0 ? '-' : '+', mag / 100, mag % 100);
    };
    out += fmt::format("{},{},{:.4f},{:.4f},{},{}\n", t.taxon, t.image_count, t.mean_iou,
                       t.mean_dice, fmt_delta(t.delta_iou), fmt_delta(t.delta_dice));
  };
  for (const auto& t : report.taxa) row(t);
  row(report.overall);
  return out;
}

Baseline baseline_from_csv(const std::string& text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::InvalidArgument, "empty baseline report");
  const auto header = detail::split_fields(lines.front());
  auto column = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw Error(ErrorCode::InvalidArgument, "baseline report lacks column " + name);
  };
  const std::size_t c_taxon = column("taxon");
  const std::size_t c_iou = column("mean_iou");
  const std::size_t c_dice = column("mean_dice");

  Baseline baseline;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = detail::split_fields(lines[i]);
    if (f.size() < header.size()) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("baseline line {} is short", i + 1));
    }
    baseline[f[c_taxon]] = {parse_double(f[c_iou], "mean_iou"),
                            parse_double(f[c_dice], "mean_dice")};
  }
  return baseline;
}

Baseline load_baseline(const std::filesystem::path& path) {
  return baseline_from_csv(read_file(path));
}

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path) {
  const auto lines = detail::split_lines(read_file(path));
  if (lines.empty()) throw Error(ErrorCode::InvalidArgument, "empty manifest " + path.string());
  const auto header = detail::split_fields(lines.front());
  const std::vector<std::string> expected{"image_id", "taxon", "pred_path", "truth_path"};
  if (header != expected) {
    throw Error(ErrorCode::InvalidArgument,
                "manifest header must be image_id,taxon,pred_path,truth_path");
  }
  const auto base = path.parent_path();
  std::vector<ManifestRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = detail::split_fields(lines[i]);
    if (f.size() != 4) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("{}:{}: expected 4 fields", path.string(), i + 1));
    }
    auto resolve = [&](const std::string& p) {
      std::filesystem::path fp(p);
      return fp.is_absolute() ? fp : base / fp;
    };
    rows.push_back({f[0], f[1], resolve(f[2]), resolve(f[3])});
  }
  return rows;
}

ManifestEvaluation evaluate_manifest(std::span<const ManifestRow> rows, bool keep_going,
                                     int workers) {
  const auto n = static_cast<int>(rows.size());
  std::vector<std::optional<EvaluationRecord>> records(rows.size());
  std::vector<std::string> errors(rows.size());

#pragma omp parallel for schedule(dynamic) num_threads(parallel::resolve_workers(workers))
  for (int i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    try {
      records[static_cast<std::size_t>(i)] = evaluate_pair(
          row.image_id, row.taxon, load_mask(row.pred_path), load_mask(row.truth_path));
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = fmt::format("{}: {}", row.image_id, e.what());
    }
  }

  ManifestEvaluation out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (records[i]) {
      out.records.push_back(*records[i]);
    } else {
      if (!keep_going) throw Error(ErrorCode::Io, errors[i]);
      out.failures.push_back(errors[i]);
    }
  }
  return out;
}

}  // namespace plantsam
