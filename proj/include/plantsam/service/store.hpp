// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace plantsam::service {

// Data directory layout:
//   images/{image_id}.{png,jpg,jpeg}   inputs served by GET /images/{id}
//   masks/{image_id}.png               ground truth for the oracle detector
//   jobs/{job_id}.json, .png           job records and result masks
//   sessions/{session_id}/             session.json and v{n}.png per mask version
//   exports/{session_id}.png           accepted masks
class DataStore {
 public:
  explicit DataStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path images_dir() const { return root_ / "images"; }
  std::filesystem::path masks_dir() const { return root_ / "masks"; }
  std::filesystem::path jobs_dir() const { return root_ / "jobs"; }
  std::filesystem::path sessions_dir() const { return root_ / "sessions"; }
  std::filesystem::path exports_dir() const { return root_ / "exports"; }

  /// Image file for `image_id`, if any. Throws InvalidArgument for a malformed id.
  std::optional<std::filesystem::path> find_image(const std::string& image_id) const;
  std::filesystem::path oracle_mask(const std::string& image_id) const;

 private:
  std::filesystem::path root_;
};

/// Ids are 1 to 128 characters from [A-Za-z0-9._-] and do not start with a dot.
bool valid_id(const std::string& id);
void require_valid_id(const std::string& id, const char* what);

/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace plantsam::service
