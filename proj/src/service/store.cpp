// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "plantsam/service/store.hpp"

#include <fstream>
#include <iterator>

#include "plantsam/error.hpp"

namespace plantsam::service {

DataStore::DataStore(std::filesystem::path root) : root_(std::move(root)) {
  for (const auto& dir : {images_dir(), masks_dir(), jobs_dir(), sessions_dir(), exports_dir()}) {
    std::filesystem::create_directories(dir);
  }
}

std::optional<std::filesystem::path> DataStore::find_image(const std::string& image_id) const {
  require_valid_id(image_id, "image id");
  for (const char* ext : {".png", ".jpg", ".jpeg", ".PNG", ".JPG", ".JPEG"}) {
    auto path = images_dir() / (image_id + ext);
    if (std::filesystem::is_regular_file(path)) return path;
  }
  return std::nullopt;
}

std::filesystem::path DataStore::oracle_mask(const std::string& image_id) const {
  require_valid_id(image_id, "image id");
  return masks_dir() / (image_id + ".png");
}

bool valid_id(const std::string& id) {
  if (id.empty() || id.size() > 128 || id.front() == '.') return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

void require_valid_id(const std::string& id, const char* what) {
  if (!valid_id(id)) throw Error(ErrorCode::InvalidArgument, std::string("malformed ") + what + " '" + id + "'");
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace plantsam::service
