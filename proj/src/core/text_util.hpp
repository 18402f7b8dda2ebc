// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Minimal comma-separated parsing for the toolkit's own manifests. Fields
// are never quoted.

#include <string>
#include <string_view>
#include <vector>

namespace plantsam::detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_fields(std::string_view line, char sep = ',') {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    fields.emplace_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find('\n', start);
    std::string_view line = text.substr(start, pos - start);
    if (!trim(line).empty()) lines.emplace_back(trim(line));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return lines;
}

}  // namespace plantsam::detail
