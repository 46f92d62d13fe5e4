// Copyright 2026 The tirvis Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "common.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>

namespace tirvis::cli {

namespace fs = std::filesystem;

void prepare_output_dir(const fs::path& dir, bool force) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw UsageError("output path '" + dir.string() + "' exists and is not a directory");
    if (!fs::is_empty(dir) && !force) {
      throw UsageError("output directory '" + dir.string() + "' is not empty; pass --force to overwrite");
    }
  }
  fs::create_directories(dir);
}

void check_overwrite(const fs::path& file, bool force) {
  if (fs::exists(file) && !force) {
    throw UsageError("'" + file.string() + "' already exists; pass --force to overwrite");
  }
}

void require_dir(const fs::path& dir, const std::string& role) {
  if (!fs::is_directory(dir)) throw UsageError(role + " directory '" + dir.string() + "' does not exist");
}

std::vector<fs::path> list_pngs(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + file.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + file.string() + "'");
}

void warn(const std::string& message) { std::cerr << "warning: " << message << "\n"; }
void info(const std::string& message) { std::cerr << message << "\n"; }

}  // namespace tirvis::cli
