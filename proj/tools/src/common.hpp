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

#ifndef TIRVIS_TOOLS_COMMON_HPP
#define TIRVIS_TOOLS_COMMON_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace tirvis::cli {

enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kUsageError = 2 };

/// Bad flags, missing inputs or refused overwrites; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Creates `dir` if needed. An existing non-empty directory is refused unless
/// `force` is set.
void prepare_output_dir(const std::filesystem::path& dir, bool force);

/// Refuses to replace an existing file unless `force` is set.
void check_overwrite(const std::filesystem::path& file, bool force);

/// Requires an existing directory; the message names the path.
void require_dir(const std::filesystem::path& dir, const std::string& role);

/// *.png files of a directory, sorted by name.
std::vector<std::filesystem::path> list_pngs(const std::filesystem::path& dir);

/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

void write_text(const std::filesystem::path& file, const std::string& text);

void warn(const std::string& message);
void info(const std::string& message);

}  // namespace tirvis::cli

#endif  // TIRVIS_TOOLS_COMMON_HPP
