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

#ifndef TIRVIS_TOOLS_COMMANDS_HPP
#define TIRVIS_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tirvis::cli {

struct TrainArgs {
  std::optional<std::filesystem::path> config;
  std::filesystem::path data;
  std::filesystem::path out;
  std::optional<int> epochs;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;  // key=value
  std::optional<std::filesystem::path> resume;
  bool force = false;
};

struct InferArgs {
  std::filesystem::path checkpoint;
  std::filesystem::path input;
  std::filesystem::path out;
  std::string direction = "x2y";
  bool force = false;
};

struct EvalArgs {
  std::filesystem::path generated;
  std::filesystem::path target;
  std::optional<std::filesystem::path> out;
  int decimals = 2;
  bool force = false;
};

struct SynthArgs {
  std::filesystem::path out;
  int n = 200;
  std::string size = "64";
  std::uint64_t seed = 42;
  double test_frac = 0.0;
  bool force = false;
};

/// Each returns an exit code; UsageError and std::invalid_argument propagate
/// to the caller, which maps them to exit code 2.
int cmd_train(const TrainArgs& args);
int cmd_infer(const InferArgs& args);
int cmd_eval(const EvalArgs& args);
int cmd_synth(const SynthArgs& args);

}  // namespace tirvis::cli

#endif  // TIRVIS_TOOLS_COMMANDS_HPP
