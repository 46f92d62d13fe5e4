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

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "commands.hpp"
#include "common.hpp"
#include "tirvis/metrics.hpp"
#include "tirvis/png_io.hpp"

namespace tirvis::cli {

namespace fs = std::filesystem;

int cmd_eval(const EvalArgs& a) {
  require_dir(a.generated, "generated");
  require_dir(a.target, "target");
  const fs::path out = a.out.value_or(a.generated);
  fs::create_directories(out);
  const auto csv_path = out / "metrics.csv";
  const auto summary_path = out / "summary.txt";
  check_overwrite(csv_path, a.force);
  check_overwrite(summary_path, a.force);

  std::map<std::string, fs::path> targets;
  for (const auto& p : list_pngs(a.target)) targets.emplace(p.stem().string(), p);
  std::vector<metrics::MetricRecord> records;
  std::vector<std::string> unmatched;
  for (const auto& p : list_pngs(a.generated)) {
    const auto it = targets.find(p.stem().string());
    if (it == targets.end()) {
      unmatched.push_back(p.filename().string());
      continue;
    }
    auto generated = data::read_png(p);
    auto target = data::read_png(it->second);
    targets.erase(it);
    if (generated.channels() == 1) generated = data::replicate_to_rgb(generated);
    if (target.channels() == 1) target = data::replicate_to_rgb(target);
    // Targets follow the model's output resolution.
    if (target.height() != generated.height() || target.width() != generated.width()) {
      target = data::resize_bilinear(target, generated.height(), generated.width());
    }
    records.push_back(metrics::evaluate(generated, target, p.filename().string()));
  }
  for (const auto& [stem, path] : targets) unmatched.push_back(path.filename().string());
  if (!unmatched.empty()) {
    std::string list;
    for (const auto& u : unmatched) list += (list.empty() ? "" : ", ") + u;
    warn(std::to_string(unmatched.size()) + " unmatched file(s): " + list);
  }
  if (records.empty()) throw UsageError("no generated image has a matching target stem");

  const auto report = metrics::aggregate(std::move(records));
  {
    std::ofstream csv(csv_path, std::ios::trunc);
    metrics::write_csv(csv, report);
  }
  std::ostringstream summary;
  metrics::write_summary(summary, report, a.decimals);
  write_text(summary_path, summary.str());
  std::cout << summary.str();
  return kOk;
}

}  // namespace tirvis::cli
