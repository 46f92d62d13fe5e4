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

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "common.hpp"
#include "json.hpp"
#include "tirvis/checkpoint.hpp"
#include "tirvis/version.hpp"

namespace tirvis::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kStepLog = "train_log.csv";
constexpr const char* kEpochLog = "epochs.csv";

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string checkpoint_name(std::uint64_t epoch) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "epoch_%04llu.ckpt", static_cast<unsigned long long>(epoch));
  return buf;
}

std::string read_text(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + file.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Keeps the header and the first `rows` data rows of a CSV log.
void truncate_log(const fs::path& file, const std::string& header, std::uint64_t rows) {
  std::string kept = header;
  if (fs::exists(file)) {
    std::istringstream in(read_text(file));
    std::string line;
    std::getline(in, line);
    for (std::uint64_t i = 0; i < rows && std::getline(in, line); ++i) kept += line + "\n";
  }
  write_text(file, kept);
}

// Every config field is numeric; emit it as a JSON number, keeping the text
// only if it ever fails to parse.
ordered_json config_value(const std::string& text) {
  auto v = ordered_json::parse(text, nullptr, false);
  return v.is_number() ? v : ordered_json(text);
}

train::TrainConfig resolve_config(const TrainArgs& a) {
  train::TrainConfig config;
  if (a.config) {
    if (!fs::is_regular_file(*a.config)) throw UsageError("config file '" + a.config->string() + "' not found");
    config = train::TrainConfig::from_text(read_text(*a.config));
  }
  for (const auto& kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
    config.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (a.epochs) config.epochs = *a.epochs;
  if (a.seed) config.seed = *a.seed;
  config.validate();
  return config;
}

}  // namespace

int cmd_train(const TrainArgs& a) {
  const fs::path dir_x = a.data / "trainX", dir_y = a.data / "trainY", dir_truth = a.data / "trainX_truth";
  require_dir(a.data, "data");
  require_dir(dir_x, "training");
  require_dir(dir_y, "training");

  train::TrainState state = [&] {
    if (!a.resume) return train::TrainState::initialize(resolve_config(a));
    if (a.config || !a.overrides.empty() || a.seed) {
      throw UsageError("--resume takes its configuration from the checkpoint; only --epochs may change");
    }
    try {
      auto s = train::load_checkpoint(*a.resume);
      if (a.epochs) s.config.epochs = *a.epochs;
      s.config.validate();
      return s;
    } catch (const train::CheckpointError& e) {
      throw UsageError(e.what());
    }
  }();
  const auto& config = state.config;

  const data::PrepareOptions prep{.resize_height = config.resize_height,
                                  .resize_width = config.resize_width,
                                  .crop_height = config.image_size,
                                  .crop_width = config.image_size,
                                  .replicate_gray = true};
  auto ds_x = data::DomainDataset::scan(dir_x, data::Domain::kThermal);
  auto ds_y = data::DomainDataset::scan(dir_y, data::Domain::kVisible);
  if (ds_x.size() == 0) throw UsageError("training directory '" + dir_x.string() + "' has no images");
  if (ds_y.size() == 0) throw UsageError("training directory '" + dir_y.string() + "' has no images");
  const auto digest_x = data::dataset_digest(ds_x), digest_y = data::dataset_digest(ds_y);
  const data::DirectorySource src_x(ds_x, prep), src_y(ds_y, prep);
  std::optional<data::DirectorySource> src_truth;
  if (fs::is_directory(dir_truth)) {
    auto ds_t = data::DomainDataset::scan(dir_truth, data::Domain::kVisible);
    if (ds_t.items == ds_x.items) {
      src_truth.emplace(std::move(ds_t), prep);
    } else {
      warn("ignoring '" + dir_truth.string() + "': file names do not match trainX");
    }
  }

  if (a.resume) {
    fs::create_directories(a.out);
  } else {
    prepare_output_dir(a.out, a.force);
  }
  const fs::path ckpt_dir = a.out / "checkpoints";
  fs::create_directories(ckpt_dir);

  // The manifest is written once, before any training step.
  ordered_json manifest;
  manifest["tool"] = "tirvis";
  manifest["version"] = kVersion;
  manifest["revision"] = kRevision;
  manifest["started_utc"] = utc_timestamp();
  ordered_json cfg_json = ordered_json::object();
  {
    std::istringstream in(config.to_text());
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find(" = ");
      cfg_json[line.substr(0, eq)] = config_value(line.substr(eq + 3));
    }
  }
  manifest["config"] = cfg_json;
  ordered_json overrides = ordered_json::object();
  for (const auto& [k, v] : config.overrides()) overrides[k] = config_value(v);
  manifest["overrides"] = overrides;
  manifest["datasets"] = {
      {"trainX", {{"path", dir_x.string()}, {"items", ds_x.size()}, {"digest", hex64(digest_x)}}},
      {"trainY", {{"path", dir_y.string()}, {"items", ds_y.size()}, {"digest", hex64(digest_y)}}}};
  manifest["truth"] = src_truth ? dir_truth.string() : "";
  manifest["resumed_from"] = a.resume ? a.resume->string() : "";
  manifest["start_step"] = state.step;
  manifest["outputs"] = {{"step_log", (a.out / kStepLog).string()},
                         {"epoch_log", (a.out / kEpochLog).string()},
                         {"checkpoints", ckpt_dir.string()}};
  const fs::path manifest_path =
      a.resume ? a.out / ("manifest_resume_step" + std::to_string(state.step) + ".json") : a.out / "manifest.json";
  write_text(manifest_path, manifest.dump(2) + "\n");

  // Logs keep exactly the rows that precede the restored step.
  truncate_log(a.out / kStepLog, train::step_log_header(), state.step);
  truncate_log(a.out / kEpochLog, train::epoch_log_header(), state.epoch);
  std::ofstream step_log(a.out / kStepLog, std::ios::app | std::ios::binary);
  std::ofstream epoch_log(a.out / kEpochLog, std::ios::app | std::ios::binary);

  std::size_t flagged = 0;
  auto epoch_start = std::chrono::steady_clock::now();
  train::TrainHooks hooks;
  hooks.on_step = [&](const train::StepRecord& r) {
    step_log << train::step_log_row(r);
    if (r.skipped) {
      ++flagged;
      warn("step " + std::to_string(r.step) + " skipped an update (non-finite loss or gradient)");
    }
    return true;
  };
  hooks.on_epoch = [&](const train::EpochSummary& s, const train::TrainState& st) {
    step_log.flush();
    epoch_log << train::epoch_log_row(s);
    epoch_log.flush();
    train::save_checkpoint(st, ckpt_dir / checkpoint_name(s.epoch));
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch_start).count();
    epoch_start = std::chrono::steady_clock::now();
    char line[256];
    std::snprintf(line, sizeof line, "epoch %llu/%d  cyc %.4f  adv_G %.4f  adv_F %.4f  D_Y %.4f  D_X %.4f%s  (%.1f s)",
                  static_cast<unsigned long long>(s.epoch), st.config.epochs, s.mean.cyc, s.mean.gen_adv_G,
                  s.mean.gen_adv_F, s.mean.disc_Y, s.mean.disc_X,
                  s.truth_l1 ? ("  truth_l1 " + std::to_string(*s.truth_l1)).c_str() : "", secs);
    info(line);
  };

  const auto history = train::train(state, {&src_x, &src_y, src_truth ? &*src_truth : nullptr}, hooks);
  step_log.close();
  epoch_log.close();

  ordered_json done;
  done["finished_utc"] = utc_timestamp();
  done["final_step"] = state.step;
  done["final_epoch"] = state.epoch;
  done["epochs_run"] = history.size();
  done["flagged_steps"] = flagged;
  write_text(a.out / "completion.json", done.dump(2) + "\n");
  return kOk;
}

}  // namespace tirvis::cli
