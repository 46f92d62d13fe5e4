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

#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "common.hpp"
#include "tirvis/version.hpp"

int main(int argc, char** argv) {
  using namespace tirvis::cli;
  CLI::App app{"Unpaired thermal-to-visible image translation"};
  app.set_version_flag("--version", std::string(tirvis::kVersion) + " (" + tirvis::kRevision + ")");
  app.require_subcommand(1);

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train both translation directions on an unpaired dataset");
  t->add_option("--config", train.config, "Flat key = value configuration file");
  t->add_option("--data", train.data, "Dataset root holding trainX/ and trainY/")->required();
  t->add_option("--out", train.out, "Run directory for logs, manifest and checkpoints")->required();
  t->add_option("--epochs", train.epochs, "Override the configured epoch count");
  t->add_option("--seed", train.seed, "Override the configured seed");
  t->add_option("--set", train.overrides, "Override any configuration key (key=value)");
  t->add_option("--resume", train.resume, "Continue from a checkpoint");
  t->add_flag("--force", train.force, "Reuse a non-empty run directory");

  InferArgs infer;
  auto* i = app.add_subcommand("infer", "Translate a directory of images with a trained checkpoint");
  i->add_option("--checkpoint", infer.checkpoint, "Checkpoint file")->required();
  i->add_option("--input", infer.input, "Directory of PNG inputs")->required();
  i->add_option("--out", infer.out, "Output directory")->required();
  i->add_option("--direction", infer.direction, "x2y (thermal to visible, G) or y2x (F)")
      ->check(CLI::IsMember({"x2y", "y2x"}));
  i->add_flag("--force", infer.force, "Overwrite a non-empty output directory");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Score generated images against targets with matching stems");
  e->add_option("--generated", eval.generated, "Directory of generated PNGs")->required();
  e->add_option("--target", eval.target, "Directory of target PNGs")->required();
  e->add_option("--out", eval.out, "Where metrics.csv and summary.txt go (default: --generated)");
  e->add_option("--decimals", eval.decimals, "Decimals in the summary")->check(CLI::Range(0, 9));
  e->add_flag("--force", eval.force, "Overwrite existing metric files");

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Write the synthetic two-domain dataset as PNG trees");
  s->add_option("--out", synth.out, "Dataset root to create")->required();
  s->add_option("--n", synth.n, "Training images per domain");
  s->add_option("--size", synth.size, "N or HxW, multiples of 4");
  s->add_option("--seed", synth.seed, "Generator seed");
  s->add_option("--test-frac", synth.test_frac, "Paired test images as a fraction of n");
  s->add_flag("--force", synth.force, "Overwrite a non-empty output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*t) return cmd_train(train);
    if (*i) return cmd_infer(infer);
    if (*e) return cmd_eval(eval);
    if (*s) return cmd_synth(synth);
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsageError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kRuntimeFailure;
  }
  return kUsageError;
}
