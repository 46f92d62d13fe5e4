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

#include "commands.hpp"
#include "common.hpp"
#include "tirvis/checkpoint.hpp"
#include "tirvis/png_io.hpp"

namespace tirvis::cli {

namespace fs = std::filesystem;

namespace {

// Reflect-pads the bottom and right edges up to the next multiple of 4.
data::Image pad_to_multiple_of_4(const data::Image& img) {
  const int h = (img.height() + 3) / 4 * 4, w = (img.width() + 3) / 4 * 4;
  if (h == img.height() && w == img.width()) return img;
  if (h - img.height() >= img.height() || w - img.width() >= img.width()) {
    throw std::invalid_argument("too small to reflect-pad to a multiple of 4");
  }
  auto reflect = [](int p, int n) { return p < n ? p : 2 * (n - 1) - p; };
  data::Image out(h, w, img.channels());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < img.channels(); ++c) {
        out.at(y, x, c) = img.at(reflect(y, img.height()), reflect(x, img.width()), c);
      }
    }
  }
  return out;
}

data::Image crop_top_left(const data::Image& img, int h, int w) {
  if (img.height() == h && img.width() == w) return img;
  data::Image out(h, w, img.channels());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < img.channels(); ++c) out.at(y, x, c) = img.at(y, x, c);
    }
  }
  return out;
}

}  // namespace

int cmd_infer(const InferArgs& a) {
  if (a.direction != "x2y" && a.direction != "y2x") {
    throw UsageError("--direction must be x2y or y2x, got '" + a.direction + "'");
  }
  require_dir(a.input, "input");
  if (!fs::is_regular_file(a.checkpoint)) throw UsageError("checkpoint '" + a.checkpoint.string() + "' not found");
  train::TrainState state = [&] {
    try {
      return train::load_checkpoint(a.checkpoint);
    } catch (const train::CheckpointError& e) {
      throw UsageError(e.what());
    }
  }();
  const auto& generator = a.direction == "x2y" ? state.models.G : state.models.F;
  const auto inputs = list_pngs(a.input);
  if (inputs.empty()) throw UsageError("no PNG files in '" + a.input.string() + "'");
  prepare_output_dir(a.out, a.force);

  std::size_t written = 0;
  for (const auto& path : inputs) {
    try {
      auto img = data::read_png(path);
      if (img.channels() == 1) img = data::replicate_to_rgb(img);
      const auto padded = pad_to_multiple_of_4(img);
      diff::Graph<float> g;
      const auto out = nets::generator_forward(g, generator, data::to_network(padded));
      const auto result = crop_top_left(data::from_network(out), img.height(), img.width());
      data::write_png(a.out / (path.stem().string() + ".png"), result, 8);
      ++written;
    } catch (const std::exception& e) {
      warn("skipping " + path.filename().string() + ": " + e.what());
    }
  }
  info("wrote " + std::to_string(written) + " of " + std::to_string(inputs.size()) + " images to " +
       a.out.string());
  return written > 0 ? kOk : kRuntimeFailure;
}

}  // namespace tirvis::cli
