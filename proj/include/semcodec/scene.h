// Copyright 2026 The Semcodec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMCODEC_SCENE_H_
#define SEMCODEC_SCENE_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "semcodec/rng.h"
#include "semcodec/tensor.h"

namespace semcodec {

// Integer class grid, entries in {1..M}, row-major.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(size_t height, size_t width, int fill = 1)
      : height_(height), width_(width), labels_(height * width, fill) {}
  LabelMap(size_t height, size_t width, std::vector<int> labels);

  size_t height() const { return height_; }
  size_t width() const { return width_; }
  size_t size() const { return labels_.size(); }
  int at(size_t y, size_t x) const { return labels_[y * width_ + x]; }
  int& at(size_t y, size_t x) { return labels_[y * width_ + x]; }
  int operator[](size_t i) const { return labels_[i]; }
  int& operator[](size_t i) { return labels_[i]; }
  const std::vector<int>& labels() const { return labels_; }

  bool operator==(const LabelMap&) const = default;

 private:
  size_t height_ = 0;
  size_t width_ = 0;
  std::vector<int> labels_;
};

// Fixed class roles of the synthetic street scene. Ids past kSign are
// generic objects.
enum SceneClass : int {
  kBackground = 1,
  kRoad = 2,
  kSky = 3,
  kBuilding = 4,
  kCar = 5,
  kPerson = 6,
  kTree = 7,
  kSign = 8,
};

inline constexpr size_t kPatchSize = 8;
inline constexpr size_t kMaxClasses = 16;

struct SceneConfig {
  size_t height = 32;
  size_t width = 64;
  size_t num_classes = 8;
  uint64_t palette_seed = 7;
  bool sky_band = true;
  bool road_band = true;
  double object_probability = 0.75;
  double texture_noise = 0.03;

  // Throws std::invalid_argument on M outside [2, 16] or sizes not
  // divisible by the patch size.
  void Validate() const;

  // Plain-text "key = value" lines; '#' starts a comment. Unknown keys are
  // rejected.
  static SceneConfig Parse(std::string_view text);
  static SceneConfig Load(const std::string& path);
  std::string ToText() const;

  bool operator==(const SceneConfig&) const = default;
};

using Color = std::array<double, 3>;

// Per-class mean colors and stripe texture, derived from palette_seed.
struct Palette {
  std::vector<Color> colors;          // index m-1
  std::vector<double> stripe_freq;    // radians per pixel
  std::vector<double> stripe_angle;
};

Palette MakePalette(const SceneConfig& config);

struct SceneSample {
  Tensor image;  // [3 x H x W] in [0, 1]
  LabelMap labels;
};

SceneSample GenerateScene(RngStream& rng, const SceneConfig& config);

// `count` scenes; scene i draws from stream base.Fork(i).
std::vector<SceneSample> GenerateDataset(const RngStream& base, const SceneConfig& config,
                                         size_t count);

}  // namespace semcodec

#endif  // SEMCODEC_SCENE_H_
