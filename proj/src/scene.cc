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

#include "semcodec/scene.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "semcodec/kv_config.h"

namespace semcodec {

LabelMap::LabelMap(size_t height, size_t width, std::vector<int> labels)
    : height_(height), width_(width), labels_(std::move(labels)) {
  if (labels_.size() != height_ * width_) {
    throw std::invalid_argument("label map size does not match dimensions");
  }
}

void SceneConfig::Validate() const {
  if (num_classes < 2 || num_classes > kMaxClasses) {
    throw std::invalid_argument("scene config: M must be in [2, 16], got " +
                                std::to_string(num_classes));
  }
  if (height == 0 || width == 0 || height % kPatchSize || width % kPatchSize) {
    throw std::invalid_argument("scene config: H and W must be positive multiples of 8");
  }
  if (object_probability < 0 || object_probability > 1) {
    throw std::invalid_argument("scene config: object_probability outside [0, 1]");
  }
  if (texture_noise < 0) throw std::invalid_argument("scene config: negative noise");
}

SceneConfig SceneConfig::Parse(std::string_view text) {
  const KeyValueConfig kv = KeyValueConfig::Parse(text);
  kv.RejectUnknown({"H", "W", "M", "palette_seed", "sky_band", "road_band",
                    "object_probability", "texture_noise"});
  SceneConfig c;
  c.height = static_cast<size_t>(kv.GetInt("H", static_cast<int64_t>(c.height)));
  c.width = static_cast<size_t>(kv.GetInt("W", static_cast<int64_t>(c.width)));
  c.num_classes = static_cast<size_t>(kv.GetInt("M", static_cast<int64_t>(c.num_classes)));
  c.palette_seed = static_cast<uint64_t>(kv.GetInt("palette_seed", 7));
  c.sky_band = kv.GetBool("sky_band", c.sky_band);
  c.road_band = kv.GetBool("road_band", c.road_band);
  c.object_probability = kv.GetDouble("object_probability", c.object_probability);
  c.texture_noise = kv.GetDouble("texture_noise", c.texture_noise);
  c.Validate();
  return c;
}

SceneConfig SceneConfig::Load(const std::string& path) {
  const KeyValueConfig kv = KeyValueConfig::Load(path);
  std::ostringstream text;
  for (const auto& [k, v] : kv.values()) text << k << " = " << v << "\n";
  return Parse(text.str());
}

std::string SceneConfig::ToText() const {
  std::ostringstream out;
  out.precision(17);
  out << "H = " << height << "\nW = " << width << "\nM = " << num_classes
      << "\npalette_seed = " << palette_seed << "\nsky_band = " << (sky_band ? 1 : 0)
      << "\nroad_band = " << (road_band ? 1 : 0)
      << "\nobject_probability = " << object_probability
      << "\ntexture_noise = " << texture_noise << "\n";
  return out.str();
}

Palette MakePalette(const SceneConfig& config) {
  config.Validate();
  RngStream rng(config.palette_seed, 0x7061'6c65);
  Palette p;
  double min_dist = 0.38;
  while (p.colors.size() < config.num_classes) {
    bool placed = false;
    for (int attempt = 0; attempt < 4000 && !placed; ++attempt) {
      Color c = {rng.Uniform(0.05, 0.95), rng.Uniform(0.05, 0.95), rng.Uniform(0.05, 0.95)};
      bool ok = true;
      for (const Color& o : p.colors) {
        const double d = std::hypot(c[0] - o[0], c[1] - o[1], c[2] - o[2]);
        if (d < min_dist) {
          ok = false;
          break;
        }
      }
      if (ok) {
        p.colors.push_back(c);
        placed = true;
      }
    }
    if (!placed) min_dist *= 0.9;
  }
  for (size_t m = 0; m < config.num_classes; ++m) {
    p.stripe_freq.push_back(rng.Uniform(0.3, 1.2));
    p.stripe_angle.push_back(rng.Uniform(0.0, 3.14159265358979));
  }
  return p;
}

namespace {

struct Canvas {
  LabelMap& labels;
  size_t h, w;

  void Rect(double y0, double y1, double x0, double x1, int cls) {
    const long ya = std::max(0L, std::lround(y0)), yb = std::min<long>(h, std::lround(y1));
    const long xa = std::max(0L, std::lround(x0)), xb = std::min<long>(w, std::lround(x1));
    for (long y = ya; y < yb; ++y)
      for (long x = xa; x < xb; ++x) labels.at(y, x) = cls;
  }

  void Ellipse(double cy, double cx, double ry, double rx, int cls) {
    for (size_t y = 0; y < h; ++y) {
      for (size_t x = 0; x < w; ++x) {
        const double dy = (y + 0.5 - cy) / ry, dx = (x + 0.5 - cx) / rx;
        if (dy * dy + dx * dx <= 1.0) labels.at(y, x) = cls;
      }
    }
  }
};

}  // namespace

SceneSample GenerateScene(RngStream& rng, const SceneConfig& config) {
  config.Validate();
  const Palette palette = MakePalette(config);
  const size_t H = config.height, W = config.width;
  const int M = static_cast<int>(config.num_classes);
  const double fh = static_cast<double>(H), fw = static_cast<double>(W);

  SceneSample sample{Tensor({3, H, W}), LabelMap(H, W, kBackground)};
  Canvas canvas{sample.labels, H, W};

  const double sky_end = config.sky_band ? fh * rng.Uniform(0.18, 0.34) : 0.0;
  const double road_start = config.road_band ? fh * rng.Uniform(0.62, 0.76) : fh;
  if (config.sky_band && M >= kSky) canvas.Rect(0, sky_end, 0, fw, kSky);
  if (config.road_band) canvas.Rect(road_start, fh, 0, fw, kRoad);

  const double horizon = 0.5 * (sky_end + road_start);
  for (int cls = kBuilding; cls <= M; ++cls) {
    if (rng.Uniform() >= config.object_probability) continue;
    const int instances = rng.Uniform() < 0.3 ? 2 : 1;
    for (int k = 0; k < instances; ++k) {
      const double cx = rng.Uniform(0.05, 0.95) * fw;
      switch (cls) {
        case kBuilding: {
          const double half = rng.Uniform(0.07, 0.15) * fw;
          canvas.Rect(fh * rng.Uniform(0.05, 0.3), road_start, cx - half, cx + half, cls);
          break;
        }
        case kCar: {
          const double half = rng.Uniform(0.07, 0.13) * fw;
          const double bottom = std::min(fh, road_start + rng.Uniform(0.05, 0.2) * fh);
          canvas.Rect(bottom - rng.Uniform(0.16, 0.26) * fh, bottom, cx - half, cx + half, cls);
          break;
        }
        case kPerson: {
          const double half = rng.Uniform(0.025, 0.045) * fw;
          const double bottom = std::min(fh, road_start + rng.Uniform(0.0, 0.12) * fh);
          canvas.Rect(bottom - rng.Uniform(0.28, 0.42) * fh, bottom, cx - half, cx + half, cls);
          break;
        }
        case kTree:
          canvas.Ellipse(horizon + rng.Uniform(-0.1, 0.05) * fh, cx,
                         rng.Uniform(0.16, 0.28) * fh, rng.Uniform(0.06, 0.11) * fw, cls);
          break;
        case kSign: {
          const double cy = horizon + rng.Uniform(-0.15, 0.1) * fh;
          canvas.Rect(cy - 0.09 * fh, cy + 0.09 * fh, cx - 0.035 * fw, cx + 0.035 * fw, cls);
          break;
        }
        default: {
          const double cy = rng.Uniform(0.15, 0.85) * fh;
          const double ry = rng.Uniform(0.1, 0.2) * fh, rx = rng.Uniform(0.06, 0.12) * fw;
          if (rng.Uniform() < 0.5) {
            canvas.Ellipse(cy, cx, ry, rx, cls);
          } else {
            canvas.Rect(cy - ry, cy + ry, cx - rx, cx + rx, cls);
          }
          break;
        }
      }
    }
  }

  // Per-sample color jitter, then stripe texture and pixel noise.
  std::vector<Color> tint(M);
  for (auto& t : tint)
    for (double& v : t) v = rng.Uniform(-0.02, 0.02);
  for (size_t y = 0; y < H; ++y) {
    for (size_t x = 0; x < W; ++x) {
      const int cls = sample.labels.at(y, x);
      const size_t m = static_cast<size_t>(cls - 1);
      const double phase = palette.stripe_freq[m] * (x * std::cos(palette.stripe_angle[m]) +
                                                     y * std::sin(palette.stripe_angle[m]));
      const double stripe = 0.05 * std::sin(phase);
      for (size_t c = 0; c < 3; ++c) {
        const double v = palette.colors[m][c] + tint[m][c] + stripe +
                         config.texture_noise * rng.Normal();
        sample.image.at(c, y, x) = std::clamp(v, 0.0, 1.0);
      }
    }
  }
  return sample;
}

std::vector<SceneSample> GenerateDataset(const RngStream& base, const SceneConfig& config,
                                         size_t count) {
  std::vector<SceneSample> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    RngStream rng = base.Fork(i);
    out.push_back(GenerateScene(rng, config));
  }
  return out;
}

}  // namespace semcodec
