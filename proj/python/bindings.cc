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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "semcodec/allocator.h"
#include "semcodec/bd_metric.h"
#include "semcodec/bitstream.h"
#include "semcodec/channel.h"
#include "semcodec/criterion.h"
#include "semcodec/harness.h"
#include "semcodec/scene.h"
#include "semcodec/system.h"

namespace py = pybind11;

namespace semcodec {
namespace {

using ImageArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using LabelArray = py::array_t<int32_t, py::array::c_style | py::array::forcecast>;

Tensor ToTensor(const ImageArray& a) {
  if (a.ndim() != 3 || a.shape(0) != 3) throw std::invalid_argument("image must be [3, H, W]");
  Tensor t({3, static_cast<size_t>(a.shape(1)), static_cast<size_t>(a.shape(2))});
  std::memcpy(t.values().data(), a.data(), t.size() * sizeof(double));
  return t;
}

ImageArray FromTensor(const Tensor& t) {
  ImageArray a({t.dim(0), t.dim(1), t.dim(2)});
  std::memcpy(a.mutable_data(), t.values().data(), t.size() * sizeof(double));
  return a;
}

LabelMap ToLabels(const LabelArray& a) {
  if (a.ndim() != 2) throw std::invalid_argument("labels must be [H, W]");
  const size_t h = static_cast<size_t>(a.shape(0)), w = static_cast<size_t>(a.shape(1));
  return LabelMap(h, w, std::vector<int>(a.data(), a.data() + h * w));
}

LabelArray FromLabels(const LabelMap& l) {
  LabelArray a({l.height(), l.width()});
  std::copy(l.labels().begin(), l.labels().end(), a.mutable_data());
  return a;
}

SceneConfig MakeScene(size_t height, size_t width, size_t num_classes) {
  SceneConfig c;
  c.height = height;
  c.width = width;
  c.num_classes = num_classes;
  c.Validate();
  return c;
}

py::bytes ToBytes(const std::vector<uint8_t>& v) {
  return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

std::vector<uint8_t> FromBytes(const py::bytes& b) {
  const std::string s = b;
  return std::vector<uint8_t>(s.begin(), s.end());
}

py::dict RateDict(const SemanticBitstream& s) {
  const RateBreakdown r = ComputeRate(s);
  py::dict d;
  d["payload_bits"] = r.payload_bits;
  d["label_bits"] = r.label_bits;
  d["overhead_bits"] = r.overhead_bits;
  d["psi"] = r.psi;
  d["file_bpp"] = r.file_bpp;
  return d;
}

std::vector<RateQualityPoint> ToCurve(const std::vector<std::pair<double, double>>& pts) {
  std::vector<RateQualityPoint> out;
  for (const auto& [r, q] : pts) out.push_back({r, q});
  return out;
}

}  // namespace
}  // namespace semcodec

PYBIND11_MODULE(_core, m) {
  using namespace semcodec;
  m.doc() = "Semantic image codec with per-concept bit allocation";

  m.def(
      "generate_scene",
      [](uint64_t seed, uint64_t stream, size_t height, size_t width, size_t num_classes) {
        RngStream rng(seed, stream);
        const SceneSample s = GenerateScene(rng, MakeScene(height, width, num_classes));
        return py::make_tuple(FromTensor(s.image), FromLabels(s.labels));
      },
      py::arg("seed"), py::arg("stream") = 0, py::arg("height") = 32, py::arg("width") = 64,
      py::arg("num_classes") = 8, "Synthetic scene as (image [3,H,W], labels [H,W]).");

  py::class_<SemanticSystem>(m, "System")
      .def_static(
          "create",
          [](size_t height, size_t width, size_t num_classes, size_t channels, uint64_t seed) {
            return SemanticSystem::Create(MakeScene(height, width, num_classes), channels, seed);
          },
          py::arg("height") = 32, py::arg("width") = 64, py::arg("num_classes") = 8,
          py::arg("channels") = 8, py::arg("seed") = 1)
      .def_static("load", &SemanticSystem::Load, py::arg("path"))
      .def("save", &SemanticSystem::Save, py::arg("path"))
      .def_property_readonly("stage", [](const SemanticSystem& s) { return StageName(s.stage); })
      .def_property_readonly("channels", &SemanticSystem::channels)
      .def_property_readonly("num_classes", &SemanticSystem::num_classes)
      .def_property_readonly("height", [](const SemanticSystem& s) { return s.scene.height; })
      .def_property_readonly("width", [](const SemanticSystem& s) { return s.scene.width; })
      .def(
          "encode",
          [](const SemanticSystem& sys, const ImageArray& image, const LabelArray& labels,
             std::optional<std::vector<int>> levels) {
            const Tensor img = ToTensor(image);
            const LabelMap lab = ToLabels(labels);
            const std::vector<int> lv =
                levels ? *levels : GreedyLevels(sys, sys.Encode(img), lab);
            return ToBytes(Serialize(CompressImage(sys, img, lab, lv)));
          },
          py::arg("image"), py::arg("labels"), py::arg("levels") = py::none(),
          "Bitstream bytes; levels default to the learned policy.")
      .def(
          "decode",
          [](const SemanticSystem& sys, const py::bytes& data, const std::string& channel,
             uint64_t seed) {
            const SemanticBitstream s = Deserialize(FromBytes(data));
            RngStream rng(seed, 0xC11);
            const Decompressed d =
                DecompressBitstream(sys, TransmitBitstream(s, ChannelSpec::Parse(channel), rng));
            return py::make_tuple(FromTensor(d.reconstruction.image), FromLabels(d.labels),
                                  d.corrupted);
          },
          py::arg("data"), py::arg("channel") = "lossless", py::arg("seed") = 1,
          "(image, labels, corrupted) after an optional noisy channel.")
      .def(
          "greedy_levels",
          [](const SemanticSystem& sys, const ImageArray& image, const LabelArray& labels) {
            const Tensor img = ToTensor(image);
            return GreedyLevels(sys, sys.Encode(img), ToLabels(labels));
          },
          py::arg("image"), py::arg("labels"));

  m.def(
      "rate",
      [](const py::bytes& data) { return RateDict(Deserialize(FromBytes(data))); },
      py::arg("data"), "Bit accounting of a serialized bitstream.");
  m.def(
      "mean_iou",
      [](const LabelArray& a, const LabelArray& b, size_t num_classes) {
        return MeanIou(ToLabels(a), ToLabels(b), num_classes);
      },
      py::arg("a"), py::arg("b"), py::arg("num_classes"));
  m.def(
      "psnr", [](const ImageArray& a, const ImageArray& b) { return Psnr(ToTensor(a), ToTensor(b)); },
      py::arg("a"), py::arg("b"));
  m.def(
      "ssim", [](const ImageArray& a, const ImageArray& b) { return Ssim(ToTensor(a), ToTensor(b)); },
      py::arg("a"), py::arg("b"));
  m.def("composite_loss", [](double rate, double semantic, double perceptual, double lambda,
                             double eta) {
    return CompositeLoss(rate, semantic, perceptual, {lambda, eta});
  }, py::arg("rate"), py::arg("semantic"), py::arg("perceptual"), py::arg("lam") = 1.0,
        py::arg("eta") = 10.0);
  m.def("bpsk_bit_error_rate", &BpskBitErrorRate, py::arg("snr_db"));
  m.def(
      "bd_metric",
      [](const std::vector<std::pair<double, double>>& anchor,
         const std::vector<std::pair<double, double>>& test, const std::string& mode) {
        if (mode != "rate" && mode != "quality") {
          throw std::invalid_argument("mode must be 'rate' or 'quality'");
        }
        return BdMetric(ToCurve(anchor), ToCurve(test),
                        mode == "rate" ? BdMode::kRate : BdMode::kQuality);
      },
      py::arg("anchor"), py::arg("test"), py::arg("mode") = "quality",
      "Bjontegaard delta of (rate, quality) curves; 'rate' returns percent.");
}
