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

#ifndef SEMCODEC_IMAGE_IO_H_
#define SEMCODEC_IMAGE_IO_H_

#include <string>

#include "semcodec/scene.h"
#include "semcodec/tensor.h"

namespace semcodec {

// Binary P6, 8 bits per channel. Values are clamped to [0,1] and rounded.
void WritePpm(const std::string& path, const Tensor& image);
Tensor ReadPpm(const std::string& path);

// Binary P5 whose gray levels are the class ids.
void WritePgm(const std::string& path, const LabelMap& labels);
LabelMap ReadPgm(const std::string& path);

}  // namespace semcodec

#endif  // SEMCODEC_IMAGE_IO_H_
