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

#ifndef SEMCODEC_PARAM_BLOCK_H_
#define SEMCODEC_PARAM_BLOCK_H_

#include <string>
#include <vector>

#include "semcodec/tensor.h"

namespace semcodec {

// Named trainable tensors, each paired with a gradient slot of equal shape.
class ParamBlock {
 public:
  struct Entry {
    std::string name;
    Tensor value;
    Tensor grad;
  };

  ParamBlock() = default;

  // Registers a parameter; the name must be new.
  Tensor& Add(const std::string& name, Tensor init);

  bool Has(const std::string& name) const;
  size_t IndexOf(const std::string& name) const;
  Tensor& value(const std::string& name) { return entries_[IndexOf(name)].value; }
  const Tensor& value(const std::string& name) const {
    return entries_[IndexOf(name)].value;
  }
  Tensor& grad(const std::string& name) { return entries_[IndexOf(name)].grad; }
  const Tensor& grad(const std::string& name) const {
    return entries_[IndexOf(name)].grad;
  }

  std::vector<Entry>& entries() { return entries_; }
  const std::vector<Entry>& entries() const { return entries_; }
  size_t NumScalars() const;

  void ZeroGrad();

  // All values (or gradients) concatenated in registration order.
  std::vector<double> FlatValues() const;
  std::vector<double> FlatGrads() const;
  void SetFlatValues(const std::vector<double>& flat);

  bool operator==(const ParamBlock& other) const;

 private:
  std::vector<Entry> entries_;
};

}  // namespace semcodec

#endif  // SEMCODEC_PARAM_BLOCK_H_
