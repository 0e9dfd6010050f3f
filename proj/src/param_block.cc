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

#include "semcodec/param_block.h"

#include <stdexcept>

namespace semcodec {

Tensor& ParamBlock::Add(const std::string& name, Tensor init) {
  if (Has(name)) throw std::invalid_argument("duplicate parameter '" + name + "'");
  Tensor grad(init.shape());
  entries_.push_back({name, std::move(init), std::move(grad)});
  return entries_.back().value;
}

bool ParamBlock::Has(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return true;
  return false;
}

size_t ParamBlock::IndexOf(const std::string& name) const {
  for (size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].name == name) return i;
  throw std::out_of_range("no parameter named '" + name + "'");
}

size_t ParamBlock::NumScalars() const {
  size_t n = 0;
  for (const auto& e : entries_) n += e.value.size();
  return n;
}

void ParamBlock::ZeroGrad() {
  for (auto& e : entries_) e.grad = Tensor(e.value.shape());
}

std::vector<double> ParamBlock::FlatValues() const {
  std::vector<double> out;
  out.reserve(NumScalars());
  for (const auto& e : entries_)
    out.insert(out.end(), e.value.values().begin(), e.value.values().end());
  return out;
}

std::vector<double> ParamBlock::FlatGrads() const {
  std::vector<double> out;
  out.reserve(NumScalars());
  for (const auto& e : entries_)
    out.insert(out.end(), e.grad.values().begin(), e.grad.values().end());
  return out;
}

void ParamBlock::SetFlatValues(const std::vector<double>& flat) {
  if (flat.size() != NumScalars()) {
    throw std::invalid_argument("flat parameter vector has wrong length");
  }
  size_t off = 0;
  for (auto& e : entries_) {
    for (double& v : e.value.values()) v = flat[off++];
  }
}

bool ParamBlock::operator==(const ParamBlock& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name != other.entries_[i].name ||
        !(entries_[i].value == other.entries_[i].value))
      return false;
  }
  return true;
}

}  // namespace semcodec
