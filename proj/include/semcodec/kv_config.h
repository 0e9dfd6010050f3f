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

#ifndef SEMCODEC_KV_CONFIG_H_
#define SEMCODEC_KV_CONFIG_H_

#include <initializer_list>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace semcodec {

// Flat "key = value" configuration text. Blank lines and '#' comments are
// skipped; a repeated key is an error.
class KeyValueConfig {
 public:
  static KeyValueConfig Parse(std::string_view text);
  static KeyValueConfig Load(const std::string& path);

  bool Has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string GetString(const std::string& key, const std::string& fallback) const;
  double GetDouble(const std::string& key, double fallback) const;
  int64_t GetInt(const std::string& key, int64_t fallback) const;
  bool GetBool(const std::string& key, bool fallback) const;

  // Throws naming the first key not in `known`.
  void RejectUnknown(std::initializer_list<std::string_view> known) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace semcodec

#endif  // SEMCODEC_KV_CONFIG_H_
