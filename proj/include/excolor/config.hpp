/**
 * Copyright 2026 The excolor Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef EXCOLOR_CONFIG_HPP
#define EXCOLOR_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "excolor/augment.hpp"
#include "excolor/loss.hpp"
#include "excolor/model.hpp"
#include "excolor/optim.hpp"

namespace excolor {

struct TrainConfig {
  std::uint64_t seed = 0;
  int steps = 2000;
  int batch_size = 8;
  int checkpoint_every = 0;  // 0 disables intermediate checkpoints
};

enum class ValueKind { kInt, kUInt, kDouble, kBool, kIntList, kString, kChoice };

struct KeySpec {
  std::string key;  // "section.name"
  ValueKind kind;
  std::string default_value;
  std::vector<std::string> choices;  // kChoice only
};

// Flat `key = value` configuration grouped by [section] headers. Every key
// must be in schema(); values are type-checked when set. Values keep the
// text they were given so that to_text() is stable.
class RunConfig {
 public:
  RunConfig();

  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::filesystem::path& path);

  static const std::vector<KeySpec>& schema();

  void set(const std::string& key, const std::string& value);
  const std::string& get(const std::string& key) const;

  // Applies "key=value".
  void apply_override(const std::string& assignment);

  std::string to_text() const;

  ModelConfig model() const;
  AugmentConfig augment() const;
  LossConfig loss() const;
  AdamOptions optim() const;
  TrainConfig train() const;

  // Checks every section for semantic validity.
  void validate() const;

  bool operator==(const RunConfig&) const = default;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace excolor

#endif  // EXCOLOR_CONFIG_HPP
