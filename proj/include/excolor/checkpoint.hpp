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
#ifndef EXCOLOR_CHECKPOINT_HPP
#define EXCOLOR_CHECKPOINT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "excolor/optim.hpp"
#include "excolor/tensor.hpp"

namespace excolor {

// Little-endian container shared by checkpoints and extractor weight files:
//
//   "EXCK" | u32 version | u32 header_len | header (UTF-8 text)
//   u32 tensor_count | tensor*
//   tensor := u32 name_len | name | u8 dtype (0 f32, 1 f64) | u8 rank |
//             u64 dims[rank] | raw values
//
// Readers reject trailing bytes and short reads.
inline constexpr std::uint32_t kArchiveVersion = 1;

struct ArchiveTensor {
  std::string name;
  Shape shape;
  std::variant<std::vector<float>, std::vector<double>> values;

  bool operator==(const ArchiveTensor&) const = default;
};

struct TensorArchive {
  std::string header;
  std::vector<ArchiveTensor> tensors;

  const ArchiveTensor* find(const std::string& name) const;

  std::vector<std::uint8_t> to_bytes() const;
  static TensorArchive from_bytes(std::span<const std::uint8_t> bytes);

  void save(const std::filesystem::path& path) const;
  static TensorArchive load(const std::filesystem::path& path);

  bool operator==(const TensorArchive&) const = default;
};

// Accepts either stored dtype and converts.
template <typename T>
Tensor<T> to_tensor(const ArchiveTensor& entry);

template <typename T>
ArchiveTensor to_archive(const std::string& name, const Tensor<T>& t);

// Trained-model snapshot. config_text is the canonical run configuration;
// it is kept verbatim so that save -> load -> save reproduces the bytes.
struct Checkpoint {
  std::string config_text;
  std::uint64_t step = 0;
  std::string rng_state;
  std::vector<ArchiveTensor> parameters;
  bool has_optimizer = false;
  AdamOptions adam_options;
  std::uint64_t adam_step = 0;
  std::vector<ArchiveTensor> adam_m;
  std::vector<ArchiveTensor> adam_v;

  TensorArchive to_archive() const;
  static Checkpoint from_archive(const TensorArchive& archive);

  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);

  bool operator==(const Checkpoint&) const = default;
};

}  // namespace excolor

#endif  // EXCOLOR_CHECKPOINT_HPP
