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
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "excolor/checkpoint.hpp"

namespace excolor {

static_assert(std::endian::native == std::endian::little,
              "archive I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'E', 'X', 'C', 'K'};
constexpr const char* kConfigMarker = "%%config\n";

class Writer {
 public:
  template <typename U>
  void put(U v) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
    bytes_.insert(bytes_.end(), p, p + sizeof(U));
  }
  void put_bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    bytes_.insert(bytes_.end(), p, p + n);
  }
  void put_string(const std::string& s) {
    put(static_cast<std::uint32_t>(s.size()));
    put_bytes(s.data(), s.size());
  }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename U>
  U get() {
    U v;
    std::memcpy(&v, take(sizeof(U)), sizeof(U));
    return v;
  }
  const std::uint8_t* take(std::size_t n) {
    if (n > bytes_.size() - pos_) {
      throw CorruptFileError("archive is truncated (needed " + std::to_string(n) +
                             " bytes at offset " + std::to_string(pos_) + ")");
    }
    const std::uint8_t* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::string get_string() {
    auto n = get<std::uint32_t>();
    const std::uint8_t* p = take(n);
    return std::string(reinterpret_cast<const char*>(p), n);
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<ArchiveTensor> with_prefix(const std::string& prefix,
                                       const std::vector<ArchiveTensor>& tensors) {
  std::vector<ArchiveTensor> out = tensors;
  for (ArchiveTensor& t : out) t.name = prefix + t.name;
  return out;
}

}  // namespace

const ArchiveTensor* TensorArchive::find(const std::string& name) const {
  for (const ArchiveTensor& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

std::vector<std::uint8_t> TensorArchive::to_bytes() const {
  Writer w;
  w.put_bytes(kMagic, 4);
  w.put(kArchiveVersion);
  w.put_string(header);
  w.put(static_cast<std::uint32_t>(tensors.size()));
  for (const ArchiveTensor& t : tensors) {
    w.put_string(t.name);
    const bool is_double = std::holds_alternative<std::vector<double>>(t.values);
    w.put(static_cast<std::uint8_t>(is_double ? 1 : 0));
    w.put(static_cast<std::uint8_t>(t.shape.size()));
    for (std::int64_t d : t.shape) w.put(static_cast<std::uint64_t>(d));
    std::visit([&](const auto& v) { w.put_bytes(v.data(), v.size() * sizeof(v[0])); }, t.values);
  }
  return w.take();
}

TensorArchive TensorArchive::from_bytes(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const std::uint8_t* magic = r.take(4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw CorruptFileError("not an excolor archive (bad magic)");
  }
  const auto version = r.get<std::uint32_t>();
  if (version != kArchiveVersion) {
    throw VersionError("unsupported archive version " + std::to_string(version) + " (expected " +
                       std::to_string(kArchiveVersion) + ")");
  }
  TensorArchive archive;
  archive.header = r.get_string();
  const auto count = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < count; ++i) {
    ArchiveTensor t;
    t.name = r.get_string();
    const auto dtype = r.get<std::uint8_t>();
    const auto rank = r.get<std::uint8_t>();
    if (dtype > 1) throw CorruptFileError("unknown dtype in tensor " + t.name);
    std::uint64_t elements = 1;
    for (std::uint8_t d = 0; d < rank; ++d) {
      const auto dim = r.get<std::uint64_t>();
      if (dim > (std::uint64_t{1} << 40)) throw CorruptFileError("implausible dimension in " + t.name);
      t.shape.push_back(static_cast<std::int64_t>(dim));
      elements *= dim;
    }
    if (elements > (std::uint64_t{1} << 34)) throw CorruptFileError("implausible size for " + t.name);
    auto read_values = [&](auto tag) {
      using U = decltype(tag);
      std::vector<U> v(elements);
      const std::uint8_t* p = r.take(elements * sizeof(U));
      std::memcpy(v.data(), p, elements * sizeof(U));
      t.values = std::move(v);
    };
    if (dtype == 0) {
      read_values(float{});
    } else {
      read_values(double{});
    }
    archive.tensors.push_back(std::move(t));
  }
  if (!r.done()) throw CorruptFileError("trailing bytes after archive contents");
  return archive;
}

void TensorArchive::save(const std::filesystem::path& path) const {
  std::vector<std::uint8_t> bytes = to_bytes();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

TensorArchive TensorArchive::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_bytes(bytes);
}

template <typename T>
Tensor<T> to_tensor(const ArchiveTensor& entry) {
  return std::visit(
      [&](const auto& v) {
        std::vector<T> values(v.begin(), v.end());
        return Tensor<T>(entry.shape, std::move(values));
      },
      entry.values);
}

template <typename T>
ArchiveTensor to_archive(const std::string& name, const Tensor<T>& t) {
  return {name, t.shape(), std::vector<T>(t.values().begin(), t.values().end())};
}

template Tensor<float> to_tensor<float>(const ArchiveTensor&);
template Tensor<double> to_tensor<double>(const ArchiveTensor&);
template ArchiveTensor to_archive<float>(const std::string&, const Tensor<float>&);
template ArchiveTensor to_archive<double>(const std::string&, const Tensor<double>&);

TensorArchive Checkpoint::to_archive() const {
  std::ostringstream h;
  h << "excolor-checkpoint\n";
  h << "step = " << step << "\n";
  h << "rng_state = " << rng_state << "\n";
  h << "optimizer = " << (has_optimizer ? 1 : 0) << "\n";
  if (has_optimizer) {
    h << "adam.lr = " << format_double(adam_options.lr) << "\n";
    h << "adam.beta1 = " << format_double(adam_options.beta1) << "\n";
    h << "adam.beta2 = " << format_double(adam_options.beta2) << "\n";
    h << "adam.eps = " << format_double(adam_options.eps) << "\n";
    h << "adam.t = " << adam_step << "\n";
  }
  h << kConfigMarker << config_text;

  TensorArchive archive;
  archive.header = h.str();
  archive.tensors = with_prefix("param/", parameters);
  if (has_optimizer) {
    for (auto& t : with_prefix("adam.m/", adam_m)) archive.tensors.push_back(std::move(t));
    for (auto& t : with_prefix("adam.v/", adam_v)) archive.tensors.push_back(std::move(t));
  }
  return archive;
}

Checkpoint Checkpoint::from_archive(const TensorArchive& archive) {
  const std::size_t marker = archive.header.find(kConfigMarker);
  if (archive.header.rfind("excolor-checkpoint\n", 0) != 0 || marker == std::string::npos) {
    throw CorruptFileError("archive is not a checkpoint (missing checkpoint header)");
  }
  Checkpoint c;
  c.config_text = archive.header.substr(marker + std::strlen(kConfigMarker));
  std::istringstream meta(archive.header.substr(0, marker));
  std::string line;
  std::getline(meta, line);
  bool saw_step = false;
  while (std::getline(meta, line)) {
    const std::size_t eq = line.find(" = ");
    if (eq == std::string::npos) throw CorruptFileError("malformed checkpoint header line: " + line);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 3);
    try {
      if (key == "step") {
        c.step = std::stoull(value);
        saw_step = true;
      } else if (key == "rng_state") {
        c.rng_state = value;
      } else if (key == "optimizer") {
        c.has_optimizer = value == "1";
      } else if (key == "adam.lr") {
        c.adam_options.lr = std::stod(value);
      } else if (key == "adam.beta1") {
        c.adam_options.beta1 = std::stod(value);
      } else if (key == "adam.beta2") {
        c.adam_options.beta2 = std::stod(value);
      } else if (key == "adam.eps") {
        c.adam_options.eps = std::stod(value);
      } else if (key == "adam.t") {
        c.adam_step = std::stoull(value);
      } else {
        throw CorruptFileError("unknown checkpoint header key: " + key);
      }
    } catch (const std::logic_error&) {
      throw CorruptFileError("bad value for checkpoint header key " + key);
    }
  }
  if (!saw_step) throw CorruptFileError("checkpoint header lacks a step count");
  for (const ArchiveTensor& t : archive.tensors) {
    auto strip = [&](const std::string& prefix) {
      ArchiveTensor copy = t;
      copy.name = t.name.substr(prefix.size());
      return copy;
    };
    if (t.name.rfind("param/", 0) == 0) {
      c.parameters.push_back(strip("param/"));
    } else if (t.name.rfind("adam.m/", 0) == 0) {
      c.adam_m.push_back(strip("adam.m/"));
    } else if (t.name.rfind("adam.v/", 0) == 0) {
      c.adam_v.push_back(strip("adam.v/"));
    } else {
      throw CorruptFileError("unexpected tensor in checkpoint: " + t.name);
    }
  }
  return c;
}

void Checkpoint::save(const std::filesystem::path& path) const { to_archive().save(path); }

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
  return from_archive(TensorArchive::load(path));
}

}  // namespace excolor
