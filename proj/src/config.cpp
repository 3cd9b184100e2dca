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
#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "excolor/config.hpp"

namespace excolor {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

const KeySpec* find_spec(const std::string& key) {
  for (const KeySpec& spec : RunConfig::schema()) {
    if (spec.key == key) return &spec;
  }
  return nullptr;
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("'" + key + "' expects a non-negative integer, got '" + v + "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("'" + key + "' expects true/false, got '" + v + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(static_cast<int>(parse_int(key, trim(item))));
  }
  if (out.empty()) throw ConfigError("'" + key + "' expects a comma-separated integer list");
  return out;
}

void check_value(const KeySpec& spec, const std::string& v) {
  switch (spec.kind) {
    case ValueKind::kInt:
      parse_int(spec.key, v);
      break;
    case ValueKind::kUInt:
      parse_uint(spec.key, v);
      break;
    case ValueKind::kDouble:
      parse_double(spec.key, v);
      break;
    case ValueKind::kBool:
      parse_bool(spec.key, v);
      break;
    case ValueKind::kIntList:
      parse_int_list(spec.key, v);
      break;
    case ValueKind::kChoice:
      if (std::find(spec.choices.begin(), spec.choices.end(), v) == spec.choices.end()) {
        throw ConfigError("'" + spec.key + "' has invalid value '" + v + "'");
      }
      break;
    case ValueKind::kString:
      break;
  }
}

}  // namespace

const std::vector<KeySpec>& RunConfig::schema() {
  static const std::vector<KeySpec> keys = {
      {"model.input_size", ValueKind::kInt, "64", {}},
      {"model.num_scales", ValueKind::kInt, "4", {}},
      {"model.channels", ValueKind::kIntList, "32,64,128,256", {}},
      {"model.resblocks", ValueKind::kInt, "1", {}},
      {"model.kernel", ValueKind::kInt, "3", {}},
      {"model.embedding_dim", ValueKind::kInt, "512", {}},
      {"model.color_channels", ValueKind::kIntList, "32,64,128,256", {}},
      {"model.mlp_hidden", ValueKind::kInt, "512", {}},
      {"model.demod_eps", ValueKind::kDouble, "1e-8", {}},
      {"model.demod_mode", ValueKind::kChoice, "out_channel", {"out_channel", "in_channel"}},
      {"model.ab_scale", ValueKind::kDouble, "110", {}},
      {"model.leaky_slope", ValueKind::kDouble, "0.2", {}},
      {"model.init_seed", ValueKind::kUInt, "1", {}},
      {"augment.noise_sigma", ValueKind::kDouble, "5", {}},
      {"augment.tps_grid", ValueKind::kInt, "3", {}},
      {"augment.tps_max_offset", ValueKind::kDouble, "0.1", {}},
      {"augment.enable_flip", ValueKind::kBool, "true", {}},
      {"augment.enable_rotate", ValueKind::kBool, "true", {}},
      {"loss.lambda_rec", ValueKind::kDouble, "1", {}},
      {"loss.lambda_perc", ValueKind::kDouble, "0.1", {}},
      {"loss.extractor", ValueKind::kChoice, "random", {"random", "file"}},
      {"loss.extractor_path", ValueKind::kString, "", {}},
      {"loss.extractor_seed", ValueKind::kUInt, "7", {}},
      {"loss.extractor_channels", ValueKind::kIntList, "16,32,64,64,64", {}},
      {"optim.lr", ValueKind::kDouble, "1e-4", {}},
      {"optim.beta1", ValueKind::kDouble, "0.9", {}},
      {"optim.beta2", ValueKind::kDouble, "0.99", {}},
      {"optim.eps", ValueKind::kDouble, "1e-8", {}},
      {"train.seed", ValueKind::kUInt, "0", {}},
      {"train.steps", ValueKind::kInt, "2000", {}},
      {"train.batch_size", ValueKind::kInt, "8", {}},
      {"train.checkpoint_every", ValueKind::kInt, "0", {}},
  };
  return keys;
}

RunConfig::RunConfig() {
  for (const KeySpec& spec : schema()) values_[spec.key] = spec.default_value;
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig cfg;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    try {
      cfg.set(key, trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const KeySpec* spec = find_spec(key);
  if (spec == nullptr) throw ConfigError("unknown config key '" + key + "'");
  check_value(*spec, value);
  values_[key] = value;
}

const std::string& RunConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  std::string section;
  for (const KeySpec& spec : schema()) {
    const auto dot = spec.key.find('.');
    const std::string s = spec.key.substr(0, dot);
    if (s != section) {
      if (!section.empty()) os << "\n";
      os << "[" << s << "]\n";
      section = s;
    }
    os << spec.key.substr(dot + 1) << " = " << values_.at(spec.key) << "\n";
  }
  return os.str();
}

ModelConfig RunConfig::model() const {
  ModelConfig m;
  m.input_size = static_cast<int>(parse_int("model.input_size", get("model.input_size")));
  m.num_scales = static_cast<int>(parse_int("model.num_scales", get("model.num_scales")));
  m.channels = parse_int_list("model.channels", get("model.channels"));
  m.resblocks = static_cast<int>(parse_int("model.resblocks", get("model.resblocks")));
  m.kernel = static_cast<int>(parse_int("model.kernel", get("model.kernel")));
  m.embedding_dim = static_cast<int>(parse_int("model.embedding_dim", get("model.embedding_dim")));
  m.color_channels = parse_int_list("model.color_channels", get("model.color_channels"));
  m.mlp_hidden = static_cast<int>(parse_int("model.mlp_hidden", get("model.mlp_hidden")));
  m.demod_eps = parse_double("model.demod_eps", get("model.demod_eps"));
  m.demod_mode = get("model.demod_mode") == "in_channel" ? DemodMode::kPerInputChannel
                                                         : DemodMode::kPerOutputChannel;
  m.ab_scale = parse_double("model.ab_scale", get("model.ab_scale"));
  m.leaky_slope = parse_double("model.leaky_slope", get("model.leaky_slope"));
  m.init_seed = parse_uint("model.init_seed", get("model.init_seed"));
  return m;
}

AugmentConfig RunConfig::augment() const {
  AugmentConfig a;
  a.noise_sigma = parse_double("augment.noise_sigma", get("augment.noise_sigma"));
  a.tps_grid = static_cast<int>(parse_int("augment.tps_grid", get("augment.tps_grid")));
  a.tps_max_offset = parse_double("augment.tps_max_offset", get("augment.tps_max_offset"));
  a.enable_flip = parse_bool("augment.enable_flip", get("augment.enable_flip"));
  a.enable_rotate = parse_bool("augment.enable_rotate", get("augment.enable_rotate"));
  a.seed = parse_uint("train.seed", get("train.seed"));
  return a;
}

LossConfig RunConfig::loss() const {
  LossConfig l;
  l.lambda_rec = parse_double("loss.lambda_rec", get("loss.lambda_rec"));
  l.lambda_perc = parse_double("loss.lambda_perc", get("loss.lambda_perc"));
  l.extractor = get("loss.extractor");
  l.extractor_path = get("loss.extractor_path");
  l.extractor_seed = parse_uint("loss.extractor_seed", get("loss.extractor_seed"));
  l.extractor_channels = parse_int_list("loss.extractor_channels", get("loss.extractor_channels"));
  return l;
}

AdamOptions RunConfig::optim() const {
  AdamOptions o;
  o.lr = parse_double("optim.lr", get("optim.lr"));
  o.beta1 = parse_double("optim.beta1", get("optim.beta1"));
  o.beta2 = parse_double("optim.beta2", get("optim.beta2"));
  o.eps = parse_double("optim.eps", get("optim.eps"));
  return o;
}

TrainConfig RunConfig::train() const {
  TrainConfig t;
  t.seed = parse_uint("train.seed", get("train.seed"));
  t.steps = static_cast<int>(parse_int("train.steps", get("train.steps")));
  t.batch_size = static_cast<int>(parse_int("train.batch_size", get("train.batch_size")));
  t.checkpoint_every =
      static_cast<int>(parse_int("train.checkpoint_every", get("train.checkpoint_every")));
  return t;
}

void RunConfig::validate() const {
  model().validate();
  augment().validate();
  loss().validate();
  optim().validate();
  TrainConfig t = train();
  if (t.steps < 0) throw ConfigError("train.steps must be >= 0");
  if (t.batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (t.checkpoint_every < 0) throw ConfigError("train.checkpoint_every must be >= 0");
}

}  // namespace excolor
