// Copyright 2026 The htlab Authors
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

#include "htlab_cli/config_file.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "htlab/error.hpp"
#include "htlab/netpbm.hpp"

namespace htlab::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(int line, std::string_view key, std::string_view value, const char* expected) {
  throw FormatError("config line " + std::to_string(line) + ": key '" + std::string(key) + "' expects " + expected +
                    ", got '" + std::string(value) + "'");
}

template <class T>
T parse_number(int line, std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(line, key, value, "a number");
  return out;
}

bool parse_bool(int line, std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(line, key, value, "true or false");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Setter = std::function<void(rl::TrainConfig&, int, std::string_view, std::string_view)>;
using Getter = std::function<std::string(const rl::TrainConfig&)>;

struct Field {
  Setter set;
  Getter get;
};

const std::map<std::string, Field, std::less<>>& schema() {
  static const std::map<std::string, Field, std::less<>> fields = [] {
    std::map<std::string, Field, std::less<>> f;
    auto int_field = [&f](const char* name, auto member) {
      f[name] = {[member](rl::TrainConfig& c, int l, std::string_view k, std::string_view v) {
                   c.*member = parse_number<std::remove_reference_t<decltype(c.*member)>>(l, k, v);
                 },
                 [member](const rl::TrainConfig& c) { return std::to_string(c.*member); }};
    };
    auto real_field = [&f](const char* name, double rl::TrainConfig::*member) {
      f[name] = {[member](rl::TrainConfig& c, int l, std::string_view k, std::string_view v) {
                   c.*member = parse_number<double>(l, k, v);
                 },
                 [member](const rl::TrainConfig& c) { return fmt(c.*member); }};
    };
    int_field("batch_size", &rl::TrainConfig::batch_size);
    int_field("crop_size", &rl::TrainConfig::crop_size);
    int_field("iterations", &rl::TrainConfig::iterations);
    int_field("seed", &rl::TrainConfig::seed);
    int_field("anisotropy_batch", &rl::TrainConfig::anisotropy_batch);
    int_field("levels", &rl::TrainConfig::levels);
    int_field("log_every", &rl::TrainConfig::log_every);
    int_field("checkpoint_every", &rl::TrainConfig::checkpoint_every);
    real_field("w_s", &rl::TrainConfig::w_s);
    real_field("w_a", &rl::TrainConfig::w_a);
    real_field("lr_start", &rl::TrainConfig::lr_start);
    real_field("lr_end", &rl::TrainConfig::lr_end);
    f["estimator"] = {[](rl::TrainConfig& c, int l, std::string_view k, std::string_view v) {
                        try {
                          c.estimator = rl::parse_estimator(v);
                        } catch (const PreconditionError&) {
                          bad_value(l, k, v, "reinforce, reinforce_meanbaseline, coma or local_expectation");
                        }
                      },
                      [](const rl::TrainConfig& c) { return std::string(rl::estimator_name(c.estimator)); }};
    f["multitone_anisotropy"] = {
        [](rl::TrainConfig& c, int l, std::string_view k, std::string_view v) {
          c.multitone_anisotropy = parse_bool(l, k, v);
        },
        [](const rl::TrainConfig& c) { return std::string(c.multitone_anisotropy ? "true" : "false"); }};
    f["anisotropy_reduction"] = {[](rl::TrainConfig& c, int l, std::string_view k, std::string_view v) {
                                   try {
                                     c.anisotropy_reduction = rl::parse_reduction(v);
                                   } catch (const PreconditionError&) {
                                     bad_value(l, k, v, "sum or mean");
                                   }
                                 },
                                 [](const rl::TrainConfig& c) {
                                   return std::string(rl::reduction_name(c.anisotropy_reduction));
                                 }};
    f["channels"] = {[](rl::TrainConfig& c, int l, std::string_view k, std::string_view v) {
                       c.arch.channels = parse_number<int>(l, k, v);
                     },
                     [](const rl::TrainConfig& c) { return std::to_string(c.arch.channels); }};
    f["blocks"] = {[](rl::TrainConfig& c, int l, std::string_view k, std::string_view v) {
                     c.arch.blocks = parse_number<int>(l, k, v);
                   },
                   [](const rl::TrainConfig& c) { return std::to_string(c.arch.blocks); }};
    f["hvs_model"] = {[](rl::TrainConfig& c, int l, std::string_view k, std::string_view v) {
                        try {
                          c.hvs.model = hvs::parse_model(v);
                        } catch (const PreconditionError&) {
                          bad_value(l, k, v, "gaussian or nasanen");
                        }
                      },
                      [](const rl::TrainConfig& c) { return std::string(hvs::model_name(c.hvs.model)); }};
    f["hvs_size"] = {[](rl::TrainConfig& c, int l, std::string_view k, std::string_view v) {
                       c.hvs.size = parse_number<int>(l, k, v);
                     },
                     [](const rl::TrainConfig& c) { return std::to_string(c.hvs.size); }};
    f["hvs_sigma"] = {[](rl::TrainConfig& c, int l, std::string_view k, std::string_view v) {
                        c.hvs.sigma = parse_number<double>(l, k, v);
                      },
                      [](const rl::TrainConfig& c) { return fmt(c.hvs.sigma); }};
    f["hvs_scale"] = {[](rl::TrainConfig& c, int l, std::string_view k, std::string_view v) {
                        c.hvs.scale = parse_number<double>(l, k, v);
                      },
                      [](const rl::TrainConfig& c) { return fmt(c.hvs.scale); }};
    return f;
  }();
  return fields;
}

}  // namespace

const std::vector<std::string>& train_config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, field] : schema()) k.push_back(name);
    return k;
  }();
  return keys;
}

rl::TrainConfig parse_train_config(std::string_view text) {
  rl::TrainConfig config;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = schema().find(key);
    if (it == schema().end()) {
      throw FormatError("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
    if (!seen.insert(std::string(key)).second) {
      throw FormatError("config line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
    }
    if (value.empty()) bad_value(line_no, key, value, "a value");
    it->second.set(config, line_no, key, value);
  }
  config.validate();
  return config;
}

rl::TrainConfig load_train_config(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_train_config(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::string format_train_config(const rl::TrainConfig& config) {
  std::string out;
  for (const auto& [name, field] : schema()) out += name + " = " + field.get(config) + "\n";
  return out;
}

}  // namespace htlab::cli
