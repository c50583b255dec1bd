// Copyright 2026 The FIZZ Authors.
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

#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fizz/benchmark.hpp"
#include "fizz/errors.hpp"
#include "fizz/llm.hpp"
#include "fizz/nli.hpp"
#include "fizz/pipeline.hpp"

namespace fizz {

/// Where a model role gets its answers: an HTTP endpoint or a fixture file,
/// never both.
struct BackendSource {
  std::string url;
  std::string fixture;

  bool configured() const { return !url.empty() || !fixture.empty(); }
};

struct PipelineConfig {
  BackendSource nli;
  BackendSource llm;
  BackendSource coref;
  std::string llm_model = "default";
  std::string llm_token;

  std::size_t gran = 3;
  std::size_t workers = 4;
  std::size_t pair_workers = 1;
  std::size_t llm_in_flight = 4;
  std::size_t nli_in_flight = 8;
  std::size_t max_fact_tokens = 60;
  bool use_coref = true;
  bool use_filter = true;
  std::string abbreviations;  // extra abbreviation list file

  std::uint64_t seed = 0;
  std::size_t bootstrap_iters = 10000;
  bool single_threshold = false;

  std::string cache_path;
  std::string out_dir;
};

// Flat "section.key" -> value view of one configuration source.
using ConfigLayer = std::map<std::string, std::string>;

namespace config {

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "nli.url",           "nli.fixture",          "llm.url",
      "llm.fixture",       "llm.model",            "llm.token",
      "coref.url",         "coref.fixture",        "pipeline.gran",
      "pipeline.workers",  "pipeline.pair_workers", "pipeline.llm_in_flight",
      "pipeline.nli_in_flight", "pipeline.max_fact_tokens", "pipeline.coref",
      "pipeline.filter",   "pipeline.abbreviations", "benchmark.seed",
      "benchmark.bootstrap_iters", "benchmark.single_threshold",
      "output.cache",      "output.out"};
  return keys;
}

// "pipeline.gran" -> "FIZZ_PIPELINE_GRAN"
inline std::string env_name(const std::string& key) {
  std::string out = "FIZZ_";
  for (char c : key) out += c == '.' ? '_' : text::to_upper(c);
  return out;
}

/// INI-style file: [section] headers, key = value lines, ';' or '#'
/// comments. Unknown keys are rejected.
inline ConfigLayer load_file(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ConfigLayer layer;
  const auto& keys = known_keys();
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config: key outside a section: " + section);
    for (const auto& [key, value] : body) {
      const auto full = section + "." + key;
      if (std::find(keys.begin(), keys.end(), full) == keys.end()) {
        throw ConfigError("config: unknown key " + full + " in " + path);
      }
      layer[full] = value.get_value<std::string>();
    }
  }
  return layer;
}

inline ConfigLayer from_env(
    const std::function<const char*(const char*)>& getenv_fn = [](const char* n) {
      return std::getenv(n);
    }) {
  ConfigLayer layer;
  for (const auto& key : known_keys()) {
    if (const char* v = getenv_fn(env_name(key).c_str()); v != nullptr) layer[key] = v;
  }
  if (const char* dir = getenv_fn("FIZZ_FIXTURES"); dir != nullptr) {
    for (const char* role : {"nli", "llm", "coref"}) {
      if (!layer.count(std::string(role) + ".url") &&
          !layer.count(std::string(role) + ".fixture")) {
        layer[std::string(role) + ".fixture"] = std::string(dir) + "/" + role + ".json";
      }
    }
  }
  return layer;
}

inline std::size_t to_size(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long n = std::stoll(v, &used);
    if (used != v.size() || n < 0) throw std::invalid_argument(v);
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " must be a nonnegative integer, got \"" + v + "\"");
  }
}

inline bool to_bool(const std::string& key, const std::string& v) {
  const auto l = text::lower(v);
  if (l == "1" || l == "true" || l == "yes" || l == "on") return true;
  if (l == "0" || l == "false" || l == "no" || l == "off") return false;
  throw ConfigError("config: " + key + " must be a boolean, got \"" + v + "\"");
}

}  // namespace config

/// Folds layers from lowest to highest precedence (file, env, flags).
/// Setting one source of a role in a layer clears the other source inherited
/// from lower layers; setting both in the same layer is an error.
inline PipelineConfig resolve_config(const std::vector<ConfigLayer>& layers) {
  ConfigLayer merged;
  for (const auto& layer : layers) {
    for (const char* role : {"nli", "llm", "coref"}) {
      const std::string url = std::string(role) + ".url";
      const std::string fixture = std::string(role) + ".fixture";
      const bool has_url = layer.count(url) && !layer.at(url).empty();
      const bool has_fixture = layer.count(fixture) && !layer.at(fixture).empty();
      if (has_url && has_fixture) {
        throw ConfigError(std::string("config: ") + role +
                          " has both an endpoint and a fixture");
      }
      if (has_url) merged.erase(fixture);
      if (has_fixture) merged.erase(url);
    }
    for (const auto& [k, v] : layer) merged[k] = v;
  }

  PipelineConfig c;
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = merged.find(key);
    return it == merged.end() ? nullptr : &it->second;
  };
  auto set_str = [&](const std::string& key, std::string& field) {
    if (auto v = get(key)) field = *v;
  };
  auto set_size = [&](const std::string& key, std::size_t& field) {
    if (auto v = get(key)) field = config::to_size(key, *v);
  };
  auto set_bool = [&](const std::string& key, bool& field) {
    if (auto v = get(key)) field = config::to_bool(key, *v);
  };
  set_str("nli.url", c.nli.url);
  set_str("nli.fixture", c.nli.fixture);
  set_str("llm.url", c.llm.url);
  set_str("llm.fixture", c.llm.fixture);
  set_str("llm.model", c.llm_model);
  set_str("llm.token", c.llm_token);
  set_str("coref.url", c.coref.url);
  set_str("coref.fixture", c.coref.fixture);
  set_size("pipeline.gran", c.gran);
  set_size("pipeline.workers", c.workers);
  set_size("pipeline.pair_workers", c.pair_workers);
  set_size("pipeline.llm_in_flight", c.llm_in_flight);
  set_size("pipeline.nli_in_flight", c.nli_in_flight);
  set_size("pipeline.max_fact_tokens", c.max_fact_tokens);
  set_bool("pipeline.coref", c.use_coref);
  set_bool("pipeline.filter", c.use_filter);
  set_str("pipeline.abbreviations", c.abbreviations);
  if (auto v = get("benchmark.seed")) c.seed = config::to_size("benchmark.seed", *v);
  set_size("benchmark.bootstrap_iters", c.bootstrap_iters);
  set_bool("benchmark.single_threshold", c.single_threshold);
  set_str("output.cache", c.cache_path);
  set_str("output.out", c.out_dir);

  if (c.gran < 1) throw ConfigError("config: gran must be >= 1");
  if (c.workers < 1 || c.pair_workers < 1 || c.llm_in_flight < 1 || c.nli_in_flight < 1) {
    throw ConfigError("config: worker and in-flight limits must be >= 1");
  }
  return c;
}

/// Checks that every role the pipeline will use has exactly one source.
inline void require_backends(const PipelineConfig& c, bool need_coref) {
  auto check = [](const char* role, const BackendSource& s) {
    if (!s.configured()) {
      throw ConfigError(std::string("config: no ") + role +
                        " backend (set an endpoint or a fixture)");
    }
    if (!s.url.empty() && !s.fixture.empty()) {
      throw ConfigError(std::string("config: ") + role + " has both an endpoint and a fixture");
    }
  };
  check("nli", c.nli);
  check("llm", c.llm);
  if (need_coref) check("coref", c.coref);
}

inline Backends make_backends(const PipelineConfig& c, RetryPolicy retry = {}) {
  require_backends(c, c.use_coref);
  Backends b;
  std::shared_ptr<NliBackend> nli;
  if (!c.nli.fixture.empty()) {
    nli = ScriptedNli::from_file(c.nli.fixture);
  } else {
    nli = std::make_shared<HttpNli>(c.nli.url);
  }
  NliOptions nli_options;
  nli_options.retry = retry;
  nli_options.max_in_flight = static_cast<std::ptrdiff_t>(c.nli_in_flight);
  nli_options.disk_cache_path = c.cache_path;
  b.nli = std::make_shared<NliScorer>(std::move(nli), nli_options);

  if (!c.llm.fixture.empty()) {
    b.llm = ScriptedLlm::from_file(c.llm.fixture);
  } else {
    b.llm = std::make_shared<HttpLlm>(c.llm.url, c.llm_model, c.llm_token);
  }
  if (c.use_coref) {
    if (!c.coref.fixture.empty()) {
      b.coref = ScriptedCoref::from_file(c.coref.fixture);
    } else {
      b.coref = std::make_shared<HttpCoref>(c.coref.url, retry);
    }
  }
  return b;
}

inline PipelineOptions pipeline_options(const PipelineConfig& c, RetryPolicy retry = {}) {
  PipelineOptions o;
  o.gran = c.gran;
  o.use_coref = c.use_coref;
  o.use_filter = c.use_filter;
  o.max_fact_tokens = c.max_fact_tokens;
  o.workers = c.workers;
  o.decompose.max_in_flight = c.llm_in_flight;
  o.decompose.retry = std::move(retry);
  return o;
}

inline BenchmarkOptions benchmark_options(const PipelineConfig& c) {
  BenchmarkOptions o;
  o.single_threshold = c.single_threshold;
  o.seed = c.seed;
  o.bootstrap_iters = c.bootstrap_iters;
  o.pair_workers = c.pair_workers;
  return o;
}

}  // namespace fizz
