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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "fizz/config.hpp"
#include "test_support.hpp"

namespace fizz {
namespace {

using namespace fizz::testing;

std::string write_ini(const std::string& name, const std::string& body) {
  const auto path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream(path) << body;
  return path;
}

TEST(ConfigFile, ParsesSectionsAndComments) {
  const auto path = write_ini("fizz_cfg_ok.ini",
                              "; comment\n[nli]\nurl = http://localhost:8000\n"
                              "[pipeline]\ngran = 2\ncoref = false\n# another\n[benchmark]\nseed = 9\n");
  const auto layer = config::load_file(path);
  EXPECT_EQ(layer.at("nli.url"), "http://localhost:8000");
  const auto c = resolve_config({layer});
  EXPECT_EQ(c.gran, 2u);
  EXPECT_FALSE(c.use_coref);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.workers, 4u);
}

TEST(ConfigFile, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(config::load_file(write_ini("fizz_cfg_unk.ini", "[nli]\nport = 1\n")), ConfigError);
  EXPECT_THROW(config::load_file("/nonexistent/fizz.ini"), ConfigError);
  EXPECT_THROW(resolve_config({{{"pipeline.gran", "two"}}}), ConfigError);
  EXPECT_THROW(resolve_config({{{"pipeline.gran", "0"}}}), ConfigError);
  EXPECT_THROW(resolve_config({{{"pipeline.filter", "maybe"}}}), ConfigError);
}

TEST(ConfigPrecedence, FlagBeatsEnvBeatsFile) {
  const ConfigLayer file{{"pipeline.gran", "1"}, {"pipeline.workers", "2"}, {"benchmark.seed", "3"}};
  const ConfigLayer env{{"pipeline.gran", "2"}, {"pipeline.workers", "5"}};
  const ConfigLayer flags{{"pipeline.gran", "4"}};
  const auto c = resolve_config({file, env, flags});
  EXPECT_EQ(c.gran, 4u);
  EXPECT_EQ(c.workers, 5u);
  EXPECT_EQ(c.seed, 3u);
}

TEST(ConfigPrecedence, HigherSourceReplacesOtherKind) {
  const ConfigLayer file{{"nli.url", "http://a"}};
  const ConfigLayer flags{{"nli.fixture", "/tmp/nli.json"}};
  const auto c = resolve_config({file, flags});
  EXPECT_TRUE(c.nli.url.empty());
  EXPECT_EQ(c.nli.fixture, "/tmp/nli.json");
}

TEST(ConfigPrecedence, BothSourcesInOneLayerIsAnError) {
  EXPECT_THROW(resolve_config({{{"llm.url", "http://a"}, {"llm.fixture", "x.json"}}}), ConfigError);
}

TEST(ConfigEnv, ReadsPrefixedVariablesAndFixtureDir) {
  const std::map<std::string, std::string> vars{{"FIZZ_PIPELINE_GRAN", "2"},
                                                {"FIZZ_NLI_URL", "http://n"},
                                                {"FIZZ_FIXTURES", "/fx"}};
  const auto layer = config::from_env([&](const char* n) -> const char* {
    auto it = vars.find(n);
    return it == vars.end() ? nullptr : it->second.c_str();
  });
  EXPECT_EQ(layer.at("pipeline.gran"), "2");
  EXPECT_EQ(layer.at("nli.url"), "http://n");
  EXPECT_EQ(layer.count("nli.fixture"), 0u);
  EXPECT_EQ(layer.at("llm.fixture"), "/fx/llm.json");
  EXPECT_EQ(layer.at("coref.fixture"), "/fx/coref.json");
  EXPECT_EQ(config::env_name("benchmark.bootstrap_iters"), "FIZZ_BENCHMARK_BOOTSTRAP_ITERS");
}

TEST(ConfigBackends, MissingRoleIsAnError) {
  PipelineConfig c;
  c.nli.fixture = corpus_path("nli.json");
  EXPECT_THROW(make_backends(c), ConfigError);
  c.llm.fixture = corpus_path("llm.json");
  c.use_coref = false;
  const auto b = make_backends(c);
  EXPECT_TRUE(b.llm && b.nli);
  EXPECT_FALSE(b.coref);
}

TEST(ConfigBackends, FixtureDirectoryScoresCorpus) {
  ConfigLayer env{{"nli.fixture", corpus_path("nli.json")},
                  {"llm.fixture", corpus_path("llm.json")},
                  {"coref.fixture", corpus_path("coref.json")}};
  const auto c = resolve_config({env});
  const auto r = score_pair("p2", "Lee Byung-hun made his debut in 1991. The debut was in a film. The film flopped.",
                            "Lee made his film debut in 1992.", make_backends(c), pipeline_options(c));
  EXPECT_NEAR(r.fizz_score, 0.12, 1e-12);
}

}  // namespace
}  // namespace fizz
