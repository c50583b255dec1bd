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

// fizz: factual-inconsistency scoring for summaries.
//
//   fizz score DOCUMENT SUMMARY     score one pair, print a fact table
//   fizz benchmark DATASET          threshold protocol over a JSONL dataset
//   fizz analyze-facts PAIRS        fact-quality metrics over JSONL fact sets

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fizz/fizz.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitPipeline = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write file: " + path.string());
  out << content;
}

struct GlobalFlags {
  std::string config_path;
  std::string nli_url, llm_url, coref_url, fixtures;
  std::optional<std::size_t> gran;
  std::optional<std::uint64_t> seed;
  std::string out, cache;
  bool single_threshold = false;
  bool no_coref = false;
  bool no_filter = false;
};

fizz::ConfigLayer flag_layer(const GlobalFlags& f) {
  fizz::ConfigLayer layer;
  if (!f.fixtures.empty()) {
    for (const char* role : {"nli", "llm", "coref"}) {
      layer[std::string(role) + ".fixture"] = (fs::path(f.fixtures) / (std::string(role) + ".json")).string();
    }
  }
  auto url = [&](const char* role, const std::string& v) {
    if (v.empty()) return;
    layer.erase(std::string(role) + ".fixture");
    layer[std::string(role) + ".url"] = v;
  };
  url("nli", f.nli_url);
  url("llm", f.llm_url);
  url("coref", f.coref_url);
  if (f.gran) layer["pipeline.gran"] = std::to_string(*f.gran);
  if (f.seed) layer["benchmark.seed"] = std::to_string(*f.seed);
  if (!f.out.empty()) layer["output.out"] = f.out;
  if (!f.cache.empty()) layer["output.cache"] = f.cache;
  if (f.single_threshold) layer["benchmark.single_threshold"] = "true";
  if (f.no_coref) layer["pipeline.coref"] = "false";
  if (f.no_filter) layer["pipeline.filter"] = "false";
  return layer;
}

fizz::PipelineConfig load_config(const GlobalFlags& f) {
  std::vector<fizz::ConfigLayer> layers;
  if (!f.config_path.empty()) {
    if (!fs::exists(f.config_path)) throw UsageError("config file not found: " + f.config_path);
    layers.push_back(fizz::config::load_file(f.config_path));
  }
  layers.push_back(fizz::config::from_env());
  layers.push_back(flag_layer(f));
  return fizz::resolve_config(layers);
}

fizz::AbbreviationList abbreviations_for(const fizz::PipelineConfig& c) {
  fizz::AbbreviationList list = fizz::AbbreviationList::defaults();
  if (!c.abbreviations.empty()) list.merge(fizz::AbbreviationList::load(c.abbreviations));
  return list;
}

void print_cache_stats(const fizz::Backends& b) {
  const auto s = b.nli->stats();
  std::cerr << "nli: " << s.requests << " requests, " << s.backend_calls
            << " backend calls, hit ratio " << s.hit_ratio() << '\n';
}

fs::path ensure_out_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw UsageError("cannot create output directory " + dir + ": " + ec.message());
  return p;
}

int cmd_score(const GlobalFlags& flags, const std::string& document_path,
              const std::string& summary_path, const std::string& id,
              const std::string& format) {
  const std::string document(fizz::text::trim(read_file(document_path)));
  const std::string summary(fizz::text::trim(read_file(summary_path)));
  const auto config = load_config(flags);
  const auto abbreviations = abbreviations_for(config);
  const auto backends = fizz::make_backends(config);
  auto options = fizz::pipeline_options(config);
  options.abbreviations = &abbreviations;

  const auto report = fizz::score_pair(id, document, summary, backends, options);
  const auto json = fizz::to_json(report).dump(2) + "\n";
  if (format == "json") {
    std::cout << json;
  } else {
    std::cout << fizz::render_table(report);
  }
  if (!config.out_dir.empty()) write_file(ensure_out_dir(config.out_dir) / "score_report.json", json);
  print_cache_stats(backends);
  return kExitOk;
}

int cmd_benchmark(const GlobalFlags& flags, const std::string& dataset_path) {
  if (!fs::exists(dataset_path)) throw UsageError("dataset not found: " + dataset_path);
  const auto config = load_config(flags);
  const auto dataset = fizz::load_dataset(dataset_path);
  const auto abbreviations = abbreviations_for(config);
  const auto backends = fizz::make_backends(config);
  auto options = fizz::pipeline_options(config);
  options.abbreviations = &abbreviations;

  const auto result = fizz::run_benchmark(dataset, backends, options,
                                          fizz::benchmark_options(config));
  const auto json = fizz::to_json(result).dump(2) + "\n";
  if (config.out_dir.empty()) {
    std::cout << json;
  } else {
    const auto out = ensure_out_dir(config.out_dir);
    write_file(out / "eval_result.json", json);
    std::string reports;
    for (const auto& r : result.reports) reports += fizz::to_json(r).dump() + "\n";
    write_file(out / "reports.jsonl", reports);
    write_file(out / "scores.csv", fizz::to_csv(result));
    for (const auto& s : result.subsets) {
      std::cout << s.subset << ": BA " << s.balanced_accuracy << " [" << s.ci_low << ", "
                << s.ci_high << "] at threshold " << s.threshold << '\n';
    }
    std::cout << "average BA " << result.average_balanced_accuracy << '\n';
  }
  if (!result.unscoreable.empty()) {
    std::cerr << "warning: " << result.unscoreable.size() << " unscoreable pair(s) excluded\n";
  }
  print_cache_stats(backends);
  return kExitOk;
}

int cmd_analyze_facts(const GlobalFlags& flags, const std::string& pairs_path) {
  if (!fs::exists(pairs_path)) throw UsageError("fact pairs not found: " + pairs_path);
  const auto report = fizz::analyze_facts(fizz::load_fact_pairs(pairs_path));
  const auto json = fizz::to_json(report).dump(2) + "\n";
  std::cout << json;
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  if (!flags.out.empty()) write_file(ensure_out_dir(flags.out) / "fact_quality.json", json);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FIZZ factual-inconsistency scoring"};
  app.require_subcommand(1);
  GlobalFlags flags;
  app.add_option("--config", flags.config_path, "INI config file");
  app.add_option("--nli-url", flags.nli_url, "NLI service base URL");
  app.add_option("--llm-url", flags.llm_url, "chat-completion endpoint URL");
  app.add_option("--coref-url", flags.coref_url, "coreference service base URL");
  app.add_option("--fixtures", flags.fixtures, "directory with nli.json, llm.json, coref.json");
  app.add_option("--gran", flags.gran, "maximum window size for granularity expansion");
  app.add_flag("--single-threshold", flags.single_threshold, "one threshold across all subsets");
  app.add_option("--seed", flags.seed, "bootstrap seed");
  app.add_option("--out", flags.out, "output directory");
  app.add_option("--cache", flags.cache, "on-disk NLI cache (JSONL)");
  app.add_flag("--no-coref", flags.no_coref, "skip coreference resolution");
  app.add_flag("--no-filter", flags.no_filter, "skip atomic-fact filtering");

  std::string document_path, summary_path, id = "pair", format = "table";
  auto* score = app.add_subcommand("score", "score one document/summary pair");
  score->add_option("document", document_path)->required();
  score->add_option("summary", summary_path)->required();
  score->add_option("--id", id, "pair id in the report");
  score->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));

  std::string dataset_path;
  auto* bench = app.add_subcommand("benchmark", "evaluate over a labeled JSONL dataset");
  bench->add_option("dataset", dataset_path)->required();

  std::string pairs_path;
  auto* analyze = app.add_subcommand("analyze-facts", "fact-quality metrics");
  analyze->add_option("pairs", pairs_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (score->parsed()) return cmd_score(flags, document_path, summary_path, id, format);
    if (bench->parsed()) return cmd_benchmark(flags, dataset_path);
    if (analyze->parsed()) return cmd_analyze_facts(flags, pairs_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fizz::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fizz::DatasetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPipeline;
  }
  return kExitUsage;
}
