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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fizz/errors.hpp"
#include "fizz/parallel.hpp"
#include "fizz/pipeline.hpp"

namespace fizz {

enum class Split { Validation, Test };

inline std::string_view to_string(Split s) {
  return s == Split::Validation ? "validation" : "test";
}

struct LabeledPair {
  std::string id;
  std::string document;
  std::string summary;
  int label = 0;  // 1 = consistent, 0 = inconsistent
  Split split = Split::Test;
  std::string subset = "all";
};

inline LabeledPair pair_from_json(const nlohmann::json& j, std::size_t line) {
  auto need_string = [&](const char* key) {
    if (!j.contains(key)) throw DatasetError(std::string("missing \"") + key + "\"", line);
    if (!j.at(key).is_string()) {
      throw DatasetError(std::string("\"") + key + "\" must be a string", line);
    }
    auto s = j.at(key).get<std::string>();
    if (text::trim(s).empty()) {
      throw DatasetError(std::string("\"") + key + "\" must be nonempty", line);
    }
    return s;
  };
  if (!j.is_object()) throw DatasetError("record must be a JSON object", line);
  LabeledPair p;
  p.id = need_string("id");
  p.document = need_string("document");
  p.summary = need_string("summary");
  if (!j.contains("label")) throw DatasetError("missing \"label\"", line);
  if (!j.at("label").is_number_integer() ||
      (j.at("label").get<int>() != 0 && j.at("label").get<int>() != 1)) {
    throw DatasetError("\"label\" must be 0 or 1", line);
  }
  p.label = j.at("label").get<int>();
  const auto split = need_string("split");
  if (split == "validation") {
    p.split = Split::Validation;
  } else if (split == "test") {
    p.split = Split::Test;
  } else {
    throw DatasetError("\"split\" must be \"validation\" or \"test\"", line);
  }
  if (j.contains("subset")) p.subset = need_string("subset");
  return p;
}

inline nlohmann::ordered_json to_json(const LabeledPair& p) {
  return {{"id", p.id},           {"document", p.document}, {"summary", p.summary},
          {"label", p.label},     {"split", to_string(p.split)},
          {"subset", p.subset}};
}

/// Reads a JSONL dataset. Blank lines are skipped; ids must be unique.
inline std::vector<LabeledPair> load_dataset(std::istream& in) {
  std::vector<LabeledPair> out;
  std::set<std::string> ids;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DatasetError(std::string("invalid JSON: ") + e.what(), n);
    }
    auto p = pair_from_json(j, n);
    if (!ids.insert(p.id).second) throw DatasetError("duplicate id \"" + p.id + "\"", n);
    out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<LabeledPair> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open dataset: " + path);
  return load_dataset(in);
}

inline std::string serialize_dataset(const std::vector<LabeledPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    out += to_json(p).dump();
    out += '\n';
  }
  return out;
}

struct Confusion {
  std::size_t tp = 0, fn = 0, tn = 0, fp = 0;

  double balanced_accuracy() const {
    const double tpr = static_cast<double>(tp) / static_cast<double>(tp + fn);
    const double tnr = static_cast<double>(tn) / static_cast<double>(tn + fp);
    return (tpr + tnr) / 2.0;
  }
};

inline void require_both_classes(const std::vector<int>& labels) {
  bool pos = false, neg = false;
  for (int l : labels) (l == 1 ? pos : neg) = true;
  if (!pos || !neg) throw DegenerateLabels("labels must contain both classes");
}

/// (TPR + TNR) / 2 with label 1 (consistent) as the positive class.
inline double balanced_accuracy(const std::vector<int>& preds, const std::vector<int>& labels) {
  if (preds.size() != labels.size()) {
    throw ContractViolation("balanced_accuracy: size mismatch");
  }
  require_both_classes(labels);
  Confusion c;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (labels[i] == 1) {
      (preds[i] == 1 ? c.tp : c.fn)++;
    } else {
      (preds[i] == 1 ? c.fp : c.tn)++;
    }
  }
  return c.balanced_accuracy();
}

inline std::vector<int> predict(const std::vector<double>& scores, double threshold) {
  std::vector<int> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(s >= threshold ? 1 : 0);
  return out;
}

struct ThresholdChoice {
  double threshold = 0.0;
  double balanced_accuracy = 0.0;
};

/// Best decision threshold (consistent iff score >= threshold).
///
/// Candidates are the midpoints between consecutive distinct scores plus a
/// sentinel one below the minimum and one above the maximum. Sweeps the
/// sorted scores once; ties go to the smallest threshold.
inline ThresholdChoice select_threshold_detailed(const std::vector<double>& scores,
                                                 const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw ContractViolation("select_threshold: size mismatch");
  }
  require_both_classes(labels);
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  Confusion c;
  for (int l : labels) (l == 1 ? c.tp : c.fp)++;  // everything predicted consistent
  ThresholdChoice best{scores[order.front()] - 1.0, c.balanced_accuracy()};

  std::size_t i = 0;
  while (i < order.size()) {
    const double value = scores[order[i]];
    while (i < order.size() && scores[order[i]] == value) {
      if (labels[order[i]] == 1) {
        --c.tp;
        ++c.fn;
      } else {
        --c.fp;
        ++c.tn;
      }
      ++i;
    }
    const double t = i < order.size() ? value + (scores[order[i]] - value) / 2.0
                                      : value + 1.0;
    const double ba = c.balanced_accuracy();
    if (ba > best.balanced_accuracy) best = {t, ba};
  }
  return best;
}

inline double select_threshold(const std::vector<double>& scores, const std::vector<int>& labels) {
  return select_threshold_detailed(scores, labels).threshold;
}

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

namespace detail {

// Linear interpolation between closest ranks; `sorted` must be ascending.
inline double percentile(const std::vector<double>& sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

/// Percentile bootstrap interval for balanced accuracy, deterministic for a
/// given seed. Resamples lacking one of the classes are redrawn (at most 1000
/// times each). The interval is widened to contain the point estimate.
inline Interval bootstrap_ci(const std::vector<int>& preds, const std::vector<int>& labels,
                             std::size_t iters = 10000, double level = 0.95,
                             std::uint64_t seed = 0) {
  const double point = balanced_accuracy(preds, labels);
  if (iters == 0) return {point, point};
  if (!(level > 0.0 && level < 1.0)) throw ContractViolation("bootstrap_ci: level must be in (0, 1)");
  const std::size_t n = preds.size();
  std::mt19937_64 rng(seed);
  std::vector<double> stats;
  stats.reserve(iters);
  std::vector<int> p(n), l(n);
  for (std::size_t it = 0; it < iters; ++it) {
    bool ok = false;
    for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
      bool pos = false, neg = false;
      for (std::size_t s = 0; s < n; ++s) {
        const std::size_t idx = static_cast<std::size_t>(rng() % n);
        p[s] = preds[idx];
        l[s] = labels[idx];
        (l[s] == 1 ? pos : neg) = true;
      }
      ok = pos && neg;
    }
    if (!ok) throw DegenerateLabels("bootstrap: could not draw a two-class resample");
    stats.push_back(balanced_accuracy(p, l));
  }
  std::sort(stats.begin(), stats.end());
  const double tail = (1.0 - level) / 2.0;
  Interval out{detail::percentile(stats, tail), detail::percentile(stats, 1.0 - tail)};
  out.low = std::min(out.low, point);
  out.high = std::max(out.high, point);
  return out;
}

struct ScoredPair {
  std::string id;
  std::string subset;
  Split split = Split::Test;
  int label = 0;
  double score = 0.0;
};

struct PairPrediction {
  std::string id;
  int label = 0;
  double score = 0.0;
  int prediction = 0;
};

struct EvalResult {
  std::string subset;
  double threshold = 0.0;
  double validation_balanced_accuracy = 0.0;
  double balanced_accuracy = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n_validation = 0;
  std::size_t n_test = 0;
  std::vector<PairPrediction> predictions;  // test split
};

struct Unscoreable {
  std::string id;
  std::string error;
};

struct BenchmarkOptions {
  bool single_threshold = false;
  std::uint64_t seed = 0;
  std::size_t bootstrap_iters = 10000;
  double ci_level = 0.95;
  std::size_t pair_workers = 1;
};

struct BenchmarkResult {
  bool single_threshold = false;
  std::optional<double> shared_threshold;
  std::vector<EvalResult> subsets;
  double average_balanced_accuracy = 0.0;
  std::vector<ScoredPair> scores;  // every scored pair, input order
  std::vector<Unscoreable> unscoreable;
  std::vector<FizzReport> reports;
  NliCacheStats nli_cache;
};

namespace detail {

inline void split_scores(const std::vector<const ScoredPair*>& pairs, Split split,
                         std::vector<double>& scores, std::vector<int>& labels) {
  for (const auto* p : pairs) {
    if (p->split != split) continue;
    scores.push_back(p->score);
    labels.push_back(p->label);
  }
}

}  // namespace detail

/// Threshold selection on validation, balanced accuracy and bootstrap
/// interval on test, per subset. In single-threshold mode one threshold is
/// chosen on the pooled validation pairs of every subset.
inline BenchmarkResult evaluate(const std::vector<ScoredPair>& scored,
                                const BenchmarkOptions& options = {}) {
  std::map<std::string, std::vector<const ScoredPair*>> by_subset;
  for (const auto& p : scored) by_subset[p.subset].push_back(&p);
  if (by_subset.empty()) throw DatasetError("no scored pairs to evaluate");

  BenchmarkResult out;
  out.single_threshold = options.single_threshold;
  out.scores = scored;

  if (options.single_threshold) {
    std::vector<double> s;
    std::vector<int> l;
    for (const auto& p : scored) {
      if (p.split == Split::Validation) {
        s.push_back(p.score);
        l.push_back(p.label);
      }
    }
    if (s.empty()) throw DatasetError("no validation pairs for threshold selection");
    out.shared_threshold = select_threshold(s, l);
  }

  double sum = 0.0;
  for (const auto& [name, pairs] : by_subset) {
    EvalResult r;
    r.subset = name;
    std::vector<double> vs, ts;
    std::vector<int> vl, tl;
    detail::split_scores(pairs, Split::Validation, vs, vl);
    detail::split_scores(pairs, Split::Test, ts, tl);
    r.n_validation = vs.size();
    r.n_test = ts.size();
    if (ts.empty()) throw DatasetError("subset \"" + name + "\" has an empty test split");
    if (!options.single_threshold && vs.empty()) {
      throw DatasetError("subset \"" + name + "\" has an empty validation split");
    }
    if (options.single_threshold) {
      r.threshold = *out.shared_threshold;
      if (!vs.empty() && std::set<int>(vl.begin(), vl.end()).size() == 2) {
        r.validation_balanced_accuracy = balanced_accuracy(predict(vs, r.threshold), vl);
      }
    } else {
      const auto choice = select_threshold_detailed(vs, vl);
      r.threshold = choice.threshold;
      r.validation_balanced_accuracy = choice.balanced_accuracy;
    }
    const auto preds = predict(ts, r.threshold);
    r.balanced_accuracy = balanced_accuracy(preds, tl);
    const auto ci = bootstrap_ci(preds, tl, options.bootstrap_iters, options.ci_level, options.seed);
    r.ci_low = ci.low;
    r.ci_high = ci.high;
    std::size_t t = 0;
    for (const auto* p : pairs) {
      if (p->split != Split::Test) continue;
      r.predictions.push_back({p->id, p->label, p->score, preds[t++]});
    }
    sum += r.balanced_accuracy;
    out.subsets.push_back(std::move(r));
  }
  out.average_balanced_accuracy = sum / static_cast<double>(out.subsets.size());
  return out;
}

/// Scores every pair through the full pipeline, then evaluates. Pairs that
/// cannot be scored are listed in `unscoreable` and left out.
inline BenchmarkResult run_benchmark(const std::vector<LabeledPair>& dataset,
                                     const Backends& backends,
                                     const PipelineOptions& pipeline = {},
                                     const BenchmarkOptions& options = {}) {
  std::vector<std::optional<FizzReport>> reports(dataset.size());
  std::vector<std::string> errors(dataset.size());
  parallel_for(dataset.size(), options.pair_workers, [&](std::size_t i) {
    const auto& p = dataset[i];
    try {
      reports[i] = score_pair(p.id, p.document, p.summary, backends, pipeline);
    } catch (const FixtureMissing&) {
      throw;
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  std::vector<ScoredPair> scored;
  std::vector<FizzReport> kept_reports;
  std::vector<Unscoreable> unscoreable;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& p = dataset[i];
    if (!reports[i]) {
      unscoreable.push_back({p.id, errors[i]});
      continue;
    }
    scored.push_back({p.id, p.subset, p.split, p.label, reports[i]->fizz_score});
    kept_reports.push_back(std::move(*reports[i]));
  }
  auto result = evaluate(scored, options);
  result.unscoreable = std::move(unscoreable);
  result.reports = std::move(kept_reports);
  if (backends.nli) result.nli_cache = backends.nli->stats();
  return result;
}

inline nlohmann::ordered_json to_json(const BenchmarkResult& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["mode"] = r.single_threshold ? "single_threshold" : "per_subset";
  j["threshold"] = r.shared_threshold ? ordered_json(*r.shared_threshold) : ordered_json(nullptr);
  j["average_balanced_accuracy"] = r.average_balanced_accuracy;
  j["subsets"] = ordered_json::array();
  for (const auto& s : r.subsets) {
    ordered_json preds = ordered_json::array();
    for (const auto& p : s.predictions) {
      preds.push_back({{"id", p.id}, {"label", p.label}, {"score", p.score},
                       {"prediction", p.prediction}});
    }
    j["subsets"].push_back({{"subset", s.subset},
                            {"threshold", s.threshold},
                            {"validation_balanced_accuracy", s.validation_balanced_accuracy},
                            {"balanced_accuracy", s.balanced_accuracy},
                            {"ci_low", s.ci_low},
                            {"ci_high", s.ci_high},
                            {"n_validation", s.n_validation},
                            {"n_test", s.n_test},
                            {"predictions", preds}});
  }
  j["unscoreable"] = ordered_json::array();
  for (const auto& u : r.unscoreable) {
    j["unscoreable"].push_back({{"id", u.id}, {"error", u.error}});
  }
  j["warnings"] = r.unscoreable.size();
  j["nli_cache"] = {{"requests", r.nli_cache.requests},
                    {"backend_calls", r.nli_cache.backend_calls},
                    {"disk_hits", r.nli_cache.disk_hits},
                    {"hit_ratio", r.nli_cache.hit_ratio()}};
  return j;
}

namespace detail {

inline std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace detail

/// id,subset,split,label,score,prediction for every scored pair. Validation
/// pairs carry the prediction under the threshold used for their subset.
inline std::string to_csv(const BenchmarkResult& r) {
  std::map<std::string, double> thresholds;
  for (const auto& s : r.subsets) thresholds[s.subset] = s.threshold;
  std::string out = "id,subset,split,label,score,prediction\n";
  for (const auto& p : r.scores) {
    const auto it = thresholds.find(p.subset);
    const int pred = it != thresholds.end() && p.score >= it->second ? 1 : 0;
    out += detail::csv_field(p.id) + ',' + detail::csv_field(p.subset) + ',' +
           std::string(to_string(p.split)) + ',' + std::to_string(p.label) + ',' +
           detail::shortest(p.score) + ',' + std::to_string(pred) + '\n';
  }
  return out;
}

}  // namespace fizz
