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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fizz/errors.hpp"
#include "fizz/llm.hpp"
#include "fizz/retry.hpp"

namespace fizz {

enum class NliLabel { Entailment, Contradiction, Neutral };

inline std::string_view to_string(NliLabel l) {
  switch (l) {
    case NliLabel::Entailment:
      return "entailment";
    case NliLabel::Contradiction:
      return "contradiction";
    case NliLabel::Neutral:
      return "neutral";
  }
  return "?";
}

struct NliTriple {
  double e = 0.0;
  double c = 0.0;
  double n = 0.0;

  // Entailment only when it strictly beats both other classes; a tie for the
  // top probability counts as "not entailment".
  bool entails() const noexcept { return e > c && e > n; }

  NliLabel argmax() const noexcept {
    if (entails()) return NliLabel::Entailment;
    return c >= n ? NliLabel::Contradiction : NliLabel::Neutral;
  }

  friend bool operator==(const NliTriple&, const NliTriple&) = default;
};

inline constexpr double kNliSumTolerance = 1e-3;

/// Validates a backend triple and rescales it to sum exactly to one.
inline NliTriple normalize(const NliTriple& raw) {
  for (double v : {raw.e, raw.c, raw.n}) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      std::ostringstream msg;
      msg << "NLI component " << v << " outside [0, 1]";
      throw NliProtocolError(msg.str());
    }
  }
  const double sum = raw.e + raw.c + raw.n;
  if (std::abs(sum - 1.0) > kNliSumTolerance) {
    std::ostringstream msg;
    msg << "NLI triple sums to " << sum << ", outside tolerance "
        << kNliSumTolerance;
    throw NliProtocolError(msg.str());
  }
  return {raw.e / sum, raw.c / sum, raw.n / sum};
}

/// Raw (premise, hypothesis) scorer. Throws TransportError on retryable
/// failures; output is validated by NliScorer, not here.
class NliBackend {
 public:
  virtual ~NliBackend() = default;
  virtual NliTriple score(const std::string& premise, const std::string& hypothesis) = 0;
};

/// Exact-match lookup over a JSON list of
/// {"premise", "hypothesis", "e", "c", "n"} records.
class ScriptedNli : public NliBackend {
 public:
  ScriptedNli() = default;

  static std::shared_ptr<ScriptedNli> from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ConfigError("NLI fixture must be a JSON array");
    auto out = std::make_shared<ScriptedNli>();
    for (const auto& r : j) {
      try {
        out->add(r.at("premise").get<std::string>(),
                 r.at("hypothesis").get<std::string>(),
                 {r.at("e").get<double>(), r.at("c").get<double>(),
                  r.at("n").get<double>()});
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed NLI fixture record: ") + e.what());
      }
    }
    return out;
  }

  static std::shared_ptr<ScriptedNli> from_file(const std::string& path) {
    return from_json(detail::read_json_file(path));
  }

  void add(std::string premise, std::string hypothesis, NliTriple t) {
    table_[{std::move(premise), std::move(hypothesis)}] = t;
  }

  NliTriple score(const std::string& premise, const std::string& hypothesis) override {
    auto it = table_.find({premise, hypothesis});
    if (it == table_.end()) {
      throw FixtureMissing("NLI fixture has no entry for premise \"" + premise +
                           "\" / hypothesis \"" + hypothesis + "\"");
    }
    return it->second;
  }

 private:
  std::map<std::pair<std::string, std::string>, NliTriple> table_;
};

/// POST <url>/nli {"premise", "hypothesis"} ->
/// {"entailment", "contradiction", "neutral"}.
class HttpNli : public NliBackend {
 public:
  explicit HttpNli(const std::string& url) : endpoint_(detail::route(url, "/nli")) {}

  NliTriple score(const std::string& premise, const std::string& hypothesis) override {
    const auto j = detail::post_json(endpoint_, {{"premise", premise}, {"hypothesis", hypothesis}});
    try {
      return {j.at("entailment").get<double>(), j.at("contradiction").get<double>(),
              j.at("neutral").get<double>()};
    } catch (const nlohmann::json::exception& e) {
      throw NliProtocolError(std::string("malformed /nli response: ") + e.what());
    }
  }

 private:
  detail::Endpoint endpoint_;
};

struct NliCacheStats {
  std::size_t requests = 0;       // score() calls
  std::size_t backend_calls = 0;  // calls that reached the backend
  std::size_t disk_hits = 0;      // answered from the on-disk cache

  double hit_ratio() const noexcept {
    return requests == 0 ? 0.0
                         : 1.0 - static_cast<double>(backend_calls) /
                                     static_cast<double>(requests);
  }
};

struct NliOptions {
  RetryPolicy retry{};
  std::ptrdiff_t max_in_flight = 8;
  std::string disk_cache_path;  // empty disables the on-disk cache
};

// FNV-1a 64 over premise, a unit separator, and hypothesis.
inline std::string nli_cache_key(std::string_view premise, std::string_view hypothesis) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::string_view s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  mix(premise);
  mix("\x1f");
  mix(hypothesis);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xF];
  return out;
}

/// The NLI client every pipeline stage talks to.
///
/// Adds normalization, retries, an in-flight limit and a per-run cache on
/// top of a backend. Each distinct (premise, hypothesis) reaches the backend
/// at most once, even under concurrent callers. Thread-safe.
class NliScorer {
 public:
  explicit NliScorer(std::shared_ptr<NliBackend> backend, NliOptions options = {})
      : backend_(std::move(backend)),
        options_(std::move(options)),
        slots_(std::max<std::ptrdiff_t>(1, options_.max_in_flight)) {
    if (!options_.disk_cache_path.empty()) load_disk_cache();
  }

  NliScorer(const NliScorer&) = delete;
  NliScorer& operator=(const NliScorer&) = delete;

  NliTriple score(const std::string& premise, const std::string& hypothesis) {
    if (premise.empty() || hypothesis.empty()) {
      throw ContractViolation("NLI premise and hypothesis must be nonempty");
    }
    Key key{premise, hypothesis};
    std::promise<NliTriple> promise;
    std::shared_future<NliTriple> future;
    bool owner = false;
    {
      std::lock_guard lock(mu_);
      ++stats_.requests;
      auto it = cache_.find(key);
      if (it != cache_.end()) {
        future = it->second;
        if (disk_keys_.count(key)) ++stats_.disk_hits;
      } else {
        future = promise.get_future().share();
        cache_.emplace(key, future);
        ++stats_.backend_calls;
        owner = true;
      }
    }
    if (!owner) return future.get();

    try {
      const NliTriple t = fetch(premise, hypothesis);
      promise.set_value(t);
      persist(premise, hypothesis, t);
    } catch (...) {
      promise.set_exception(std::current_exception());
      std::lock_guard lock(mu_);
      cache_.erase(key);
    }
    return future.get();
  }

  NliCacheStats stats() const {
    std::lock_guard lock(mu_);
    return stats_;
  }

 private:
  using Key = std::pair<std::string, std::string>;

  NliTriple fetch(const std::string& premise, const std::string& hypothesis) {
    slots_.acquire();
    struct Release {
      std::counting_semaphore<>& s;
      ~Release() { s.release(); }
    } release{slots_};
    try {
      return normalize(
          with_retry(options_.retry, [&] { return backend_->score(premise, hypothesis); }));
    } catch (const TransportError& e) {
      throw NliUnavailable(std::string("NLI backend unavailable: ") + e.what());
    }
  }

  void load_disk_cache() {
    std::ifstream in(options_.disk_cache_path);
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        const auto j = nlohmann::json::parse(line);
        const auto premise = j.at("premise").get<std::string>();
        const auto hypothesis = j.at("hypothesis").get<std::string>();
        if (j.at("key").get<std::string>() != nli_cache_key(premise, hypothesis)) continue;
        // Stored triples were normalized when first fetched; re-dividing
        // would perturb the last bit, so they are only validated here.
        const NliTriple t{j.at("e").get<double>(), j.at("c").get<double>(),
                          j.at("n").get<double>()};
        normalize(t);
        std::promise<NliTriple> p;
        p.set_value(t);
        cache_.emplace(Key{premise, hypothesis}, p.get_future().share());
        disk_keys_.insert(Key{premise, hypothesis});
      } catch (const std::exception&) {
        // A torn or stale line is skipped; the pair is simply re-scored.
      }
    }
  }

  void persist(const std::string& premise, const std::string& hypothesis, const NliTriple& t) {
    if (options_.disk_cache_path.empty()) return;
    nlohmann::ordered_json j{{"key", nli_cache_key(premise, hypothesis)},
                             {"premise", premise},
                             {"hypothesis", hypothesis},
                             {"e", t.e},
                             {"c", t.c},
                             {"n", t.n}};
    std::lock_guard lock(file_mu_);
    std::ofstream out(options_.disk_cache_path, std::ios::app);
    out << j.dump() << '\n';
  }

  std::shared_ptr<NliBackend> backend_;
  NliOptions options_;
  std::counting_semaphore<> slots_;
  mutable std::mutex mu_;
  std::mutex file_mu_;
  std::map<Key, std::shared_future<NliTriple>> cache_;
  std::set<Key> disk_keys_;
  NliCacheStats stats_;
};

}  // namespace fizz
