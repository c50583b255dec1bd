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

#include <cstddef>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include <httplib.h>
#include <json.hpp>

#include "fizz/errors.hpp"

namespace fizz {

enum class FinishReason { Stop, Length, Other };

struct LlmRequest {
  std::string prompt;
  int max_tokens = 512;
  double temperature = 0.0;
};

struct LlmResponse {
  std::string completion;
  FinishReason finish_reason = FinishReason::Stop;
};

/// Text-completion backend. Implementations must tolerate concurrent calls
/// and throw TransportError for retryable failures.
class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual LlmResponse complete(const LlmRequest& request) = 0;
};

namespace detail {

// Last non-empty line of a prompt, which is the sentence being decomposed.
inline std::string prompt_subject(std::string_view prompt) {
  while (!prompt.empty() && (prompt.back() == '\n' || prompt.back() == '\r')) {
    prompt.remove_suffix(1);
  }
  const auto nl = prompt.rfind('\n');
  return std::string(nl == std::string_view::npos ? prompt : prompt.substr(nl + 1));
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open fixture file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
}

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;  // starts with '/'
};

inline Endpoint split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw ConfigError("URL needs a scheme: " + url);
  }
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

// Appends `route` unless the path already ends with it.
inline Endpoint route(const std::string& url, std::string_view route) {
  Endpoint ep = split_url(url);
  if (ep.path.size() >= route.size() &&
      ep.path.compare(ep.path.size() - route.size(), route.size(), route) == 0) {
    return ep;
  }
  if (!ep.path.empty() && ep.path.back() == '/') ep.path.pop_back();
  ep.path += route;
  return ep;
}

inline nlohmann::json post_json(const Endpoint& ep, const nlohmann::json& body,
                                const std::string& bearer = {},
                                int timeout_seconds = 120) {
  httplib::Client client(ep.base);
  client.set_connection_timeout(10);
  client.set_read_timeout(timeout_seconds);
  httplib::Headers headers;
  if (!bearer.empty()) headers.emplace("Authorization", "Bearer " + bearer);
  auto res = client.Post(ep.path, headers, body.dump(), "application/json");
  if (!res) {
    throw TransportError("POST " + ep.base + ep.path + " failed: " +
                         httplib::to_string(res.error()));
  }
  if (res->status >= 500 || res->status == 429) {
    throw TransportError("POST " + ep.base + ep.path + " returned HTTP " +
                         std::to_string(res->status));
  }
  if (res->status != 200) {
    throw Error("POST " + ep.base + ep.path + " returned HTTP " +
                std::to_string(res->status) + ": " + res->body);
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("non-JSON response from " + ep.base + ep.path + ": " + e.what());
  }
}

}  // namespace detail

/// Replays recorded completions. The fixture is a JSON object mapping each
/// summary sentence to the completion text the model produced for it.
class ScriptedLlm : public LlmClient {
 public:
  explicit ScriptedLlm(std::map<std::string, std::string> completions)
      : completions_(std::move(completions)) {}

  static std::shared_ptr<ScriptedLlm> from_file(const std::string& path) {
    const auto j = detail::read_json_file(path);
    if (!j.is_object()) throw ConfigError("LLM fixture must be a JSON object: " + path);
    return std::make_shared<ScriptedLlm>(j.get<std::map<std::string, std::string>>());
  }

  LlmResponse complete(const LlmRequest& request) override {
    const auto key = detail::prompt_subject(request.prompt);
    auto it = completions_.find(key);
    if (it == completions_.end()) {
      throw FixtureMissing("LLM fixture has no completion for: " + key);
    }
    std::lock_guard lock(mu_);
    ++calls_;
    return {it->second, FinishReason::Stop};
  }

  std::size_t calls() const {
    std::lock_guard lock(mu_);
    return calls_;
  }

 private:
  std::map<std::string, std::string> completions_;
  mutable std::mutex mu_;
  std::size_t calls_ = 0;
};

/// Chat-completion style HTTP client.
///
/// Sends {"model", "messages": [{"role": "user", "content": prompt}],
/// "temperature", "max_tokens"} and accepts either {"completion": str} or
/// the OpenAI-style {"choices": [{"message": {"content"}} | {"text"}]}.
class HttpLlm : public LlmClient {
 public:
  HttpLlm(std::string url, std::string model, std::string token = {})
      : endpoint_(detail::split_url(url)),
        model_(std::move(model)),
        token_(std::move(token)) {}

  LlmResponse complete(const LlmRequest& request) override {
    nlohmann::json body{
        {"model", model_},
        {"messages", {{{"role", "user"}, {"content", request.prompt}}}},
        {"temperature", request.temperature},
        {"max_tokens", request.max_tokens}};
    const auto j = detail::post_json(endpoint_, body, token_);
    return parse_response(j);
  }

  static LlmResponse parse_response(const nlohmann::json& j) {
    LlmResponse r;
    auto finish = [](const nlohmann::json& obj) {
      if (!obj.contains("finish_reason") || !obj.at("finish_reason").is_string()) {
        return FinishReason::Stop;
      }
      const auto s = obj.at("finish_reason").get<std::string>();
      if (s == "stop") return FinishReason::Stop;
      if (s == "length") return FinishReason::Length;
      return FinishReason::Other;
    };
    if (j.contains("completion") && j.at("completion").is_string()) {
      r.completion = j.at("completion").get<std::string>();
      r.finish_reason = finish(j);
      return r;
    }
    if (j.contains("choices") && j.at("choices").is_array() && !j.at("choices").empty()) {
      const auto& c = j.at("choices").at(0);
      if (c.contains("message") && c.at("message").contains("content")) {
        r.completion = c.at("message").at("content").get<std::string>();
      } else if (c.contains("text")) {
        r.completion = c.at("text").get<std::string>();
      } else {
        throw Error("LLM response choice has neither message.content nor text");
      }
      r.finish_reason = finish(c);
      return r;
    }
    throw Error("LLM response has no completion text");
  }

 private:
  detail::Endpoint endpoint_;
  std::string model_;
  std::string token_;
};

}  // namespace fizz
