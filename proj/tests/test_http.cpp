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

#include <atomic>
#include <string>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "fizz/pipeline.hpp"
#include "test_support.hpp"

namespace fizz {
namespace {

using namespace fizz::testing;

class ModelServer : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      last_auth_ = req.get_header_value("Authorization");
      last_body_ = nlohmann::json::parse(req.body);
      if (++chat_hits_ <= chat_failures_) {
        res.status = 503;
        return;
      }
      nlohmann::json out{{"choices", {{{"message", {{"role", "assistant"}, {"content", "- A fact."}}},
                                      {"finish_reason", "stop"}}}}};
      res.set_content(out.dump(), "application/json");
    });
    server_.Post("/coref", [this](const httplib::Request& req, httplib::Response& res) {
      const auto j = nlohmann::json::parse(req.body);
      const std::string text = j.at("text");
      nlohmann::json out{{"text", echo_wrong_ ? text + "!" : text}, {"clusters", nlohmann::json::array()}};
      if (text == "Anna said she left.") {
        out["clusters"] = {{{{"start", 0}, {"end", 4}, {"kind", "PROPER_NAME"}, {"possessive", false}},
                            {{"start", 10}, {"end", 13}, {"kind", "PRONOUN"}, {"possessive", false}}}};
      }
      res.set_content(out.dump(), "application/json");
    });
    server_.Post("/bad", [](const httplib::Request&, httplib::Response& res) {
      res.status = 400;
      res.set_content(R"({"error":"nope"})", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }
  std::string url(const std::string& path = "") const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> chat_hits_{0};
  int chat_failures_ = 0;
  bool echo_wrong_ = false;
  std::string last_auth_;
  nlohmann::json last_body_;
};

TEST_F(ModelServer, ChatRequestShape) {
  HttpLlm llm(url("/v1/chat/completions"), "test-model", "secret");
  const auto r = llm.complete({"Say something.", 256, 0.0});
  EXPECT_EQ(r.completion, "- A fact.");
  EXPECT_EQ(r.finish_reason, FinishReason::Stop);
  EXPECT_EQ(last_auth_, "Bearer secret");
  EXPECT_EQ(last_body_["model"], "test-model");
  EXPECT_EQ(last_body_["temperature"], 0.0);
  EXPECT_EQ(last_body_["max_tokens"], 256);
  EXPECT_EQ(last_body_["messages"][0]["role"], "user");
  EXPECT_EQ(last_body_["messages"][0]["content"], "Say something.");
}

TEST_F(ModelServer, DecomposerRetriesTransientFailures) {
  chat_failures_ = 2;
  HttpLlm llm(url("/v1/chat/completions"), "m");
  DecomposeOptions o;
  o.retry.sleep = [](std::chrono::milliseconds) {};
  const auto f = decompose(sentences({"Anything."}), llm, o);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].text, "A fact.");
  EXPECT_EQ(chat_hits_, 3);
}

TEST_F(ModelServer, ClientErrorIsNotRetried) {
  HttpLlm llm(url("/bad"), "m");
  DecomposeOptions o;
  o.retry.sleep = [](std::chrono::milliseconds) {};
  EXPECT_THROW(decompose(sentences({"Anything."}), llm, o), Error);
}

TEST(LlmResponse, AcceptsCompletionAndTextShapes) {
  EXPECT_EQ(HttpLlm::parse_response({{"completion", "x"}, {"finish_reason", "length"}}).finish_reason,
            FinishReason::Length);
  EXPECT_EQ(HttpLlm::parse_response({{"choices", {{{"text", "y"}}}}}).completion, "y");
  EXPECT_THROW(HttpLlm::parse_response({{"choices", nlohmann::json::array()}}), Error);
}

TEST_F(ModelServer, CorefResolvesOverHttp) {
  HttpCoref coref(url());
  const auto set = coref.clusters("Anna said she left.");
  ASSERT_EQ(set.clusters.size(), 1u);
  EXPECT_EQ(resolve(set.text, set).text, "Anna said Anna left.");
  EXPECT_TRUE(coref.clusters("Nothing here.").clusters.empty());
}

TEST_F(ModelServer, CorefEchoMismatchIsRejected) {
  echo_wrong_ = true;
  EXPECT_THROW(HttpCoref(url("/coref")).clusters("Anna said she left."), ValidationError);
}

TEST(HttpCoref, UnreachableIsTransport) {
  EXPECT_THROW(HttpCoref("http://127.0.0.1:1", RetryPolicy::none()).clusters("x"), TransportError);
}

}  // namespace
}  // namespace fizz
