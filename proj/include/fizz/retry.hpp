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

#include <chrono>
#include <functional>
#include <thread>
#include <utility>

#include "fizz/errors.hpp"

namespace fizz {

/// Retry schedule for transport failures: one initial attempt, then up to
/// `retries` more, sleeping base_delay * 2^r before retry r (1s, 2s, 4s).
struct RetryPolicy {
  int retries = 3;
  std::chrono::milliseconds base_delay{1000};
  std::function<void(std::chrono::milliseconds)> sleep =
      [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };

  static RetryPolicy none() {
    RetryPolicy p;
    p.retries = 0;
    return p;
  }
};

// Calls f, retrying only on TransportError. The last TransportError escapes.
template <typename F>
auto with_retry(const RetryPolicy& policy, F&& f) -> decltype(f()) {
  for (int attempt = 0;; ++attempt) {
    try {
      return f();
    } catch (const TransportError&) {
      if (attempt >= policy.retries) throw;
      if (policy.sleep) policy.sleep(policy.base_delay * (1 << attempt));
    }
  }
}

}  // namespace fizz
