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

#include "fizz/benchmark.hpp"
#include "fizz/config.hpp"
#include "fizz/coref.hpp"
#include "fizz/decomposer.hpp"
#include "fizz/errors.hpp"
#include "fizz/factquality.hpp"
#include "fizz/filter.hpp"
#include "fizz/llm.hpp"
#include "fizz/nli.hpp"
#include "fizz/pipeline.hpp"
#include "fizz/scorer.hpp"
#include "fizz/segmentation.hpp"
