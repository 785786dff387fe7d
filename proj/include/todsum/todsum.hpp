// Copyright 2026 The TODSum Toolkit Authors.
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

// Umbrella header.

#pragma once

#include "todsum/baselines.hpp"
#include "todsum/corpus.hpp"
#include "todsum/error.hpp"
#include "todsum/evaluate.hpp"
#include "todsum/extractor.hpp"
#include "todsum/factual.hpp"
#include "todsum/ontology.hpp"
#include "todsum/perturb.hpp"
#include "todsum/rouge.hpp"
#include "todsum/state.hpp"
#include "todsum/state_codec.hpp"
#include "todsum/tokenizer.hpp"
