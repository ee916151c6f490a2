// Copyright 2026 The gapq Authors
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

#ifndef GAPQ_GAPQ_HPP
#define GAPQ_GAPQ_HPP

#include "gapq/common.hpp"
#include "gapq/canonical_form.hpp"
#include "gapq/presentation.hpp"
#include "gapq/program.hpp"
#include "gapq/simulator.hpp"
#include "gapq/counting.hpp"
#include "gapq/compiler.hpp"

#endif  // GAPQ_GAPQ_HPP
