// Copyright 2026 The Authors.
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

#include "mcstream/constraint.hpp"
#include "mcstream/counting.hpp"
#include "mcstream/element.hpp"
#include "mcstream/guesses.hpp"
#include "mcstream/instance.hpp"
#include "mcstream/intersection.hpp"
#include "mcstream/lowerbound.hpp"
#include "mcstream/matroid.hpp"
#include "mcstream/metric.hpp"
#include "mcstream/offline.hpp"
#include "mcstream/run.hpp"
#include "mcstream/streaming.hpp"
