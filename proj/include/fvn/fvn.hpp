/*
 * Copyright 2026 The fvn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "fvn/aggregation.hpp"
#include "fvn/assr.hpp"
#include "fvn/cli.hpp"
#include "fvn/dot.hpp"
#include "fvn/error.hpp"
#include "fvn/expr.hpp"
#include "fvn/json.hpp"
#include "fvn/matrix.hpp"
#include "fvn/netdsl.hpp"
#include "fvn/rng.hpp"
#include "fvn/transition.hpp"
