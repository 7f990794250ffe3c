/*
 * Copyright 2026 The metric_pairs Authors
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

#include "metric_pairs/error.hpp"
#include "metric_pairs/metric_space.hpp"
#include "metric_pairs/cross_metric.hpp"
#include "metric_pairs/hausdorff.hpp"
#include "metric_pairs/constraint_search.hpp"
#include "metric_pairs/gluing.hpp"
#include "metric_pairs/gh_solver.hpp"
#include "metric_pairs/counting.hpp"
#include "metric_pairs/chain_lab.hpp"
