/*
 * Copyright 2026 The music-sim Authors
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

#include <music/allocation/allocators.hpp>
#include <music/allocation/brute_force.hpp>
#include <music/core/center_of_mobility.hpp>
#include <music/harness/experiment.hpp>
#include <music/mobility/mobility.hpp>
#include <music/mobility/uncertainty.hpp>
#include <music/profiles/profiles.hpp>
#include <music/registry/registry.hpp>
#include <music/workflow/expression.hpp>
#include <music/workflow/normalization.hpp>
#include <music/workflow/templates.hpp>
#include <music/workflow/workflow.hpp>

#include <gtest/gtest.h>

TEST(Smoke, Compiles) { SUCCEED(); }
