// SPDX-License-Identifier: Apache-2.0
//
// hnfsim - symbol-level secure precoding for hybrid near/far-field downlink
// Copyright (C) 2026 hnfsim contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "hnf/experiments.hpp"
#include "hnf/geometry.hpp"
#include "hnf/metrics.hpp"
#include "hnf/modulation.hpp"
#include "hnf/precoder.hpp"
#include "hnf/report.hpp"
#include "hnf/rng.hpp"
#include "hnf/scenario.hpp"
#include "hnf/scenario_io.hpp"
#include "hnf/solver.hpp"
#include "hnf/version.hpp"
