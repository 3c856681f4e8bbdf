// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 pilotopt contributors
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

#include "pilotopt/common.hpp"
#include "pilotopt/estimation.hpp"
#include "pilotopt/experiment.hpp"
#include "pilotopt/gp.hpp"
#include "pilotopt/montecarlo.hpp"
#include "pilotopt/network.hpp"
#include "pilotopt/optimize.hpp"
#include "pilotopt/pilots.hpp"
#include "pilotopt/rng.hpp"
#include "pilotopt/se.hpp"
#include "pilotopt/serialize.hpp"
#include "pilotopt/threading.hpp"
