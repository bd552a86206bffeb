// Copyright 2026 The Sketchlab Authors.
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

#include "sketchlab/accumulate.hpp"
#include "sketchlab/errors.hpp"
#include "sketchlab/experiment.hpp"
#include "sketchlab/io.hpp"
#include "sketchlab/kernel.hpp"
#include "sketchlab/linalg.hpp"
#include "sketchlab/rng.hpp"
#include "sketchlab/sketch.hpp"
#include "sketchlab/solvers.hpp"
#include "sketchlab/spectrum.hpp"
#include "sketchlab/surrogate.hpp"
#include "sketchlab/types.hpp"
