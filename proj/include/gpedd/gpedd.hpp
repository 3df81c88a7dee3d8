// Copyright 2026 The gpedd Authors
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

#include "bfgs.hpp"
#include "config.hpp"
#include "dla.hpp"
#include "domain_decomposition.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "fft.hpp"
#include "io.hpp"
#include "reference_newton.hpp"
#include "spectral_grid.hpp"
#include "statevector.hpp"
#include "trace.hpp"
#include "vqa_global.hpp"
