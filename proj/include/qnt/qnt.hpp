// Copyright 2026 The qnt Authors
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

#include "qnt/errors.hpp"
#include "qnt/ilp.hpp"
#include "qnt/linalg.hpp"
#include "qnt/mle.hpp"
#include "qnt/network.hpp"
#include "qnt/plan.hpp"
#include "qnt/qfi.hpp"
#include "qnt/rng.hpp"
#include "qnt/scenario.hpp"
#include "qnt/sim.hpp"
#include "qnt/solver.hpp"
#include "qnt/star.hpp"
#include "qnt/study.hpp"
