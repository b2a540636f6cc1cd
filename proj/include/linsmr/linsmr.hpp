/*
 * Copyright (c) 2026, the linsmr authors
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

#ifndef LINSMR_LINSMR_HPP_
#define LINSMR_LINSMR_HPP_

#include "linsmr/checkers.hpp"
#include "linsmr/errors.hpp"
#include "linsmr/generators.hpp"
#include "linsmr/history.hpp"
#include "linsmr/program.hpp"
#include "linsmr/quorum.hpp"
#include "linsmr/render.hpp"
#include "linsmr/scenarios.hpp"
#include "linsmr/scheduler.hpp"
#include "linsmr/simulator.hpp"
#include "linsmr/specs.hpp"
#include "linsmr/suites.hpp"
#include "linsmr/trace.hpp"
#include "linsmr/value.hpp"
#include "linsmr/verdict.hpp"
#include "linsmr/voting.hpp"

#endif  // LINSMR_LINSMR_HPP_
