// -*-c++-*---------------------------------------------------------------------------------------
// Copyright 2026 The lisens authors
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

#ifndef LISENS_LISENS_HPP
#define LISENS_LISENS_HPP

#include "lisens/codes.hpp"
#include "lisens/config.hpp"
#include "lisens/error.hpp"
#include "lisens/io.hpp"
#include "lisens/metrics.hpp"
#include "lisens/operators.hpp"
#include "lisens/optics.hpp"
#include "lisens/pipeline.hpp"
#include "lisens/recovery.hpp"
#include "lisens/scene.hpp"
#include "lisens/simulator.hpp"
#include "lisens/types.hpp"

#endif  // LISENS_LISENS_HPP
