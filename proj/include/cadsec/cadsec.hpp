// Copyright 2026 The cadsec Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header for the numerical library. JSON support lives in io.hpp.

#pragma once

#include "cad.hpp"
#include "cad_sim.hpp"
#include "entropy.hpp"
#include "error.hpp"
#include "eve.hpp"
#include "keyrate.hpp"
#include "security.hpp"
#include "states.hpp"
