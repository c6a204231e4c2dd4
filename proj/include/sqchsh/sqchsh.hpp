// Copyright 2026 The sqchsh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Everything except the command layer.

#pragma once

#include "sqchsh/game.hpp"
#include "sqchsh/hermitian.hpp"
#include "sqchsh/inputs.hpp"
#include "sqchsh/rng.hpp"
#include "sqchsh/sdp/certificates.hpp"
#include "sqchsh/sdp/embedding.hpp"
#include "sqchsh/sdp/problem.hpp"
#include "sqchsh/sdp/programs.hpp"
#include "sqchsh/sdp/solver.hpp"
