// Copyright 2026 The secagg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "secagg/agg_sig.hpp"
#include "secagg/ec_group.hpp"
#include "secagg/error.hpp"
#include "secagg/numeric.hpp"
#include "secagg/ou_phe.hpp"
#include "secagg/protocol.hpp"
#include "secagg/records.hpp"
#include "secagg/selftest.hpp"
#include "secagg/simnet.hpp"
