// Copyright 2026 The probestream Authors. All Rights Reserved.
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

#include "probestream/block_codec.hpp"
#include "probestream/core_model.hpp"
#include "probestream/experiments.hpp"
#include "probestream/hard_distribution.hpp"
#include "probestream/info_transfer.hpp"
#include "probestream/online_edit.hpp"
#include "probestream/pipeline.hpp"
#include "probestream/oracle_dp.hpp"
#include "probestream/probe_memory.hpp"
#include "probestream/rng.hpp"
