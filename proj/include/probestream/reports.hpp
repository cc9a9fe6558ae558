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

// JSON renderings of the report types.

#pragma once

#include <string>

#include <json.hpp>

#include "probestream/experiments.hpp"
#include "probestream/hard_distribution.hpp"
#include "probestream/info_transfer.hpp"
#include "probestream/probe_memory.hpp"

namespace probestream {

inline nlohmann::ordered_json to_json(const ProbeStats& s) {
  return {{"reads", s.reads},
          {"writes", s.writes},
          {"probes", s.probes},
          {"bits_read", s.bits_read},
          {"bits_written", s.bits_written}};
}

inline std::string pad_note(const LemmaSummary& s) {
  return "pad rounded so that pad+1 is a power of two: target " + std::to_string(s.pad_exact) + ", used " +
         std::to_string(s.pad);
}

inline nlohmann::ordered_json to_json(const LemmaSummary& s) {
  return {{"n", s.n},
          {"pad", s.pad},
          {"pad_target", s.pad_exact},
          {"pad_note", pad_note(s)},
          {"trials", s.trials},
          {"seed", s.seed},
          {"samples", s.samples},
          {"lcs_eq_n_minus_ham_fraction", s.lcs_eq_fraction()},
          {"balanced_fraction", s.balanced_fraction()},
          {"squeeze_violations", s.squeeze_violations},
          {"lcs_structure_mismatches", s.structure_mismatches},
          {"center_identity_mismatches", s.center_mismatches},
          {"balanced_implication_failures", s.implication_failures}};
}

inline nlohmann::ordered_json to_json(const TransferReport& r) {
  nlohmann::ordered_json depths = nlohmann::ordered_json::array();
  for (const auto& d : r.depths) {
    depths.push_back({{"depth", d.depth}, {"ell_v", d.ell}, {"Iv_sum", d.iv_sum}, {"Rv_sum", d.rv_sum}});
  }
  return {{"n", r.n},
          {"base", r.base},
          {"total_reads", r.total_reads},
          {"window_reads", r.window_reads},
          {"Iv_total", r.iv_total},
          {"depths", depths}};
}

inline nlohmann::ordered_json to_json(const ProbePoint& p) {
  return {{"n", p.n},
          {"w", p.w},
          {"alg", to_string(p.variant)},
          {"probes_per_arrival", p.probes},
          {"reads_per_arrival", p.reads},
          {"writes_per_arrival", p.writes},
          {"bits_per_arrival", p.bits},
          {"normalized", p.normalized}};
}

inline nlohmann::ordered_json to_json(const ScalingFit& f) {
  return {{"c", f.c}, {"max_deviation", f.max_deviation}, {"exponent", f.exponent}};
}

}  // namespace probestream
