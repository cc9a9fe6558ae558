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

// Whole-stream drivers: raw reference outputs, and the normalized path
// (remap, pad to a power of two, solve, correct).
//
// Per problem:
//   edit         remap; pad with a fresh symbol; subtract the pad length
//   hamming      remap; pad with a fresh symbol; subtract the pad length
//   lcs          remap; pad with a fresh symbol; window stays n wide
//   convolution  no remap (values matter); pad with zeros
//
// Window problems see a padded window of n' symbols. Before n' symbols have
// arrived the missing prefix is filled with a code that matches nothing in
// F' (hamming) or with zeros (convolution), so the outputs line up with the
// raw ones from the first full raw window on.

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "probestream/core_model.hpp"
#include "probestream/online_edit.hpp"
#include "probestream/oracle_dp.hpp"

namespace probestream {

using OutputSeries = std::vector<std::optional<Wide>>;

/// Reference outputs, one entry per arrival; nullopt until the window fills.
inline OutputSeries solve_raw(Problem problem, const SymbolString& fixed, const SymbolString& stream,
                              std::optional<unsigned> modulus_bits = std::nullopt) {
  OutputSeries out;
  out.reserve(stream.size());
  if (problem == Problem::edit) {
    OnlineEditNaive engine(fixed);
    for (Symbol s : stream) out.emplace_back(engine.arrival(s));
    return out;
  }
  OnlineWindowEngine engine(problem, fixed, modulus_bits);
  for (Symbol s : stream) out.push_back(engine.arrival(s));
  return out;
}

/// Same outputs through the normalized instance. Edit distance runs on the
/// cell-probe engine with the given options (delta is overridden to fit the
/// normalized alphabet).
inline OutputSeries solve_normalized(Problem problem, const SymbolString& fixed, const SymbolString& stream,
                                     std::optional<unsigned> modulus_bits = std::nullopt,
                                     EngineOptions engine_opts = {}) {
  if (fixed.empty()) throw std::invalid_argument("solve_normalized: empty fixed string");
  OutputSeries out;
  out.reserve(stream.size());
  if (problem == Problem::convolution) {
    NormalizedProblem np = pad_to_power_of_two(fixed, 0);
    std::vector<Symbol> s(np.offset, 0);
    s.insert(s.end(), stream.begin(), stream.end());
    OnlineWindowEngine engine(problem, np.fixed, modulus_bits);
    for (std::size_t k = 0; k < s.size(); ++k) {
      auto y = engine.arrival(s[k]);
      if (k >= np.offset) out.push_back(k + 1 >= np.offset + fixed.size() ? y : std::nullopt);
    }
    return out;
  }

  const NormalizedProblem np = normalize(fixed);
  const SymbolString mapped = np.remap.apply(stream);
  const auto offset = static_cast<Wide>(np.offset);

  if (problem == Problem::edit) {
    engine_opts.delta = normalized_alphabet(np).delta();
    OnlineEditEngine engine(np.fixed, engine_opts);
    for (Symbol s : mapped) out.emplace_back(static_cast<Wide>(engine.arrival(s)) - offset);
    return out;
  }
  if (problem == Problem::lcs) {
    BitParallelLcs padded(np.fixed);
    std::vector<Symbol> window;
    for (Symbol s : mapped) {
      window.push_back(s);
      if (window.size() > np.n) window.erase(window.begin());
      if (window.size() < np.n) {
        out.emplace_back(std::nullopt);
        continue;
      }
      out.emplace_back(static_cast<Wide>(padded.length(window)));
    }
    return out;
  }
  // Hamming.
  const Symbol filler = np.sigma + 1;
  std::vector<Symbol> s(np.offset, filler);
  s.insert(s.end(), mapped.begin(), mapped.end());
  OnlineWindowEngine engine(problem, np.fixed, modulus_bits);
  for (std::size_t k = 0; k < s.size(); ++k) {
    auto y = engine.arrival(s[k]);
    if (k < np.offset) continue;
    out.push_back(y && k + 1 >= np.offset + fixed.size() ? std::optional<Wide>(*y - offset) : std::nullopt);
  }
  return out;
}

}  // namespace probestream
