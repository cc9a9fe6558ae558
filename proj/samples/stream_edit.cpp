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

// Streams a short text against a fixed pattern and prints the smallest edit
// distance between the pattern and any suffix seen so far, plus probe costs.

#include <iostream>

#include "probestream/probestream.hpp"

int main() {
  namespace ps = probestream;
  const auto fixed = ps::SymbolString::from_text("needle");
  const auto stream = ps::SymbolString::from_text("haystack with a neeedle in it");

  const ps::NormalizedProblem np = ps::normalize(fixed);
  ps::EngineOptions opts;
  opts.w = 64;
  opts.delta = ps::normalized_alphabet(np).delta();
  ps::OnlineEditEngine engine(np.fixed, opts);

  std::size_t i = 0;
  for (ps::Symbol s : np.remap.apply(stream)) {
    const int d = engine.arrival(s) - static_cast<int>(np.offset);
    std::cout << static_cast<char>(stream[i++]) << ' ' << d << '\n';
  }
  const ps::ProbeStats st = engine.memory().totals();
  std::cout << "reads " << st.reads << ", writes " << st.writes << ", probes " << st.probes << '\n';
}
