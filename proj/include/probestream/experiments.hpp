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

// Probe-count experiments shared by the command-line tool and the tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "probestream/online_edit.hpp"
#include "probestream/rng.hpp"

namespace probestream {

/// Uniform string over 2^delta symbols.
inline SymbolString random_string(std::size_t length, unsigned delta, Rng& rng) {
  std::vector<Symbol> s(length);
  for (auto& x : s) x = static_cast<Symbol>(rng.below(std::uint64_t{1} << delta));
  return SymbolString(std::move(s));
}

struct ProbePoint {
  std::size_t n = 0;
  unsigned w = 0;
  Variant variant = Variant::alg2;
  double probes = 0;  // per arrival, over arrivals [2n, 3n)
  double reads = 0;
  double writes = 0;
  double bits = 0;    // bits read plus written, per arrival
  double normalized = 0;  // probes / (log2(n)^2 / w)
};

/// Runs an engine over a random length-3n stream and averages the cost of
/// the last n arrivals.
inline ProbePoint measure_probes(std::size_t n, unsigned w, Variant variant, std::uint64_t seed, unsigned delta = 2,
                                 bool charge_arrival = false) {
  Rng rng(derive_seed(seed, n));
  const SymbolString fixed = random_string(n, delta, rng);
  const SymbolString stream = random_string(3 * n, delta, rng);
  EngineOptions opts;
  opts.w = w;
  opts.delta = delta;
  opts.variant = variant;
  opts.charge_arrival = charge_arrival;
  opts.keep_log = false;
  OnlineEditEngine engine(fixed, opts);
  for (Symbol s : stream) engine.arrival(s);
  const ProbeStats st =
      engine.memory().probe_stats(static_cast<std::uint32_t>(2 * n), static_cast<std::uint32_t>(3 * n - 1));
  ProbePoint p;
  p.n = n;
  p.w = w;
  p.variant = variant;
  const auto dn = static_cast<double>(n);
  p.probes = static_cast<double>(st.probes) / dn;
  p.reads = static_cast<double>(st.reads) / dn;
  p.writes = static_cast<double>(st.writes) / dn;
  p.bits = static_cast<double>(st.bits_read + st.bits_written) / dn;
  const double lg = std::log2(dn);
  p.normalized = p.probes / (lg * lg / static_cast<double>(w));
  return p;
}

struct ScalingFit {
  double c = 0;              // probes ~ c * log2(n)^2 / w
  double max_deviation = 0;  // max over points of |y / (c x) - 1|
  double exponent = 0;       // least-squares slope of ln y against ln log2 n
};

inline ScalingFit fit_log_squared(const std::vector<ProbePoint>& points) {
  if (points.size() < 2) throw std::invalid_argument("fit_log_squared: need at least two points");
  ScalingFit fit;
  double log_ratio = 0;
  for (const auto& p : points) log_ratio += std::log(p.normalized);
  fit.c = std::exp(log_ratio / static_cast<double>(points.size()));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : points) {
    fit.max_deviation = std::max(fit.max_deviation, std::abs(p.normalized / fit.c - 1.0));
    const double x = std::log(std::log2(static_cast<double>(p.n)));
    const double y = std::log(p.probes);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const auto k = static_cast<double>(points.size());
  fit.exponent = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return fit;
}

}  // namespace probestream
