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


// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

namespace ps = probestream;
namespace pt = probestream::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

constexpr std::uint64_t kSeed = 20260415;

// Shared by criteria 1, 2 and 10: the same instances feed all three.
struct EngineSweep {
  std::size_t instances = 0;
  std::size_t output_mismatches = 0;
  std::uint64_t read_cap_violations = 0;
  double max_minimizer_ratio = 0;
  std::uint64_t stored_columns = 0;
  std::uint64_t budget_violations = 0;
  bool done = false;
};

EngineSweep& sweep() {
  static EngineSweep s;
  if (s.done) return s;
  ps::Rng rng(ps::derive_seed(kSeed, 1));
  for (std::size_t n : {8u, 16u, 32u, 64u, 128u}) {
    for (unsigned delta : {1u, 2u}) {
      for (int k = 0; k < 100; ++k) {
        const auto f = ps::random_string(n, delta, rng);
        const auto s_ = ps::random_string(3 * n, delta, rng);
        const auto want = ps::online_edit_outputs(f, s_);
        ++s.instances;
        for (auto v : {ps::Variant::naive, ps::Variant::alg1, ps::Variant::alg2}) {
          ps::EngineOptions o;
          o.variant = v;
          o.delta = delta;
          o.keep_log = false;
          o.track_minimizers = v == ps::Variant::alg1;
          ps::OnlineEditEngine engine(f, o);
          bool same = true;
          for (std::size_t i = 0; i < s_.size(); ++i) {
            same &= engine.arrival(s_[i]) == want[i];
            if (v == ps::Variant::naive || i == 0) continue;
            const auto& rec = engine.last_record();
            ++s.stored_columns;
            if (rec.bits_written > (2 * rec.blocks_stored + 1) * ps::field_width(n)) ++s.budget_violations;
          }
          if (!same) ++s.output_mismatches;
          if (v == ps::Variant::alg1) {
            s.read_cap_violations += engine.counters().read_cap_violations;
            s.max_minimizer_ratio = std::max(s.max_minimizer_ratio, engine.counters().max_minimizer_ratio);
          }
        }
      }
    }
  }
  s.done = true;
  return s;
}

Outcome correctness() {
  const auto& s = sweep();
  std::ostringstream d;
  d << s.instances << " instances x 3 engines, " << s.output_mismatches << " mismatching runs";
  return {s.output_mismatches == 0, d.str()};
}

Outcome read_cap() {
  const auto& s = sweep();
  std::ostringstream d;
  d << s.read_cap_violations << " minimizers beyond block 8(i-rho(i)); max block/(i-rho(i)) = " << s.max_minimizer_ratio;
  return {s.read_cap_violations == 0, d.str()};
}

Outcome probe_scaling() {
  std::vector<ps::ProbePoint> narrow;
  bool ratio_ok = true;
  double worst_ratio = 0;
  for (std::size_t n = 256; n <= 8192; n *= 2) {
    const auto a = ps::measure_probes(n, 64, ps::Variant::alg2, kSeed);
    const auto b = ps::measure_probes(n, 128, ps::Variant::alg2, kSeed);
    narrow.push_back(a);
    const double ratio = b.probes / a.probes;
    worst_ratio = std::max(worst_ratio, ratio);
    ratio_ok &= ratio <= 0.6;
  }
  const auto fit = ps::fit_log_squared(narrow);
  std::ostringstream d;
  d << "c = " << fit.c << ", max deviation = " << fit.max_deviation << " (limit 0.25), exponent = " << fit.exponent
    << ", worst (n,2w)/(n,w) = " << worst_ratio << " (limit 0.6)";
  return {fit.max_deviation <= 0.25 && ratio_ok, d.str()};
}

Outcome gap_sum() {
  std::uint64_t first = 0;
  for (std::uint64_t i = 1; i <= 16; ++i) first += i - ps::rho(i, 16);
  bool ok = first == 48 && ps::rho_gap_sum(1, 1024) >= 48;
  for (std::uint64_t n : {32u, 1024u, 65536u}) {
    std::uint64_t s = 0;
    for (std::uint64_t i = 1; i <= 16; ++i) s += i - ps::rho(i, n);
    ok &= s == 48;
  }
  std::uint64_t worst_excess = 0;
  for (unsigned e = 0; e <= 16; ++e) {
    const std::uint64_t n = std::uint64_t{1} << e;
    const std::uint64_t limit = 2 * n * e;
    std::uint64_t sum = ps::rho_gap_sum(1, n);
    std::uint64_t worst = sum;
    for (std::uint64_t start = 2; start <= 4 * n; ++start) {
      sum += (start + n - 1) - ps::rho(start + n - 1, n);
      sum -= (start - 1) - ps::rho(start - 1, n);
      worst = std::max(worst, sum);
    }
    if (n >= 2 && worst > limit) {
      ok = false;
      worst_excess = std::max(worst_excess, worst - limit);
    }
  }
  std::ostringstream d;
  d << "sum over i=1..16 = " << first << "; every window of n arrivals within 2 n log2 n for n <= 2^16";
  return {ok, d.str()};
}

Outcome squeeze() {
  ps::Rng rng(ps::derive_seed(kSeed, 5));
  std::size_t violations = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 1 + rng.below(64);
    const unsigned delta = 1 + static_cast<unsigned>(rng.below(2));
    const auto f = ps::random_string(n, delta, rng);
    const auto s = ps::random_string(n + rng.below(2 * n + 1), delta, rng);
    const auto w = s.substr(s.size() - n, n);
    const auto lcs = static_cast<int>(ps::lcs(f, w));
    const int med = ps::brute_force_min_edit(f, s);
    const auto ham = static_cast<int>(ps::hamming(f, w));
    if (static_cast<int>(n) - lcs > med || med > ham) ++violations;
  }
  const auto rep = ps::lemma_trial_suite(1024, 100, ps::derive_seed(kSeed, 55));
  std::ostringstream d;
  d << violations << " violations in 1000 fuzzed pairs, " << rep.summary.squeeze_violations << " in "
    << rep.summary.samples << " well-aligned arrivals at n=2^10";
  return {violations == 0 && rep.summary.squeeze_violations == 0, d.str()};
}

Outcome lcs_structure() {
  ps::LemmaSuiteOptions opts;
  opts.lcs = ps::LcsMethod::quadratic;
  std::size_t mismatches = 0, samples = 0;
  for (std::size_t n : {256u, 1024u}) {
    const auto rep = ps::lemma_trial_suite(n, 50, ps::derive_seed(kSeed, 6 + n), opts);
    mismatches += rep.summary.structure_mismatches + rep.summary.center_mismatches;
    samples += rep.summary.samples;
  }
  std::ostringstream d;
  d << mismatches << " mismatches against the quadratic LCS over " << samples << " well-aligned arrivals";
  return {mismatches == 0, d.str()};
}

Outcome balanced_implication() {
  ps::Rng rng(ps::derive_seed(kSeed, 7));
  std::size_t balanced = 0, failures = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t pad = 2 + rng.below(7);
    const auto m = ps::random_matrix(1 + rng.below(12), pad, rng);
    if (!ps::is_balanced(m)) continue;
    ++balanced;
    if (ps::max_length_over_pi(m, 1000) != ps::length_pi(ps::pi_star(m), m, 1000)) ++failures;
  }
  std::ostringstream d;
  d << balanced << " of 1000 matrices balanced, " << failures << " counterexamples";
  return {failures == 0 && balanced > 0, d.str()};
}

Outcome lcs_runs() {
  struct Point {
    std::size_t n, trials;
  };
  std::vector<double> fractions;
  std::ostringstream d;
  bool ok = true;
  for (const Point p : {Point{1024, 313}, Point{4096, 79}, Point{16384, 20}}) {
    const auto rep = ps::lemma_trial_suite(p.n, p.trials, ps::derive_seed(kSeed, 8 + p.n));
    const double f = rep.summary.lcs_eq_fraction();
    ok &= rep.summary.samples >= 10000 && f >= 0.5;
    if (!fractions.empty()) ok &= f >= fractions.back() - 0.03;
    fractions.push_back(f);
    d << "n=" << p.n << ": " << f << " over " << rep.summary.samples << "; ";
  }
  d << "need >= 0.5 and non-decreasing within 0.03";
  return {ok, d.str()};
}

Outcome info_transfer() {
  bool ok = true;
  std::size_t runs = 0;
  for (std::size_t n : {16u, 64u, 256u}) {
    for (auto v : {ps::Variant::naive, ps::Variant::alg1, ps::Variant::alg2}) {
      ps::Rng rng(ps::derive_seed(kSeed, 9 + n));
      const auto f = ps::random_string(n, 2, rng);
      const auto s = ps::random_string(3 * n, 2, rng);
      ps::EngineOptions o;
      o.variant = v;
      o.delta = 2;
      ps::OnlineEditEngine engine(f, o);
      for (ps::Symbol x : s) engine.arrival(x);
      for (std::int64_t base : {std::int64_t{0}, static_cast<std::int64_t>(n), static_cast<std::int64_t>(2 * n)}) {
        const auto rep = ps::transfer_report(engine.memory().log(), n, base);
        ok &= rep.iv_total <= rep.total_reads;
        ++runs;
      }
    }
  }
  ps::Rng rng(ps::derive_seed(kSeed, 99));
  std::size_t disagreements = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = std::size_t{1} << (1 + rng.below(5));
    const auto base = static_cast<std::int64_t>(rng.below(4));
    const auto log = pt::random_log(1 + rng.below(1000), 1 + rng.below(40), static_cast<std::uint32_t>(n + 4), rng);
    const ps::TransferTree tree(n);
    std::uint64_t sum = 0;
    for (std::size_t v = 1; v < n; ++v) {
      const auto iv = ps::compute_Iv(log, tree, v, base);
      disagreements += iv != pt::brute_force_Iv(log, tree, v, base);
      sum += iv;
    }
    std::uint64_t reads = 0;
    for (const auto& e : log.entries()) reads += e.kind == ps::AccessKind::read;
    ok &= sum <= reads;
  }
  std::ostringstream d;
  d << runs << " engine reports within total reads; " << disagreements << " node disagreements on 100 random logs";
  return {ok && disagreements == 0, d.str()};
}

Outcome codec() {
  ps::Rng rng(ps::derive_seed(kSeed, 10));
  std::size_t failures = 0;
  for (int k = 0; k < 10000; ++k) {
    const std::size_t n = 1 + rng.below(256);
    const auto col = pt::random_valid_column(n, rng);
    const auto bl = ps::decompose_blocks(col);
    const auto bits = ps::encode_column(bl, bl.count());
    if (bits.size() > (2 * bl.count() + 1) * ps::field_width(n)) ++failures;
    if (ps::decode_column(bits, n) != col) ++failures;
  }
  const auto& s = sweep();
  std::ostringstream d;
  d << failures << " round-trip failures in 10000 columns; " << s.budget_violations << " of " << s.stored_columns
    << " stored columns over budget";
  return {failures == 0 && s.budget_violations == 0, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"correctness", correctness},
      {"read-cap", read_cap},
      {"probe-scaling", probe_scaling},
      {"gap-sum", gap_sum},
      {"squeeze", squeeze},
      {"lcs-structure", lcs_structure},
      {"balanced-implication", balanced_implication},
      {"lcs-runs", lcs_runs},
      {"information-transfer", info_transfer},
      {"codec", codec},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2zu %-21s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures;
}
