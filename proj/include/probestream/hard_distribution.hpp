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

// The hard input distribution for edit distance and LCS, and the coin
// matrix used to reason about LCS(F, S_t) at well-aligned arrivals.
//
//   F = p^pad x p^pad x ...     x = f, except one h per power of two j in
//                               [sqrt(n), n], placed at the f nearest n-j
//   S = p^pad z_1 p^pad z_2 ... z_k uniform over {h, t}
//
// Coin k sits at stream position k(pad+1) + pad. At a well-aligned arrival
// every f or h of F faces a coin and every p faces a p.

#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "probestream/core_model.hpp"
#include "probestream/oracle_dp.hpp"
#include "probestream/rng.hpp"

namespace probestream {

namespace hard_symbol {
inline constexpr Symbol p = 0;
inline constexpr Symbol f = 1;
inline constexpr Symbol h = 2;
inline constexpr Symbol t = 3;
}  // namespace hard_symbol

/// pad + 1 is the power of two nearest 4*sqrt(log n * log log n) + 1; ties go
/// to the smaller power.
inline std::size_t hard_pad(std::size_t n) {
  if (!is_power_of_two(n) || n < 64) throw std::invalid_argument("hard_pad: n must be a power of two >= 64");
  const double lg = std::log2(static_cast<double>(n));
  const double target = 4.0 * std::sqrt(lg * std::log2(lg)) + 1.0;
  const auto lo = std::bit_floor(static_cast<std::uint64_t>(target));
  const auto hi = lo * 2;
  const std::uint64_t period = (target - static_cast<double>(lo) <= static_cast<double>(hi) - target) ? lo : hi;
  return static_cast<std::size_t>(period - 1);
}

/// The unrounded pad value, for reports.
inline double hard_pad_exact(std::size_t n) {
  const double lg = std::log2(static_cast<double>(n));
  return 4.0 * std::sqrt(lg * std::log2(lg));
}

struct HardInstance {
  std::size_t n = 0;
  std::size_t pad = 0;
  SymbolString fixed;
  std::vector<std::size_t> h_positions;  // ascending
  std::size_t n_p = 0;
  std::size_t n_f = 0;
  std::size_t n_h = 0;

  std::size_t period() const { return pad + 1; }
  std::size_t coin_count() const { return 3 * n / (pad + 1); }

  /// F with h at the given f-slots; slot k is position k(pad+1)+pad.
  static HardInstance custom(std::size_t n, std::size_t pad, const std::vector<std::size_t>& h_slots) {
    if (n == 0 || pad == 0 || n % (pad + 1) != 0) throw std::invalid_argument("HardInstance: pad+1 must divide n");
    const std::size_t slots = n / (pad + 1);
    HardInstance inst;
    inst.n = n;
    inst.pad = pad;
    std::vector<Symbol> f(n, hard_symbol::p);
    for (std::size_t k = 0; k < slots; ++k) f[k * (pad + 1) + pad] = hard_symbol::f;
    for (std::size_t k : h_slots) {
      if (k >= slots) throw std::invalid_argument("HardInstance: h slot out of range");
      const std::size_t pos = k * (pad + 1) + pad;
      if (f[pos] == hard_symbol::h) throw std::invalid_argument("HardInstance: duplicate h slot");
      f[pos] = hard_symbol::h;
      inst.h_positions.push_back(pos);
    }
    std::sort(inst.h_positions.begin(), inst.h_positions.end());
    inst.n_h = inst.h_positions.size();
    inst.n_f = slots - inst.n_h;
    inst.n_p = n - slots;
    inst.fixed = SymbolString(std::move(f));
    return inst;
  }
};

inline HardInstance build_fixed_string(std::size_t n) {
  const std::size_t pad = hard_pad(n);
  if (n % (pad + 1) != 0) throw std::invalid_argument("build_fixed_string: pad+1 does not divide n");
  const std::size_t slots = n / (pad + 1);
  std::vector<std::size_t> chosen;
  for (std::size_t j = 1; j <= n; j *= 2) {
    if (j * j < n) continue;
    const auto target = static_cast<std::int64_t>(n - j);
    std::size_t best = 0;
    std::int64_t best_dist = std::numeric_limits<std::int64_t>::max();
    for (std::size_t k = 0; k < slots; ++k) {
      const auto pos = static_cast<std::int64_t>(k * (pad + 1) + pad);
      const std::int64_t d = pos > target ? pos - target : target - pos;
      if (d < best_dist) {
        best_dist = d;
        best = k;
      }
    }
    if (std::find(chosen.begin(), chosen.end(), best) != chosen.end()) {
      throw std::logic_error("build_fixed_string: two powers of two picked the same f");
    }
    chosen.push_back(best);
  }
  return HardInstance::custom(n, pad, chosen);
}

struct HardStream {
  SymbolString stream;               // length 3n
  std::vector<Symbol> coins;         // z_1, z_2, ... as h or t codes
};

inline std::size_t coin_position(const HardInstance& inst, std::size_t k) { return k * (inst.pad + 1) + inst.pad; }

/// Stream with the given coin outcomes.
inline HardStream stream_from_coins(const HardInstance& inst, std::vector<Symbol> coins) {
  if (coins.size() != inst.coin_count()) throw std::invalid_argument("stream_from_coins: wrong coin count");
  std::vector<Symbol> s(3 * inst.n, hard_symbol::p);
  for (std::size_t k = 0; k < coins.size(); ++k) {
    if (coins[k] != hard_symbol::h && coins[k] != hard_symbol::t) throw std::invalid_argument("stream_from_coins: coin must be h or t");
    s[coin_position(inst, k)] = coins[k];
  }
  return HardStream{SymbolString(std::move(s)), std::move(coins)};
}

inline HardStream sample_stream(const HardInstance& inst, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Symbol> coins(inst.coin_count());
  for (auto& c : coins) c = rng.coin() ? hard_symbol::h : hard_symbol::t;
  return stream_from_coins(inst, std::move(coins));
}

inline bool is_well_aligned(const HardInstance& inst, std::size_t t) {
  return t < inst.n && (inst.n + 1 + t) % (inst.pad + 1) == 0;
}

inline std::vector<std::size_t> well_aligned_arrivals(const HardInstance& inst) {
  std::vector<std::size_t> out;
  for (std::size_t t = inst.pad; t < inst.n; t += inst.pad + 1) out.push_back(t);
  return out;
}

/// Index of the coin facing F[pos] at arrival t.
inline std::size_t aligned_coin(const HardInstance& inst, std::size_t pos, std::size_t t) {
  return (inst.n + 1 + t + pos - inst.pad) / (inst.pad + 1);
}

/// Hamming distance at a well-aligned arrival from coins alone:
/// n_f + number of t coins facing an h of F.
inline std::size_t aligned_hamming(const HardInstance& inst, const HardStream& hs, std::size_t t) {
  std::size_t tails = 0;
  for (std::size_t pos : inst.h_positions) tails += hs.coins[aligned_coin(inst, pos, t)] == hard_symbol::t;
  return inst.n_f + tails;
}

enum class Cell : std::uint8_t { tails = 0, heads = 1, missing = 2 };

/// One row per h of F, 2*pad+1 columns of coins centred on the coin that
/// faces that h. `coins` keeps the stream coin index of each cell so that a
/// selection can be checked for left-to-right order.
struct BoxMatrix {
  std::size_t pad = 0;
  std::size_t rows = 0;
  std::vector<Cell> cells;            // row-major
  std::vector<std::int64_t> coins;    // row-major

  std::size_t width() const { return 2 * pad + 1; }
  std::size_t center() const { return pad; }
  Cell at(std::size_t r, std::size_t c) const { return cells.at(r * width() + c); }
  std::int64_t coin(std::size_t r, std::size_t c) const { return coins.at(r * width() + c); }
  bool complete() const { return std::find(cells.begin(), cells.end(), Cell::missing) == cells.end(); }
};

inline BoxMatrix build_matrix(const HardInstance& inst, const HardStream& hs, std::size_t t) {
  if (!is_well_aligned(inst, t)) throw std::invalid_argument("build_matrix: arrival is not well-aligned");
  const auto first = static_cast<std::int64_t>((inst.n + 1 + t) / (inst.pad + 1));
  const auto last = static_cast<std::int64_t>((2 * inst.n + t - inst.pad) / (inst.pad + 1));
  BoxMatrix m;
  m.pad = inst.pad;
  m.rows = inst.n_h;
  for (std::size_t pos : inst.h_positions) {
    const auto centre = static_cast<std::int64_t>(aligned_coin(inst, pos, t));
    for (std::size_t c = 0; c < m.width(); ++c) {
      const std::int64_t k = centre + static_cast<std::int64_t>(c) - static_cast<std::int64_t>(inst.pad);
      m.coins.push_back(k);
      if (k < first || k > last) {
        m.cells.push_back(Cell::missing);
      } else {
        m.cells.push_back(hs.coins[static_cast<std::size_t>(k)] == hard_symbol::h ? Cell::heads : Cell::tails);
      }
    }
  }
  return m;
}

/// A complete matrix of fair coins whose rows use disjoint, increasing coin
/// ranges, as if the boxes were far apart.
inline BoxMatrix random_matrix(std::size_t rows, std::size_t pad, Rng& rng) {
  BoxMatrix m;
  m.pad = pad;
  m.rows = rows;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < m.width(); ++c) {
      m.cells.push_back(rng.coin() ? Cell::heads : Cell::tails);
      m.coins.push_back(static_cast<std::int64_t>(r * m.width() + c));
    }
  }
  return m;
}

/// True when no two boxes share a coin.
inline bool boxes_disjoint(const HardInstance& inst) {
  for (std::size_t r = 1; r < inst.h_positions.size(); ++r) {
    if (inst.h_positions[r] - inst.h_positions[r - 1] < (2 * inst.pad + 1) * (inst.pad + 1)) return false;
  }
  return true;
}

struct PiSelection {
  std::vector<std::optional<std::size_t>> chosen;  // column per row

  std::size_t size() const {
    return static_cast<std::size_t>(std::count_if(chosen.begin(), chosen.end(), [](const auto& c) { return c.has_value(); }));
  }
};

/// Every h of the centre column.
inline PiSelection pi_star(const BoxMatrix& m) {
  PiSelection pi;
  pi.chosen.resize(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) {
    if (m.at(r, m.center()) == Cell::heads) pi.chosen[r] = m.center();
  }
  return pi;
}

/// Throws unless pi picks only h cells, in strictly increasing coin order.
inline void validate_pi(const PiSelection& pi, const BoxMatrix& m) {
  if (pi.chosen.size() != m.rows) throw std::invalid_argument("length_pi: selection does not match matrix rows");
  std::optional<std::int64_t> prev;
  for (std::size_t r = 0; r < m.rows; ++r) {
    if (!pi.chosen[r]) continue;
    const std::size_t c = *pi.chosen[r];
    if (c >= m.width()) throw std::invalid_argument("length_pi: column out of range");
    if (m.at(r, c) != Cell::heads) throw std::invalid_argument("length_pi: selected cell is not an h");
    if (prev && m.coin(r, c) <= *prev) throw std::invalid_argument("length_pi: selected coins out of order");
    prev = m.coin(r, c);
  }
}

inline std::int64_t abs_diff(std::size_t a, std::size_t b) {
  return a > b ? static_cast<std::int64_t>(a - b) : static_cast<std::int64_t>(b - a);
}

/// 2 * length(pi). The empty selection has length n_p.
inline std::int64_t length_pi_doubled(const PiSelection& pi, const BoxMatrix& m, std::size_t n_p) {
  validate_pi(pi, m);
  std::vector<std::size_t> cols;
  for (const auto& c : pi.chosen) {
    if (c) cols.push_back(*c);
  }
  const auto base = 2 * static_cast<std::int64_t>(n_p);
  if (cols.empty()) return base;
  std::int64_t dist = abs_diff(m.center(), cols.front()) + abs_diff(m.center(), cols.back());
  for (std::size_t k = 1; k < cols.size(); ++k) dist += abs_diff(cols[k - 1], cols[k]);
  const std::int64_t doubled = base + 2 * static_cast<std::int64_t>(cols.size()) - static_cast<std::int64_t>(m.pad) * dist;
  if (doubled % 2 != 0) throw std::logic_error("length_pi: doubled length is odd");
  return doubled;
}

inline std::int64_t length_pi(const PiSelection& pi, const BoxMatrix& m, std::size_t n_p) {
  return length_pi_doubled(pi, m, n_p) / 2;
}

/// max over valid selections of length(pi), by DP over the last chosen cell.
inline std::int64_t max_length_over_pi(const BoxMatrix& m, std::size_t n_p) {
  constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::min();
  const std::size_t width = m.width();
  const auto pad = static_cast<std::int64_t>(m.pad);
  std::vector<std::int64_t> best(m.rows * width, kNone);
  std::int64_t answer = 2 * static_cast<std::int64_t>(n_p);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      if (m.at(r, c) != Cell::heads) continue;
      std::int64_t v = 2 * static_cast<std::int64_t>(n_p) + 2 - pad * abs_diff(m.center(), c);
      const std::int64_t coin = m.coin(r, c);
      for (std::size_t r2 = 0; r2 < r; ++r2) {
        for (std::size_t c2 = 0; c2 < width; ++c2) {
          const std::int64_t prev = best[r2 * width + c2];
          if (prev == kNone || m.coin(r2, c2) >= coin) continue;
          v = std::max(v, prev + 2 - pad * abs_diff(c, c2));
        }
      }
      best[r * width + c] = v;
      answer = std::max(answer, v - pad * abs_diff(c, m.center()));
    }
  }
  if (answer % 2 != 0) throw std::logic_error("max_length_over_pi: doubled length is odd");
  return answer / 2;
}

enum class MissingPolicy {
  strict,        // missing cells are an error
  exclude_rows,  // rows with a missing cell break every run
  as_tails,      // missing cells count as t
};

/// Every one-column run of d rows holds between d/2 - pad/4 and d/2 + pad/4
/// h entries.
inline bool is_balanced(const BoxMatrix& m, MissingPolicy policy = MissingPolicy::as_tails) {
  if (policy == MissingPolicy::strict && !m.complete()) throw std::invalid_argument("is_balanced: matrix has missing cells");
  std::vector<bool> usable(m.rows, true);
  if (policy == MissingPolicy::exclude_rows) {
    for (std::size_t r = 0; r < m.rows; ++r) {
      for (std::size_t c = 0; c < m.width(); ++c) {
        if (m.at(r, c) == Cell::missing) usable[r] = false;
      }
    }
  }
  const auto pad = static_cast<std::int64_t>(m.pad);
  for (std::size_t c = 0; c < m.width(); ++c) {
    for (std::size_t top = 0; top < m.rows; ++top) {
      std::int64_t heads = 0;
      for (std::size_t r = top; r < m.rows && usable[r]; ++r) {
        heads += m.at(r, c) == Cell::heads;
        const auto d = static_cast<std::int64_t>(r - top + 1);
        if (4 * heads < 2 * d - pad || 4 * heads > 2 * d + pad) return false;
      }
    }
  }
  return true;
}

/// Decodes one hidden coin from Ham(F, S_t). `stream` holds the known coins;
/// whatever sits in [hidden_first, hidden_last] (stream positions) is
/// ignored. Exactly one h of F must face a coin inside the hidden range.
inline Symbol recover_symbol(const HardInstance& inst, const HardStream& stream, std::size_t hidden_first,
                             std::size_t hidden_last, std::size_t ham, std::size_t t) {
  if (!is_well_aligned(inst, t)) throw std::invalid_argument("recover_symbol: arrival is not well-aligned");
  std::optional<std::size_t> hidden;
  std::size_t known_tails = 0;
  for (std::size_t pos : inst.h_positions) {
    const std::size_t k = aligned_coin(inst, pos, t);
    const std::size_t spos = coin_position(inst, k);
    if (spos >= hidden_first && spos <= hidden_last) {
      if (hidden) throw std::invalid_argument("recover_symbol: more than one h faces the hidden region");
      hidden = k;
    } else {
      known_tails += stream.coins[k] == hard_symbol::t;
    }
  }
  if (!hidden) throw std::invalid_argument("recover_symbol: no h faces the hidden region");
  if (ham < inst.n_f + known_tails || ham > inst.n_f + known_tails + 1) {
    throw std::invalid_argument("recover_symbol: Hamming value inconsistent with known coins");
  }
  return ham == inst.n_f + known_tails ? hard_symbol::h : hard_symbol::t;
}

struct LemmaRecord {
  std::size_t trial = 0;
  std::size_t t = 0;
  std::size_t lcs = 0;
  std::size_t ham = 0;
  int min_edit = 0;
  bool lcs_eq_n_minus_ham = false;
  bool balanced = false;
  std::int64_t max_pi = 0;      // max over selections of length(pi)
  std::int64_t length_star = 0; // length(pi*)
};

struct LemmaSummary {
  std::size_t n = 0;
  std::size_t pad = 0;
  double pad_exact = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t lcs_eq_count = 0;
  std::size_t balanced_count = 0;
  std::size_t squeeze_violations = 0;
  std::size_t structure_mismatches = 0;   // max_pi != LCS
  std::size_t center_mismatches = 0;      // length(pi*) != n - Ham
  std::size_t implication_failures = 0;   // balanced but max_pi != length(pi*)

  double lcs_eq_fraction() const { return samples ? static_cast<double>(lcs_eq_count) / static_cast<double>(samples) : 0.0; }
  double balanced_fraction() const {
    return samples ? static_cast<double>(balanced_count) / static_cast<double>(samples) : 0.0;
  }
};

struct LemmaReport {
  std::vector<LemmaRecord> records;
  LemmaSummary summary;
};

enum class LcsMethod { bit_parallel, quadratic };

struct LemmaSuiteOptions {
  std::size_t threads = 0;  // 0: PROBESTREAM_THREADS or hardware concurrency
  LcsMethod lcs = LcsMethod::bit_parallel;
  MissingPolicy policy = MissingPolicy::as_tails;
};

/// Worker count: the explicit request, else PROBESTREAM_THREADS, else the
/// hardware concurrency; never more than `jobs`.
inline std::size_t worker_count(std::size_t requested, std::size_t jobs) {
  std::size_t k = requested;
  if (k == 0) {
    if (const char* env = std::getenv("PROBESTREAM_THREADS")) k = static_cast<std::size_t>(std::strtoul(env, nullptr, 10));
  }
  if (k == 0) k = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(k, jobs));
}

/// Runs fn(job) for job in [0, jobs) on a small pool.
template <typename Fn>
void parallel_for(std::size_t jobs, std::size_t threads, Fn fn) {
  const std::size_t workers = worker_count(threads, jobs);
  if (workers <= 1) {
    for (std::size_t j = 0; j < jobs; ++j) fn(j);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t j = next++; j < jobs && !failed; j = next++) {
        try {
          fn(j);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

/// One trial: every well-aligned arrival of one sampled stream.
inline std::vector<LemmaRecord> lemma_trial(const HardInstance& inst, std::size_t trial, std::uint64_t seed,
                                            const LemmaSuiteOptions& opts, const BitParallelLcs* lcs_engine) {
  const HardStream hs = sample_stream(inst, derive_seed(seed, trial));
  const std::size_t n = inst.n;
  std::vector<int> min_edit(hs.stream.size());
  BitParallelMinEdit med(inst.fixed);
  for (std::size_t k = 0; k < hs.stream.size(); ++k) min_edit[k] = med.arrival(hs.stream[k]);

  std::vector<LemmaRecord> out;
  for (std::size_t t : well_aligned_arrivals(inst)) {
    const SymbolString window = window_view(hs.stream, t, n);
    LemmaRecord rec;
    rec.trial = trial;
    rec.t = t;
    rec.lcs = opts.lcs == LcsMethod::quadratic ? lcs(inst.fixed, window) : lcs_engine->length(window.span());
    rec.ham = hamming(inst.fixed, window);
    rec.min_edit = min_edit[2 * n + t];
    rec.lcs_eq_n_minus_ham = rec.lcs == n - rec.ham;
    const BoxMatrix m = build_matrix(inst, hs, t);
    rec.balanced = is_balanced(m, opts.policy);
    rec.max_pi = max_length_over_pi(m, inst.n_p);
    rec.length_star = length_pi(pi_star(m), m, inst.n_p);
    out.push_back(rec);
  }
  return out;
}

inline LemmaReport lemma_trial_suite(std::size_t n, std::size_t trials, std::uint64_t seed,
                                     const LemmaSuiteOptions& opts = {}) {
  if (trials == 0) throw std::invalid_argument("lemma_trial_suite: trials must be >= 1");
  const HardInstance inst = build_fixed_string(n);
  std::optional<BitParallelLcs> lcs_engine;
  if (opts.lcs == LcsMethod::bit_parallel) lcs_engine.emplace(inst.fixed);

  std::vector<std::vector<LemmaRecord>> per_trial(trials);
  parallel_for(trials, opts.threads, [&](std::size_t k) {
    per_trial[k] = lemma_trial(inst, k, seed, opts, lcs_engine ? &*lcs_engine : nullptr);
  });

  LemmaReport report;
  LemmaSummary& s = report.summary;
  s.n = n;
  s.pad = inst.pad;
  s.pad_exact = hard_pad_exact(n);
  s.trials = trials;
  s.seed = seed;
  for (auto& recs : per_trial) {
    for (auto& r : recs) {
      ++s.samples;
      s.lcs_eq_count += r.lcs_eq_n_minus_ham;
      s.balanced_count += r.balanced;
      const auto lower = static_cast<std::int64_t>(n) - static_cast<std::int64_t>(r.lcs);
      if (lower > r.min_edit || static_cast<std::size_t>(r.min_edit) > r.ham) ++s.squeeze_violations;
      if (r.max_pi != static_cast<std::int64_t>(r.lcs)) ++s.structure_mismatches;
      if (r.length_star != static_cast<std::int64_t>(n - r.ham)) ++s.center_mismatches;
      if (r.balanced && r.max_pi != r.length_star) ++s.implication_failures;
      report.records.push_back(r);
    }
  }
  return report;
}

inline void write_lemma_csv(const LemmaReport& report, std::ostream& out) {
  out << "trial,t,lcs,ham,min_edit,lcs_eq_n_minus_ham,balanced\n";
  for (const auto& r : report.records) {
    out << r.trial << ',' << r.t << ',' << r.lcs << ',' << r.ham << ',' << r.min_edit << ','
        << (r.lcs_eq_n_minus_ham ? 1 : 0) << ',' << (r.balanced ? 1 : 0) << '\n';
  }
}

}  // namespace probestream
