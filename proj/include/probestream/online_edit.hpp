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

// Online edit distance in the cell-probe model.
//
// Column i of the lattice is rebuilt from column rho(i) instead of column
// i-1. Only a prefix of each column (the first 3(i - rho(i)) blocks, counted
// from row n-1) is kept, so a stored column costs O((i - rho(i)) log n) bits.
// Summed over n arrivals the lookback i - rho(i) is O(n log n), which gives
// O(log^2 n / w) amortized probes per arrival.
//
// Memory layout, for W = field_width(n):
//
//   [slot 0][slot 1] ... [slot n]   stream buffer: n+1 symbols of delta bits
//
// Column i lives in slot i mod (n+1). A slot holds (6n+1)*W bits rounded up
// to whole cells, so every slot starts on a cell boundary; so does the stream
// buffer. Symbol S[i] lives in buffer entry i mod (n+1).

#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "probestream/block_codec.hpp"
#include "probestream/core_model.hpp"
#include "probestream/oracle_dp.hpp"
#include "probestream/probe_memory.hpp"

namespace probestream {

inline std::uint64_t predecessor(std::uint64_t i) {
  if (i == 0) throw std::invalid_argument("predecessor: i must be positive");
  return i & (i - 1);
}

inline std::uint64_t rho(std::uint64_t i, std::uint64_t n) {
  if (i == 0) throw std::invalid_argument("rho: i must be positive");
  const std::uint64_t p = predecessor(i);
  if (i < n || p > i - n) return p;
  return i - n;
}

/// rho(i), rho(rho(i)), ... down to column 0.
inline std::vector<std::uint64_t> rho_chain(std::uint64_t i, std::uint64_t n) {
  std::vector<std::uint64_t> chain;
  while (i > 0) {
    i = rho(i, n);
    chain.push_back(i);
  }
  return chain;
}

/// Sum of i - rho(i) over the n arrivals i_start, ..., i_start + n - 1.
inline std::uint64_t rho_gap_sum(std::uint64_t i_start, std::uint64_t n) {
  if (i_start == 0) throw std::invalid_argument("rho_gap_sum: window must start at i >= 1");
  std::uint64_t sum = 0;
  for (std::uint64_t i = i_start; i < i_start + n; ++i) sum += i - rho(i, n);
  return sum;
}

inline constexpr int kNoSource = -2;

/// D~(., i) together with, for every finite row, the smallest row j' of
/// column rho(i) from which a minimum-weight path starts.
struct Slab {
  DpColumn column;
  std::vector<int> source;  // indexed j+1; kNoSource where infinite
};

namespace detail {

template <bool Traced>
Slab relax_slab(const DpColumn& src, std::span<const Symbol> symbols, const SymbolString& fixed) {
  if (symbols.empty()) throw std::invalid_argument("slab_shortest: empty slab");
  const std::size_t n = fixed.size();
  if (src.n() != n) throw std::invalid_argument("slab_shortest: column height does not match F");
  constexpr int kInf = INT_MAX / 4;
  std::vector<int> cur(n + 1), next(n + 1);
  std::vector<int> cur_src, next_src;
  if constexpr (Traced) {
    cur_src.assign(n + 1, kNoSource);
    next_src.assign(n + 1, kNoSource);
  }
  for (std::size_t k = 0; k <= n; ++k) {
    cur[k] = src.values()[k] < src.inf() ? src.values()[k] : kInf;
    if constexpr (Traced) {
      if (cur[k] < kInf) cur_src[k] = static_cast<int>(k) - 1;
    }
  }
  // Down edges inside the seed column.
  for (std::size_t k = 1; k <= n; ++k) {
    const int via = cur[k - 1] + 1;
    if constexpr (Traced) {
      if (via < cur[k] || (via == cur[k] && cur_src[k - 1] < cur_src[k])) {
        cur[k] = via;
        cur_src[k] = cur_src[k - 1];
      }
    } else {
      cur[k] = std::min(cur[k], via);
    }
  }
  for (Symbol s : symbols) {
    next[0] = cur[0];  // right edge on row -1 has weight 0
    if constexpr (Traced) next_src[0] = cur_src[0];
    for (std::size_t k = 1; k <= n; ++k) {
      const int right = cur[k] + 1;
      const int diag = cur[k - 1] + (fixed[k - 1] == s ? 0 : 1);
      const int down = next[k - 1] + 1;
      if constexpr (Traced) {
        int best = right;
        int from = cur_src[k];
        auto consider = [&](int v, int f) {
          if (v < best || (v == best && f < from)) {
            best = v;
            from = f;
          }
        };
        consider(diag, cur_src[k - 1]);
        consider(down, next_src[k - 1]);
        next[k] = best;
        next_src[k] = best < kInf ? from : kNoSource;
      } else {
        next[k] = std::min({right, diag, down});
      }
    }
    std::swap(cur, next);
    if constexpr (Traced) std::swap(cur_src, next_src);
  }
  Slab out;
  out.column = DpColumn(n);
  for (std::size_t k = 0; k <= n; ++k) {
    if (cur[k] >= kInf) continue;
    if (cur[k] > static_cast<int>(n)) throw std::logic_error("slab_shortest: finite value exceeds n");
    out.column.values()[k] = cur[k];
  }
  if constexpr (Traced) {
    out.source = std::move(cur_src);
    for (std::size_t k = 0; k <= n; ++k) {
      if (cur[k] >= kInf) out.source[k] = kNoSource;
    }
  }
  return out;
}

}  // namespace detail

/// D~(., i) from column rho(i). `symbols` is S[rho(i)+1 .. i].
inline DpColumn slab_shortest(const DpColumn& src, std::span<const Symbol> symbols, const SymbolString& fixed) {
  return detail::relax_slab<false>(src, symbols, fixed).column;
}

inline Slab slab_shortest_traced(const DpColumn& src, std::span<const Symbol> symbols, const SymbolString& fixed) {
  return detail::relax_slab<true>(src, symbols, fixed);
}

/// Keeps the first 3(i - rho_i) blocks of a D~ column; the rest become INF.
inline DpColumn truncate_column(const DpColumn& dtilde, std::uint64_t i, std::uint64_t rho_i) {
  if (rho_i >= i) throw std::invalid_argument("truncate_column: rho(i) must be below i");
  return reconstruct(truncate_blocks(decompose_blocks(dtilde), 3 * (i - rho_i)));
}

/// Largest j with D~(j-1) > D~(j) + 1 among finite neighbours, or nullopt.
inline std::optional<int> one_diff_violation(const DpColumn& col) {
  const int n = static_cast<int>(col.n());
  for (int j = 0; j <= n - 1; ++j) {
    if (col.finite(j) && col.finite(j - 1) && col.at(j - 1) > col.at(j) + 1) return j;
  }
  return std::nullopt;
}

enum class Variant { naive, alg1, alg2 };

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::naive: return "naive";
    case Variant::alg1: return "alg1";
    case Variant::alg2: return "alg2";
  }
  return "?";
}

inline Variant parse_variant(const std::string& s) {
  if (s == "naive") return Variant::naive;
  if (s == "alg1") return Variant::alg1;
  if (s == "alg2") return Variant::alg2;
  throw std::invalid_argument("unknown algorithm '" + s + "'");
}

struct EngineOptions {
  unsigned w = 64;
  unsigned delta = 1;
  Variant variant = Variant::alg2;
  bool charge_arrival = false;
  bool keep_log = true;
  bool track_minimizers = false;
};

/// What happened during one arrival.
struct ArrivalRecord {
  std::uint64_t i = 0;
  std::uint64_t rho = 0;
  std::size_t source_blocks = 0;   // blocks stored for column rho(i)
  std::size_t blocks_read = 0;
  std::size_t blocks_stored = 0;
  std::size_t bits_written = 0;
  // Filled when minimizers are tracked. Block numbers refer to column rho(i)
  // as read.
  std::size_t max_minimizer_block = 0;
  int output_source = kNoSource;   // minimizing row for D(n-1, i)
};

struct EngineCounters {
  std::uint64_t arrivals = 0;
  std::uint64_t read_cap_violations = 0;  // a minimizer beyond block 8(i - rho(i))
  std::uint64_t uninitialized_reads = 0;
  std::size_t max_blocks_read = 0;
  double max_minimizer_ratio = 0;         // max over i of minimizer block / (i - rho(i))
};

class OnlineEditEngine {
 public:
  OnlineEditEngine(SymbolString fixed, EngineOptions opts)
      : fixed_(std::move(fixed)),
        opts_(opts),
        n_(fixed_.size()),
        width_(field_width(fixed_.size())),
        memory_(opts.w, opts.keep_log),
        alphabet_(opts.delta) {
    if (!is_power_of_two(n_)) throw std::invalid_argument("OnlineEditEngine: |F| must be a power of two");
    if (!fixed_.valid_for(alphabet_)) throw std::invalid_argument("OnlineEditEngine: F does not fit in delta bits");
    slot_bits_ = align_up((6 * n_ + 1) * width_);
    buffer_base_ = (n_ + 1) * slot_bits_;
    input_cell_ = align_up(buffer_base_ + (n_ + 1) * opts_.delta);
  }

  const SymbolString& fixed() const { return fixed_; }
  const EngineOptions& options() const { return opts_; }
  const ProbeMemory& memory() const { return memory_; }
  const EngineCounters& counters() const { return counters_; }
  const ArrivalRecord& last_record() const { return record_; }
  /// D(., i) as stored for the latest arrival.
  const DpColumn& last_column() const { return stored_; }
  std::uint64_t next_index() const { return i_; }

  int arrival(Symbol s) {
    if (!alphabet_.contains(s)) throw std::invalid_argument("arrival: symbol does not fit in delta bits");
    if (i_ > UINT32_MAX) throw std::overflow_error("arrival: arrival index exceeds 32 bits");
    const auto t = static_cast<std::uint32_t>(i_);
    record_ = ArrivalRecord{};
    record_.i = i_;
    if (opts_.charge_arrival) {
      BitString sym;
      sym.append(s, opts_.delta);
      memory_.store_uncharged(input_cell_, sym);
      s = static_cast<Symbol>(memory_.read_bits(input_cell_, opts_.delta, t).bits.field(0, opts_.delta));
    }
    int out = opts_.variant == Variant::naive ? naive_step(s, t) : recursive_step(s, t);
    ++counters_.arrivals;
    ++i_;
    return out;
  }

 private:
  std::uint64_t align_up(std::uint64_t bits) const { return (bits + opts_.w - 1) / opts_.w * opts_.w; }

  std::uint64_t slot_address(std::uint64_t column) const { return (column % (n_ + 1)) * slot_bits_; }

  BitString read_or_count(std::uint64_t addr, std::size_t len, std::uint32_t t) {
    ReadResult r = memory_.read_bits(addr, len, t);
    if (r.uninitialized) ++counters_.uninitialized_reads;
    return std::move(r.bits);
  }

  int naive_step(Symbol s, std::uint32_t t) {
    DpColumn prev = DpColumn::boundary(n_);
    if (i_ > 0) {
      BitString bits = read_or_count(0, (n_ + 1) * width_, t);
      for (std::size_t k = 0; k <= n_; ++k) prev.values()[k] = static_cast<DpColumn::Value>(bits.field(k * width_, width_));
    }
    stored_ = step_column(prev, s);
    BitString bits;
    for (auto v : stored_.values()) bits.append(static_cast<std::uint64_t>(v), width_);
    memory_.write_bits(0, bits, t);
    record_.bits_written = bits.size();
    return stored_.at(static_cast<int>(n_) - 1);
  }

  DpColumn step_column(const DpColumn& prev, Symbol s) const {
    Symbol one[1] = {s};
    DpColumn c = slab_shortest(prev, one, fixed_);
    c.set_index(static_cast<std::int64_t>(i_));
    return c;
  }

  std::vector<Symbol> read_stream(std::uint64_t first, std::uint64_t count, std::uint32_t t) {
    std::vector<Symbol> out;
    out.reserve(count);
    const std::uint64_t slots = n_ + 1;
    std::uint64_t pos = first;
    std::uint64_t left = count;
    while (left > 0) {
      const std::uint64_t slot = pos % slots;
      const std::uint64_t run = std::min(left, slots - slot);
      BitString bits = read_or_count(buffer_base_ + slot * opts_.delta, run * opts_.delta, t);
      for (std::uint64_t k = 0; k < run; ++k) out.push_back(static_cast<Symbol>(bits.field(k * opts_.delta, opts_.delta)));
      pos += run;
      left -= run;
    }
    return out;
  }

  void write_symbol(Symbol s, std::uint32_t t) {
    BitString bits;
    bits.append(s, opts_.delta);
    memory_.write_bits(buffer_base_ + (i_ % (n_ + 1)) * opts_.delta, bits, t);
  }

  void store_column(const BlockList& blocks, std::size_t limit, std::uint32_t t) {
    BitString bits = encode_column(blocks, limit);
    if (bits.size() > encoded_bit_budget(n_, limit)) throw std::logic_error("store_column: bit budget exceeded");
    memory_.write_bits(slot_address(i_), bits, t);
    record_.bits_written = bits.size();
    record_.blocks_stored = std::min(limit, blocks.count());
  }

  int recursive_step(Symbol s, std::uint32_t t) {
    if (i_ == 0) {
      stored_ = step_column(DpColumn::boundary(n_), s);
      store_column(decompose_blocks(stored_), n_ + 1, t);
      write_symbol(s, t);
      return stored_.at(static_cast<int>(n_) - 1);
    }
    const std::uint64_t r = rho(i_, n_);
    const std::uint64_t gap = i_ - r;
    record_.rho = r;

    // Step 1: S[rho(i) .. i-1] from the buffer; S[i] is the new symbol.
    std::vector<Symbol> slab = read_stream(r, gap, t);
    slab.erase(slab.begin());
    slab.push_back(s);

    // Step 2: blocks of column rho(i).
    const std::uint64_t src_addr = slot_address(r);
    const auto total = static_cast<std::size_t>(read_or_count(src_addr, width_, t).field(0, width_));
    std::size_t take = total;
    if (opts_.variant == Variant::alg2) take = std::min<std::size_t>(total, 8 * gap);
    BitString bits;
    bits.append(take, width_);
    if (take > 0) bits.append(read_or_count(src_addr + width_, 2 * take * width_, t));
    const BlockList src_blocks = decode_blocks(bits, n_);
    const DpColumn src = reconstruct(src_blocks);
    record_.source_blocks = total;
    record_.blocks_read = take;
    counters_.max_blocks_read = std::max(counters_.max_blocks_read, take);

    // Step 3: relax the slab, keep 3(i - rho(i)) blocks, store.
    Slab computed = opts_.track_minimizers ? slab_shortest_traced(src, slab, fixed_)
                                           : Slab{slab_shortest(src, slab, fixed_), {}};
    if (auto bad = one_diff_violation(computed.column)) {
      throw std::logic_error("one-diff violated at row " + std::to_string(*bad) + ", arrival " + std::to_string(i_));
    }
    const BlockList kept = truncate_blocks(decompose_blocks(computed.column), 3 * gap);
    stored_ = reconstruct(kept);
    stored_.set_index(static_cast<std::int64_t>(i_));
    store_column(kept, 3 * gap, t);
    write_symbol(s, t);

    if (opts_.track_minimizers) note_minimizers(computed, src_blocks, gap);

    // Step 4.
    if (!stored_.finite(static_cast<int>(n_) - 1)) {
      throw std::logic_error("arrival " + std::to_string(i_) + ": D(n-1,i) is infinite");
    }
    return stored_.at(static_cast<int>(n_) - 1);
  }

  void note_minimizers(const Slab& computed, const BlockList& src_blocks, std::uint64_t gap) {
    const std::vector<std::size_t> index = block_indices(src_blocks);
    std::size_t worst = 0;
    for (std::size_t k = 0; k <= n_; ++k) {
      if (stored_.values()[k] >= stored_.inf()) continue;
      const int from = computed.source[k];
      worst = std::max(worst, index[static_cast<std::size_t>(from + 1)]);
    }
    record_.max_minimizer_block = worst;
    record_.output_source = computed.source[n_];
    if (worst > 8 * gap) ++counters_.read_cap_violations;
    counters_.max_minimizer_ratio =
        std::max(counters_.max_minimizer_ratio, static_cast<double>(worst) / static_cast<double>(gap));
  }

  SymbolString fixed_;
  EngineOptions opts_;
  std::size_t n_;
  unsigned width_;
  ProbeMemory memory_;
  Alphabet alphabet_;
  std::uint64_t slot_bits_ = 0;
  std::uint64_t buffer_base_ = 0;
  std::uint64_t input_cell_ = 0;
  std::uint64_t i_ = 0;
  DpColumn stored_;
  ArrivalRecord record_;
  EngineCounters counters_;
};

/// Runs a whole stream through an engine and returns every output.
inline std::vector<int> run_online_edit(const SymbolString& fixed, const SymbolString& stream, EngineOptions opts) {
  OnlineEditEngine engine(fixed, opts);
  std::vector<int> out;
  out.reserve(stream.size());
  for (Symbol s : stream) out.push_back(engine.arrival(s));
  return out;
}

}  // namespace probestream
