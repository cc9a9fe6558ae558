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

// Block decomposition of DP columns and their packed encoding.
//
// A column is read top-down, from row n-1 towards row -1. A block is a
// maximal run of values that drops by exactly one per row; equal neighbours
// start a new block. Infinite rows must form a tail at the small-j end and
// are never encoded.
//
// Wire format, all fields W = ceil(log2(n+2)) bits, least significant bit
// first:
//
//   [B'] [start_value_1][length_1] ... [start_value_B'][length_B']
//
// where B' = min(B, limit). Start rows are implied by the running sum of
// lengths from row n-1.

#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "probestream/oracle_dp.hpp"
#include "probestream/probe_memory.hpp"

namespace probestream {

struct Block {
  DpColumn::Value start_value = 0;
  std::uint32_t length = 0;

  friend bool operator==(const Block&, const Block&) = default;
};

struct BlockList {
  std::size_t n = 0;
  std::vector<Block> blocks;

  std::size_t count() const { return blocks.size(); }
  std::size_t covered_rows() const {
    std::size_t rows = 0;
    for (const auto& b : blocks) rows += b.length;
    return rows;
  }

  friend bool operator==(const BlockList&, const BlockList&) = default;
};

inline unsigned field_width(std::size_t n) { return static_cast<unsigned>(std::bit_width(n + 1)); }

/// Largest encoded size for a given block limit.
inline std::size_t encoded_bit_budget(std::size_t n, std::size_t limit) {
  return (2 * limit + 1) * field_width(n);
}

inline BlockList decompose_blocks(const DpColumn& column) {
  const int n = static_cast<int>(column.n());
  BlockList out;
  out.n = column.n();
  bool in_tail = false;
  for (int j = n - 1; j >= -1; --j) {
    if (!column.finite(j)) {
      in_tail = true;
      continue;
    }
    if (in_tail) throw std::invalid_argument("decompose_blocks: finite value below an infinite row");
    const DpColumn::Value v = column.at(j);
    if (!out.blocks.empty()) {
      Block& last = out.blocks.back();
      if (v == last.start_value - static_cast<DpColumn::Value>(last.length)) {
        ++last.length;
        continue;
      }
    }
    out.blocks.push_back({v, 1});
  }
  return out;
}

/// Column with the covered rows filled from the blocks, INF elsewhere.
inline DpColumn reconstruct(const BlockList& bl) {
  DpColumn col(bl.n);
  int j = static_cast<int>(bl.n) - 1;
  for (const auto& b : bl.blocks) {
    for (std::uint32_t k = 0; k < b.length; ++k) {
      if (j < -1) throw std::invalid_argument("reconstruct: blocks cover more than n+1 rows");
      col.set(j--, b.start_value - static_cast<DpColumn::Value>(k));
    }
  }
  return col;
}

/// The first `limit` blocks.
inline BlockList truncate_blocks(const BlockList& bl, std::size_t limit) {
  BlockList out;
  out.n = bl.n;
  out.blocks.assign(bl.blocks.begin(), bl.blocks.begin() + static_cast<std::ptrdiff_t>(std::min(limit, bl.count())));
  return out;
}

inline BitString encode_column(const BlockList& bl, std::size_t limit) {
  const unsigned width = field_width(bl.n);
  const std::size_t kept = std::min(limit, bl.count());
  BitString bits;
  bits.append(kept, width);
  for (std::size_t k = 0; k < kept; ++k) {
    const Block& b = bl.blocks[k];
    if (b.start_value < 0 || static_cast<std::size_t>(b.start_value) >= bl.n + 1) {
      throw std::invalid_argument("encode_column: value outside [0, n+1)");
    }
    if (b.length == 0 || b.length > bl.n + 1) throw std::invalid_argument("encode_column: bad block length");
    bits.append(static_cast<std::uint64_t>(b.start_value), width);
    bits.append(b.length, width);
  }
  return bits;
}

/// Parses a bit string produced by encode_column. Trailing bits past the
/// last record are ignored.
inline BlockList decode_blocks(const BitString& bits, std::size_t n) {
  const unsigned width = field_width(n);
  if (bits.size() < width) throw std::invalid_argument("decode_column: missing header");
  const std::uint64_t count = bits.field(0, width);
  if (bits.size() < (2 * count + 1) * width) throw std::invalid_argument("decode_column: fewer records than header");
  BlockList out;
  out.n = n;
  std::size_t rows = 0;
  std::size_t pos = width;
  for (std::uint64_t k = 0; k < count; ++k) {
    const std::uint64_t value = bits.field(pos, width);
    const std::uint64_t length = bits.field(pos + width, width);
    pos += 2 * width;
    if (value >= n + 1) throw std::invalid_argument("decode_column: value outside [0, n+1)");
    if (length == 0) throw std::invalid_argument("decode_column: zero-length block");
    rows += length;
    if (rows > n + 1) throw std::invalid_argument("decode_column: blocks cover more than n+1 rows");
    out.blocks.push_back({static_cast<DpColumn::Value>(value), static_cast<std::uint32_t>(length)});
  }
  return out;
}

inline DpColumn decode_column(const BitString& bits, std::size_t n) { return reconstruct(decode_blocks(bits, n)); }

/// 1-based number of the block holding row j; rows past the last block
/// return B+1.
inline std::size_t block_index(int j, const BlockList& bl) {
  const int n = static_cast<int>(bl.n);
  if (j < -1 || j > n - 1) throw std::out_of_range("block_index: row outside column");
  const std::size_t depth = static_cast<std::size_t>(n - 1 - j);  // rows above j
  std::size_t seen = 0;
  for (std::size_t k = 0; k < bl.count(); ++k) {
    seen += bl.blocks[k].length;
    if (depth < seen) return k + 1;
  }
  return bl.count() + 1;
}

/// block_index for every row, indexed j+1.
inline std::vector<std::size_t> block_indices(const BlockList& bl) {
  std::vector<std::size_t> out(bl.n + 1, bl.count() + 1);
  int j = static_cast<int>(bl.n) - 1;
  for (std::size_t k = 0; k < bl.count(); ++k) {
    for (std::uint32_t r = 0; r < bl.blocks[k].length; ++r) out[static_cast<std::size_t>(j-- + 1)] = k + 1;
  }
  return out;
}

}  // namespace probestream
