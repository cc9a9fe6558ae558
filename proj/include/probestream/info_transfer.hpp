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

// Information transfer over a balanced binary tree of arrivals.
//
// Node v spans arrivals [t0, t2] and splits at t1. I_v counts the cells
// written in [t0, t1] and read in [t1+1, t2] with no intervening overwrite.
// Every read has one "last write"; the pair (last write, read) is charged to
// the lowest common ancestor of the two leaves, so each read feeds at most
// one node.
//
// Tree time is log arrival minus `base`; arrivals outside [0, n) in tree
// time belong to the warm-up epoch and are never charged.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "probestream/core_model.hpp"
#include "probestream/probe_memory.hpp"

namespace probestream {

struct TreeNode {
  std::size_t index = 0;  // heap order, root = 1
  std::size_t depth = 0;
  std::size_t ell = 0;    // leaves below
  std::int64_t t0 = 0, t1 = 0, t2 = 0;
};

class TransferTree {
 public:
  explicit TransferTree(std::size_t n) : n_(n) {
    if (!is_power_of_two(n)) throw std::invalid_argument("TransferTree: n must be a power of two");
    levels_ = static_cast<std::size_t>(std::countr_zero(n));
    nodes_.resize(2 * n);
    for (std::size_t v = 1; v < 2 * n; ++v) {
      TreeNode& node = nodes_[v];
      node.index = v;
      node.depth = static_cast<std::size_t>(std::bit_width(v)) - 1;
      node.ell = n >> node.depth;
      node.t0 = static_cast<std::int64_t>((v - (std::size_t{1} << node.depth)) * node.ell);
      node.t1 = node.t0 + static_cast<std::int64_t>(node.ell / 2) - 1;
      node.t2 = node.t0 + static_cast<std::int64_t>(node.ell) - 1;
    }
  }

  std::size_t n() const { return n_; }
  /// Number of internal depths, log2 n.
  std::size_t depths() const { return levels_; }
  std::size_t size() const { return 2 * n_ - 1; }
  const TreeNode& node(std::size_t v) const { return nodes_.at(v); }
  bool is_leaf(std::size_t v) const { return v >= n_; }

  /// Lowest common ancestor of leaves a < b (tree times).
  std::size_t lca(std::size_t a, std::size_t b) const {
    return (n_ + a) >> std::bit_width(a ^ b);
  }

 private:
  std::size_t n_;
  std::size_t levels_;
  std::vector<TreeNode> nodes_;  // slot 0 unused
};

inline TransferTree build_tree(std::size_t n) { return TransferTree(n); }

/// For every read entry inside the tree window, the node it is charged to
/// (0 when charged to none).
inline std::vector<std::pair<std::size_t, std::uint64_t>> charged_reads(const AccessLog& log, const TransferTree& tree,
                                                                        std::int64_t base) {
  std::vector<std::pair<std::size_t, std::uint64_t>> out;
  std::unordered_map<std::uint64_t, std::int64_t> last_write;
  const auto n = static_cast<std::int64_t>(tree.n());
  for (const auto& e : log.entries()) {
    const std::int64_t time = static_cast<std::int64_t>(e.t) - base;
    if (e.kind == AccessKind::write) {
      last_write[e.address] = time;
      continue;
    }
    if (time < 0 || time >= n) continue;
    auto it = last_write.find(e.address);
    if (it == last_write.end()) continue;
    const std::int64_t w = it->second;
    if (w < 0 || w >= time) continue;
    out.emplace_back(tree.lca(static_cast<std::size_t>(w), static_cast<std::size_t>(time)), e.address);
  }
  return out;
}

struct NodeTransfer {
  TreeNode node;
  std::uint64_t iv = 0;
  std::uint64_t rv = 0;
};

struct DepthTransfer {
  std::size_t depth = 0;
  std::size_t ell = 0;
  std::uint64_t iv_sum = 0;
  std::uint64_t rv_sum = 0;
};

struct TransferReport {
  std::size_t n = 0;
  std::int64_t base = 0;
  std::vector<NodeTransfer> nodes;   // internal nodes, heap order
  std::vector<DepthTransfer> depths; // depth 0 (root) .. log2 n - 1
  std::uint64_t total_reads = 0;     // every read entry in the log
  std::uint64_t window_reads = 0;    // reads inside the tree window
  std::uint64_t iv_total = 0;
};

/// I_v of one node.
inline std::uint64_t compute_Iv(const AccessLog& log, const TransferTree& tree, std::size_t v, std::int64_t base = 0) {
  if (v == 0 || v >= tree.n() || tree.is_leaf(v)) throw std::out_of_range("compute_Iv: not an internal node");
  std::vector<std::uint64_t> cells;
  for (const auto& [node, cell] : charged_reads(log, tree, base)) {
    if (node == v) cells.push_back(cell);
  }
  std::sort(cells.begin(), cells.end());
  return static_cast<std::uint64_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

/// R_v: read entries during [t1+1, t2].
inline std::uint64_t compute_Rv(const AccessLog& log, const TransferTree& tree, std::size_t v, std::int64_t base = 0) {
  if (v == 0 || v >= tree.n()) throw std::out_of_range("compute_Rv: not an internal node");
  const TreeNode& node = tree.node(v);
  std::uint64_t count = 0;
  for (const auto& e : log.entries()) {
    const std::int64_t time = static_cast<std::int64_t>(e.t) - base;
    if (e.kind == AccessKind::read && time > node.t1 && time <= node.t2) ++count;
  }
  return count;
}

inline TransferReport transfer_report(const AccessLog& log, std::size_t n, std::int64_t base = 0) {
  const TransferTree tree(n);
  TransferReport rep;
  rep.n = n;
  rep.base = base;
  const auto nn = static_cast<std::int64_t>(n);

  std::vector<std::uint64_t> reads_at(n, 0);
  for (const auto& e : log.entries()) {
    if (e.kind != AccessKind::read) continue;
    ++rep.total_reads;
    const std::int64_t time = static_cast<std::int64_t>(e.t) - base;
    if (time >= 0 && time < nn) {
      ++reads_at[static_cast<std::size_t>(time)];
      ++rep.window_reads;
    }
  }
  std::vector<std::uint64_t> prefix(n + 1, 0);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + reads_at[k];

  auto pairs = charged_reads(log, tree, base);
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::vector<std::uint64_t> iv(n, 0);
  for (const auto& pr : pairs) ++iv[pr.first];

  rep.depths.resize(tree.depths());
  for (std::size_t d = 0; d < tree.depths(); ++d) {
    rep.depths[d].depth = d;
    rep.depths[d].ell = n >> d;
  }
  for (std::size_t v = 1; v < n; ++v) {
    const TreeNode& node = tree.node(v);
    NodeTransfer nt;
    nt.node = node;
    nt.iv = iv[v];
    nt.rv = prefix[static_cast<std::size_t>(node.t2) + 1] - prefix[static_cast<std::size_t>(node.t1) + 1];
    rep.depths[node.depth].iv_sum += nt.iv;
    rep.depths[node.depth].rv_sum += nt.rv;
    rep.iv_total += nt.iv;
    rep.nodes.push_back(nt);
  }
  if (rep.iv_total > rep.total_reads) throw std::logic_error("transfer_report: sum of I_v exceeds total reads");
  return rep;
}

}  // namespace probestream
