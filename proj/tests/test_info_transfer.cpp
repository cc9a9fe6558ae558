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


#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"

namespace ps = probestream;
namespace pt = probestream::testing;

namespace {

TEST(TransferTree, RootIntervals) {
  const ps::TransferTree tree(16);
  const auto& root = tree.node(1);
  EXPECT_EQ(root.t0, 0);
  EXPECT_EQ(root.t1, 7);
  EXPECT_EQ(root.t2, 15);
  EXPECT_EQ(tree.depths(), 4u);
}

TEST(TransferTree, NodesPerDepth) {
  const ps::TransferTree tree(64);
  std::vector<std::size_t> count(7, 0);
  for (std::size_t v = 1; v < 128; ++v) {
    const auto& node = tree.node(v);
    ++count[node.depth];
    EXPECT_EQ(node.ell, 64u >> node.depth);
  }
  for (std::size_t d = 0; d <= 6; ++d) EXPECT_EQ(count[d], std::size_t{1} << d);
}

TEST(TransferTree, FourLeaves) {
  const ps::TransferTree tree(4);
  EXPECT_EQ(tree.node(1).t0, 0);
  EXPECT_EQ(tree.node(1).t2, 3);
  EXPECT_EQ(tree.node(2).t0, 0);
  EXPECT_EQ(tree.node(2).t2, 1);
  EXPECT_EQ(tree.node(3).t0, 2);
  EXPECT_EQ(tree.node(3).t2, 3);
  EXPECT_THROW(ps::TransferTree(6), std::invalid_argument);
}

TEST(TransferTree, LcaSplitsIntervals) {
  const ps::TransferTree tree(32);
  for (std::size_t a = 0; a < 32; ++a) {
    for (std::size_t b = a + 1; b < 32; ++b) {
      const auto& v = tree.node(tree.lca(a, b));
      EXPECT_LE(v.t0, static_cast<std::int64_t>(a));
      EXPECT_LE(static_cast<std::int64_t>(a), v.t1);
      EXPECT_LT(v.t1, static_cast<std::int64_t>(b));
      EXPECT_LE(static_cast<std::int64_t>(b), v.t2);
    }
  }
}

ps::AccessLog log_of(std::initializer_list<ps::AccessEntry> es) {
  ps::AccessLog log;
  for (const auto& e : es) log.append(e);
  return log;
}

TEST(ComputeIv, WriteThenRead) {
  const ps::TransferTree tree(8);
  const auto log = log_of({{2, 5, ps::AccessKind::write}, {6, 5, ps::AccessKind::read}});
  EXPECT_EQ(ps::compute_Iv(log, tree, 1), 1u);
  EXPECT_EQ(pt::brute_force_Iv(log, tree, 1, 0), 1u);
}

TEST(ComputeIv, OverwrittenBeforeRead) {
  const ps::TransferTree tree(8);
  const auto log = log_of({{2, 5, ps::AccessKind::write}, {5, 5, ps::AccessKind::write}, {6, 5, ps::AccessKind::read}});
  EXPECT_EQ(ps::compute_Iv(log, tree, 1), 0u);
  EXPECT_EQ(pt::brute_force_Iv(log, tree, 1, 0), 0u);
}

TEST(ComputeIv, RejectsLeaves) {
  const ps::TransferTree tree(8);
  EXPECT_THROW(ps::compute_Iv({}, tree, 8), std::out_of_range);
  EXPECT_THROW(ps::compute_Iv({}, tree, 0), std::out_of_range);
}

TEST(ComputeIv, MatchesBruteForceOnRandomLogs) {
  ps::Rng rng(71);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = std::size_t{1} << (1 + rng.below(5));
    const std::int64_t base = static_cast<std::int64_t>(rng.below(4));
    const auto log = pt::random_log(1 + rng.below(1000), 1 + rng.below(40), static_cast<std::uint32_t>(n + base + 3), rng);
    const ps::TransferTree tree(n);
    std::uint64_t sum = 0;
    for (std::size_t v = 1; v < n; ++v) {
      const auto got = ps::compute_Iv(log, tree, v, base);
      ASSERT_EQ(got, pt::brute_force_Iv(log, tree, v, base)) << "node " << v;
      EXPECT_LE(got, ps::compute_Rv(log, tree, v, base));
      sum += got;
    }
    const auto rep = ps::transfer_report(log, n, base);
    EXPECT_EQ(rep.iv_total, sum);
    EXPECT_LE(rep.iv_total, rep.total_reads);
  }
}

TEST(ComputeRv, Basics) {
  const ps::TransferTree tree(8);
  EXPECT_EQ(ps::compute_Rv({}, tree, 1), 0u);
  const auto log = log_of({{1, 0, ps::AccessKind::read}, {4, 0, ps::AccessKind::read}, {7, 1, ps::AccessKind::read}});
  EXPECT_EQ(ps::compute_Rv(log, tree, 1), 2u);
  EXPECT_EQ(ps::compute_Rv(log, tree, 2), 0u);  // right half [2,3]
  EXPECT_EQ(ps::compute_Rv(log, tree, 3), 1u);  // right half [6,7]
}

ps::AccessLog engine_log(std::size_t n, ps::Variant v, std::uint64_t seed) {
  ps::Rng rng(seed);
  const auto f = ps::random_string(n, 2, rng);
  const auto s = ps::random_string(3 * n, 2, rng);
  ps::EngineOptions o;
  o.variant = v;
  o.delta = 2;
  ps::OnlineEditEngine engine(f, o);
  for (ps::Symbol x : s) engine.arrival(x);
  return engine.memory().log();
}

TEST(TransferReport, PerDepthReadsAreDisjoint) {
  for (auto v : {ps::Variant::naive, ps::Variant::alg2}) {
    const std::size_t n = 64;
    const auto rep = ps::transfer_report(engine_log(n, v, 72), n, 2 * n);
    ASSERT_EQ(rep.depths.size(), 6u);
    for (const auto& d : rep.depths) {
      EXPECT_LE(d.rv_sum, rep.total_reads);
      EXPECT_LE(d.iv_sum, d.rv_sum);
    }
    EXPECT_LE(rep.iv_total, rep.total_reads);
  }
}

// The naive engine rewrites the whole column every arrival, so every cell
// of it crosses the root split.
TEST(TransferReport, NaiveRootTransferIsWholeColumn) {
  for (std::size_t n : {64u, 128u, 256u, 512u, 1024u}) {
    const auto rep = ps::transfer_report(engine_log(n, ps::Variant::naive, 73), n, 2 * n);
    const std::uint64_t cells = ((n + 1) * ps::field_width(n) + 63) / 64;
    EXPECT_EQ(rep.depths[0].iv_sum, cells) << "n=" << n;
    EXPECT_GE(rep.depths[0].iv_sum, n / 64);
  }
}

TEST(TransferReport, PureFunctionOfLog) {
  const auto log = engine_log(32, ps::Variant::alg2, 74);
  std::stringstream buf;
  ps::write_trace_binary(log, buf);
  const auto reloaded = ps::read_trace_binary(buf);
  const auto a = ps::transfer_report(log, 32, 64);
  const auto b = ps::transfer_report(reloaded, 32, 64);
  EXPECT_EQ(a.iv_total, b.iv_total);
  EXPECT_EQ(a.total_reads, b.total_reads);
  ASSERT_EQ(a.nodes.size(), b.nodes.size());
  for (std::size_t k = 0; k < a.nodes.size(); ++k) {
    EXPECT_EQ(a.nodes[k].iv, b.nodes[k].iv);
    EXPECT_EQ(a.nodes[k].rv, b.nodes[k].rv);
  }
}

}  // namespace
