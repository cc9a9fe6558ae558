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

namespace {

ps::BitString bits_of(std::uint64_t value, unsigned width) {
  ps::BitString b;
  b.append(value, width);
  return b;
}

ps::BitString random_bits(std::size_t len, ps::Rng& rng) {
  ps::BitString b;
  for (std::size_t k = 0; k < len; ++k) b.push_back(rng.coin());
  return b;
}

TEST(BitString, AppendAndField) {
  ps::BitString b;
  b.append(0b101, 3);
  b.append(0xABCDEF, 24);
  b.append(~std::uint64_t{0}, 64);
  EXPECT_EQ(b.size(), 91u);
  EXPECT_EQ(b.field(0, 3), 0b101u);
  EXPECT_EQ(b.field(3, 24), 0xABCDEFu);
  EXPECT_EQ(b.field(27, 64), ~std::uint64_t{0});
  EXPECT_THROW(b.append(1, 65), std::invalid_argument);
}

TEST(BitString, AppendBitString) {
  ps::Rng rng(31);
  for (int k = 0; k < 50; ++k) {
    const auto a = random_bits(rng.below(150), rng);
    const auto c = random_bits(rng.below(150), rng);
    ps::BitString joined = a;
    joined.append(c);
    ASSERT_EQ(joined.size(), a.size() + c.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(joined.get(i), a.get(i));
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(joined.get(a.size() + i), c.get(i));
  }
}

TEST(ProbeMemory, WriteChargesOverlappedCells) {
  {
    ps::ProbeMemory mem(8);
    EXPECT_EQ(mem.write_bits(0, bits_of(0xFF, 8), 0), 1u);
  }
  {
    ps::ProbeMemory mem(8);
    EXPECT_EQ(mem.write_bits(4, bits_of(0xFF, 8), 0), 2u);
  }
  {
    ps::ProbeMemory mem(1);
    EXPECT_EQ(mem.write_bits(0, bits_of(0x1FFF, 13), 0), 13u);
  }
}

TEST(ProbeMemory, ReadChargesCeilOfLength) {
  ps::ProbeMemory mem(64);
  ps::Rng rng(32);
  const auto payload = random_bits(130, rng);
  mem.write_bits(0, payload, 0);
  const auto r = mem.read_bits(0, 130, 1);
  EXPECT_EQ(r.probes, 3u);
  EXPECT_EQ(r.bits, payload);
  EXPECT_FALSE(r.uninitialized);
}

TEST(ProbeMemory, RoundTripAtRandomOffsets) {
  ps::Rng rng(33);
  for (unsigned w : {1u, 7u, 64u}) {
    ps::ProbeMemory mem(w);
    for (std::uint32_t t = 0; t < 100; ++t) {
      const auto payload = random_bits(1 + rng.below(200), rng);
      const std::uint64_t addr = rng.below(10000);
      mem.write_bits(addr, payload, t);
      EXPECT_EQ(mem.read_bits(addr, payload.size(), t).bits, payload);
    }
  }
}

TEST(ProbeMemory, RepeatedCellsCountOncePerArrival) {
  ps::ProbeMemory mem(16);
  mem.write_bits(0, bits_of(1, 16), 0);
  EXPECT_EQ(mem.read_bits(0, 16, 0).probes, 0u);  // already touched by the write
  EXPECT_EQ(mem.read_bits(0, 16, 1).probes, 1u);
  EXPECT_EQ(mem.read_bits(0, 8, 1).probes, 0u);
  const auto st = mem.totals();
  EXPECT_EQ(st.writes, 1u);
  EXPECT_EQ(st.reads, 2u);   // one per arrival
  EXPECT_EQ(st.probes, 2u);
}

TEST(ProbeMemory, SingleAccessChargeBounds) {
  ps::Rng rng(34);
  for (int k = 0; k < 200; ++k) {
    const unsigned w = 1 + static_cast<unsigned>(rng.below(70));
    ps::ProbeMemory mem(w);
    const std::size_t len = 1 + rng.below(300);
    const std::size_t charged = mem.write_bits(rng.below(1000), random_bits(len, rng), 0);
    EXPECT_GE(charged, (len + w - 1) / w);
    EXPECT_LE(charged, (len + w - 1) / w + 1);
  }
}

TEST(ProbeMemory, UninitializedReadsAreFlagged) {
  ps::ProbeMemory mem(8);
  EXPECT_TRUE(mem.read_bits(100, 4, 0).uninitialized);
}

TEST(ProbeMemory, ClockCannotMoveBackwards) {
  ps::ProbeMemory mem(8);
  mem.write_bits(0, bits_of(1, 1), 5);
  EXPECT_THROW(mem.read_bits(0, 1, 4), std::logic_error);
}

TEST(ProbeMemory, StoreUnchargedIsInvisibleToCounters) {
  ps::ProbeMemory mem(8);
  mem.store_uncharged(0, bits_of(3, 2));
  EXPECT_EQ(mem.totals().probes, 0u);
  EXPECT_TRUE(mem.log().empty());
  EXPECT_EQ(mem.read_bits(0, 2, 0).bits.field(0, 2), 3u);
}

class RandomTraffic : public ::testing::Test {
 protected:
  void SetUp() override {
    ps::Rng rng(35);
    for (std::uint32_t t = 0; t < 60; ++t) {
      const int ops = static_cast<int>(rng.below(5));
      for (int k = 0; k < ops; ++k) {
        const std::uint64_t addr = rng.below(2000);
        const std::size_t len = 1 + rng.below(100);
        if (rng.coin()) mem.write_bits(addr, random_bits(len, rng), t); else mem.read_bits(addr, len, t);
      }
    }
  }
  ps::ProbeMemory mem{16};
};

TEST_F(RandomTraffic, FullRangeEqualsTotals) {
  const auto st = mem.probe_stats(0, 59);
  EXPECT_EQ(st, mem.totals());
}

TEST_F(RandomTraffic, DisjointRangesAdd) {
  auto a = mem.probe_stats(0, 20);
  a += mem.probe_stats(21, 59);
  EXPECT_EQ(a, mem.totals());
  EXPECT_EQ(mem.probe_stats(70, 80), ps::ProbeStats{});
}

TEST_F(RandomTraffic, ReplayReproducesCounters) {
  const auto replay = ps::replay_counts(mem.log());
  EXPECT_EQ(replay.reads, mem.totals().reads);
  EXPECT_EQ(replay.writes, mem.totals().writes);
  EXPECT_EQ(replay.probes, mem.totals().probes);
}

TEST_F(RandomTraffic, LogIsOrdered) {
  const auto& es = mem.log().entries();
  for (std::size_t k = 1; k < es.size(); ++k) EXPECT_LE(es[k - 1].t, es[k].t);
}

TEST_F(RandomTraffic, BinaryTraceRoundTrip) {
  std::stringstream buf;
  ps::write_trace_binary(mem.log(), buf);
  EXPECT_EQ(buf.str().size(), 13 * mem.log().size());
  EXPECT_EQ(ps::read_trace_binary(buf), mem.log());
}

TEST_F(RandomTraffic, CsvTraceRoundTrip) {
  std::stringstream buf;
  ps::write_trace_csv(mem.log(), buf);
  EXPECT_EQ(ps::read_trace_csv(buf), mem.log());
}

TEST(Trace, MalformedCsvIsRejected) {
  std::stringstream bad_header("time,addr,kind\n");
  EXPECT_THROW(ps::read_trace_csv(bad_header), std::runtime_error);
  std::stringstream bad_kind("t,address,kind\n0,1,poke\n");
  EXPECT_THROW(ps::read_trace_csv(bad_kind), std::runtime_error);
}

TEST(Trace, TruncatedBinaryIsRejected) {
  std::stringstream buf(std::string(7, '\0'));
  EXPECT_THROW(ps::read_trace_binary(buf), std::runtime_error);
}

TEST(ProbeMemory, DeterministicLogs) {
  auto run = [] {
    ps::ProbeMemory mem(32);
    ps::Rng rng(36);
    for (std::uint32_t t = 0; t < 30; ++t) mem.write_bits(rng.below(500), random_bits(1 + rng.below(90), rng), t);
    return mem.log();
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
