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

// Simulated cell-probe memory.
//
// Memory is bit-addressed and divided into cells of w bits; cell c covers
// bits [c*w, (c+1)*w). The cost of an arrival is the number of distinct cells
// it touches. A cell read and later written during the same arrival is one
// probe; it appears once as a read and once as a write in the access log.

#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace probestream {

/// Growable bit sequence. Multi-bit fields are stored least significant bit
/// first.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t size) : words_((size + 63) / 64, 0), size_(size) {}

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(std::size_t pos) const { return (words_[pos / 64] >> (pos % 64)) & 1u; }
  void set(std::size_t pos, bool bit) {
    std::uint64_t m = std::uint64_t{1} << (pos % 64);
    if (bit) words_[pos / 64] |= m; else words_[pos / 64] &= ~m;
  }
  void push_back(bool bit) {
    if (size_ % 64 == 0) words_.push_back(0);
    ++size_;
    set(size_ - 1, bit);
  }

  void append(std::uint64_t value, unsigned width) {
    if (width > 64) throw std::invalid_argument("BitString::append: field wider than 64 bits");
    if (width < 64 && (value >> width) != 0) throw std::invalid_argument("BitString::append: value wider than field");
    if (width == 0) return;
    const std::size_t off = size_ % 64;
    if (off == 0) words_.push_back(0);
    words_.back() |= value << off;
    if (off + width > 64) words_.push_back(value >> (64 - off));
    size_ += width;
  }

  std::uint64_t field(std::size_t pos, unsigned width) const {
    if (width > 64 || pos + width > size_) throw std::out_of_range("BitString::field: read past end");
    if (width == 0) return 0;
    const std::size_t off = pos % 64;
    std::uint64_t v = words_[pos / 64] >> off;
    if (off + width > 64) v |= words_[pos / 64 + 1] << (64 - off);
    return width == 64 ? v : v & ((std::uint64_t{1} << width) - 1);
  }

  void append(const BitString& other) {
    std::size_t k = 0;
    for (; k + 64 <= other.size(); k += 64) append(other.field(k, 64), 64);
    if (k < other.size()) append(other.field(k, static_cast<unsigned>(other.size() - k)), static_cast<unsigned>(other.size() - k));
  }

  friend bool operator==(const BitString& a, const BitString& b) {
    if (a.size_ != b.size_) return false;
    for (std::size_t k = 0; k < a.size_; ++k) {
      if (a.get(k) != b.get(k)) return false;
    }
    return true;
  }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

enum class AccessKind : std::uint8_t { read = 0, write = 1 };

inline const char* to_string(AccessKind k) { return k == AccessKind::read ? "read" : "write"; }

struct AccessEntry {
  std::uint32_t t = 0;
  std::uint64_t address = 0;  // cell index
  AccessKind kind = AccessKind::read;

  friend bool operator==(const AccessEntry&, const AccessEntry&) = default;
};

/// Ordered record of cell accesses. One entry per distinct (arrival, cell,
/// kind), in issue order.
class AccessLog {
 public:
  void append(const AccessEntry& e) {
    if (!entries_.empty() && e.t < entries_.back().t) {
      throw std::logic_error("AccessLog: arrival tags must be non-decreasing");
    }
    entries_.push_back(e);
  }
  const std::vector<AccessEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  void clear() { entries_.clear(); }

  friend bool operator==(const AccessLog&, const AccessLog&) = default;

 private:
  std::vector<AccessEntry> entries_;
};

struct ProbeStats {
  std::uint64_t reads = 0;   // distinct cells read, summed over arrivals
  std::uint64_t writes = 0;  // distinct cells written, summed over arrivals
  std::uint64_t probes = 0;  // distinct cells touched, summed over arrivals
  std::uint64_t bits_read = 0;
  std::uint64_t bits_written = 0;

  ProbeStats& operator+=(const ProbeStats& o) {
    reads += o.reads;
    writes += o.writes;
    probes += o.probes;
    bits_read += o.bits_read;
    bits_written += o.bits_written;
    return *this;
  }
  friend bool operator==(const ProbeStats&, const ProbeStats&) = default;
};

struct ReadResult {
  BitString bits;
  std::size_t probes = 0;      // newly charged cells
  bool uninitialized = false;  // some requested bit was never written
};

class ProbeMemory {
 public:
  explicit ProbeMemory(unsigned w, bool keep_log = true) : w_(w), keep_log_(keep_log) {
    if (w == 0) throw std::invalid_argument("ProbeMemory: cell width must be at least 1");
  }

  unsigned cell_bits() const { return w_; }

  /// Stores payload at bit offset addr during arrival t. Returns the number
  /// of cells charged, i.e. overlapped cells not yet touched during t.
  std::size_t write_bits(std::uint64_t addr, const BitString& payload, std::uint32_t t) {
    if (payload.empty()) throw std::invalid_argument("write_bits: empty payload");
    enter(t);
    for (std::size_t k = 0; k < payload.size(); ++k) store_bit(addr + k, payload.get(k));
    arrival_stats().bits_written += payload.size();
    return charge(addr, payload.size(), AccessKind::write, t);
  }

  /// Places bits without charging or logging; models input delivered by the
  /// environment.
  void store_uncharged(std::uint64_t addr, const BitString& payload) {
    for (std::size_t k = 0; k < payload.size(); ++k) store_bit(addr + k, payload.get(k));
  }

  ReadResult read_bits(std::uint64_t addr, std::size_t len, std::uint32_t t) {
    ReadResult r;
    if (len == 0) return r;
    enter(t);
    r.bits = BitString(len);
    for (std::size_t k = 0; k < len; ++k) {
      bool init = false;
      r.bits.set(k, load_bit(addr + k, init));
      if (!init) r.uninitialized = true;
    }
    arrival_stats().bits_read += len;
    r.probes = charge(addr, len, AccessKind::read, t);
    return r;
  }

  /// Totals over arrivals in [first, last]; an empty range yields zeros.
  ProbeStats probe_stats(std::uint32_t first, std::uint32_t last) const {
    ProbeStats s;
    for (std::uint64_t t = first; t <= last && t < per_arrival_.size(); ++t) s += per_arrival_[t];
    return s;
  }

  const ProbeStats& totals() const { return totals_; }
  const AccessLog& log() const { return log_; }
  std::uint32_t clock() const { return clock_; }

 private:
  static constexpr std::size_t kPageBits = 4096;
  struct Page {
    std::array<std::uint64_t, kPageBits / 64> data{};
    std::array<std::uint64_t, kPageBits / 64> init{};
  };

  void enter(std::uint32_t t) {
    if (started_ && t < clock_) throw std::logic_error("ProbeMemory: arrival clock moved backwards");
    if (!started_ || t != clock_) {
      touched_any_.clear();
      touched_read_.clear();
      touched_write_.clear();
      clock_ = t;
      started_ = true;
    }
    if (per_arrival_.size() <= t) per_arrival_.resize(static_cast<std::size_t>(t) + 1);
  }

  ProbeStats& arrival_stats() { return per_arrival_[clock_]; }

  std::size_t charge(std::uint64_t addr, std::size_t len, AccessKind kind, std::uint32_t t) {
    const std::uint64_t first = addr / w_;
    const std::uint64_t last = (addr + len - 1) / w_;
    auto& kind_set = kind == AccessKind::read ? touched_read_ : touched_write_;
    std::size_t charged = 0;
    ProbeStats& at = arrival_stats();
    for (std::uint64_t c = first; c <= last; ++c) {
      if (kind_set.insert(c).second) {
        if (kind == AccessKind::read) { ++at.reads; ++totals_.reads; } else { ++at.writes; ++totals_.writes; }
        if (keep_log_) log_.append({t, c, kind});
      }
      if (touched_any_.insert(c).second) {
        ++charged;
        ++at.probes;
        ++totals_.probes;
      }
    }
    if (kind == AccessKind::read) totals_.bits_read += len; else totals_.bits_written += len;
    return charged;
  }

  Page& page_for_write(std::uint64_t page) {
    if (cached_page_ == nullptr || cached_index_ != page) {
      cached_page_ = &pages_[page];
      cached_index_ = page;
    }
    return *cached_page_;
  }

  void store_bit(std::uint64_t pos, bool bit) {
    Page& p = page_for_write(pos / kPageBits);
    std::size_t off = pos % kPageBits;
    std::uint64_t m = std::uint64_t{1} << (off % 64);
    if (bit) p.data[off / 64] |= m; else p.data[off / 64] &= ~m;
    p.init[off / 64] |= m;
  }

  bool load_bit(std::uint64_t pos, bool& initialized) {
    const std::uint64_t page = pos / kPageBits;
    const Page* p = nullptr;
    if (cached_page_ != nullptr && cached_index_ == page) {
      p = cached_page_;
    } else {
      auto it = pages_.find(page);
      if (it == pages_.end()) {
        initialized = false;
        return false;
      }
      cached_page_ = &it->second;
      cached_index_ = page;
      p = cached_page_;
    }
    std::size_t off = pos % kPageBits;
    std::uint64_t m = std::uint64_t{1} << (off % 64);
    initialized = (p->init[off / 64] & m) != 0;
    return (p->data[off / 64] & m) != 0;
  }

  unsigned w_;
  bool keep_log_;
  std::unordered_map<std::uint64_t, Page> pages_;
  Page* cached_page_ = nullptr;
  std::uint64_t cached_index_ = 0;
  std::unordered_set<std::uint64_t> touched_any_, touched_read_, touched_write_;
  std::vector<ProbeStats> per_arrival_;
  ProbeStats totals_;
  AccessLog log_;
  std::uint32_t clock_ = 0;
  bool started_ = false;
};

/// Counters recomputed from a log alone (bit volumes are not recorded).
inline ProbeStats replay_counts(const AccessLog& log) {
  ProbeStats s;
  std::unordered_set<std::uint64_t> seen;
  std::uint32_t current = 0;
  bool any = false;
  for (const auto& e : log.entries()) {
    if (!any || e.t != current) {
      seen.clear();
      current = e.t;
      any = true;
    }
    if (e.kind == AccessKind::read) ++s.reads; else ++s.writes;
    if (seen.insert(e.address).second) ++s.probes;
  }
  return s;
}

// Trace persistence. Binary records are 13 bytes, little-endian:
// [u32 arrival][u64 cell address][u8 kind], kind 0 = read, 1 = write.

inline void write_trace_binary(const AccessLog& log, std::ostream& out) {
  for (const auto& e : log.entries()) {
    unsigned char buf[13];
    for (int b = 0; b < 4; ++b) buf[b] = static_cast<unsigned char>(e.t >> (8 * b));
    for (int b = 0; b < 8; ++b) buf[4 + b] = static_cast<unsigned char>(e.address >> (8 * b));
    buf[12] = static_cast<unsigned char>(e.kind);
    out.write(reinterpret_cast<const char*>(buf), sizeof buf);
  }
  if (!out) throw std::runtime_error("write_trace_binary: stream failure");
}

inline AccessLog read_trace_binary(std::istream& in) {
  AccessLog log;
  unsigned char buf[13];
  while (in.read(reinterpret_cast<char*>(buf), sizeof buf)) {
    AccessEntry e;
    for (int b = 0; b < 4; ++b) e.t |= std::uint32_t{buf[b]} << (8 * b);
    for (int b = 0; b < 8; ++b) e.address |= std::uint64_t{buf[4 + b]} << (8 * b);
    if (buf[12] > 1) throw std::runtime_error("read_trace_binary: bad access kind");
    e.kind = static_cast<AccessKind>(buf[12]);
    log.append(e);
  }
  if (in.gcount() != 0) throw std::runtime_error("read_trace_binary: truncated record");
  return log;
}

inline void write_trace_csv(const AccessLog& log, std::ostream& out) {
  out << "t,address,kind\n";
  for (const auto& e : log.entries()) out << e.t << ',' << e.address << ',' << to_string(e.kind) << '\n';
}

inline AccessLog read_trace_csv(std::istream& in) {
  AccessLog log;
  std::string line;
  if (!std::getline(in, line) || line != "t,address,kind") throw std::runtime_error("read_trace_csv: missing header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto a = line.find(',');
    const auto b = line.find(',', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos) throw std::runtime_error("read_trace_csv: malformed line");
    AccessEntry e;
    try {
      e.t = static_cast<std::uint32_t>(std::stoul(line.substr(0, a)));
      e.address = std::stoull(line.substr(a + 1, b - a - 1));
    } catch (const std::logic_error&) {
      throw std::runtime_error("read_trace_csv: malformed number");
    }
    const std::string kind = line.substr(b + 1);
    if (kind == "read") e.kind = AccessKind::read;
    else if (kind == "write") e.kind = AccessKind::write;
    else throw std::runtime_error("read_trace_csv: bad access kind");
    log.append(e);
  }
  return log;
}

}  // namespace probestream
