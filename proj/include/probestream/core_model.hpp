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

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace probestream {

using Symbol = std::uint32_t;

/// Bit-width of the symbols of a stream problem. Codes live in [0, 2^delta).
class Alphabet {
 public:
  explicit Alphabet(unsigned delta) : delta_(delta) {
    if (delta == 0 || delta > 32) {
      throw std::invalid_argument("alphabet: delta must be in [1, 32]");
    }
  }

  /// Smallest alphabet that can hold every code in [0, code_count).
  static Alphabet for_code_count(std::uint64_t code_count) {
    unsigned d = code_count <= 2 ? 1u : static_cast<unsigned>(std::bit_width(code_count - 1));
    return Alphabet(d);
  }

  unsigned delta() const { return delta_; }
  std::uint64_t size() const { return std::uint64_t{1} << delta_; }
  bool contains(Symbol s) const { return delta_ >= 32 || s < size(); }

 private:
  unsigned delta_;
};

/// Immutable sequence of symbol codes. Used both for the fixed string and
/// for streams.
class SymbolString {
 public:
  SymbolString() = default;
  explicit SymbolString(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}
  SymbolString(std::initializer_list<Symbol> symbols) : symbols_(symbols) {}

  /// Each character becomes its byte value.
  static SymbolString from_text(std::string_view text) {
    std::vector<Symbol> out;
    out.reserve(text.size());
    for (unsigned char c : text) out.push_back(c);
    return SymbolString(std::move(out));
  }

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  Symbol at(std::size_t i) const { return symbols_.at(i); }
  std::span<const Symbol> span() const { return symbols_; }
  const std::vector<Symbol>& vec() const { return symbols_; }
  auto begin() const { return symbols_.begin(); }
  auto end() const { return symbols_.end(); }

  /// Copy of [first, first + count).
  SymbolString substr(std::size_t first, std::size_t count) const {
    if (first > size() || count > size() - first) {
      throw std::out_of_range("substr: range exceeds string length");
    }
    return SymbolString(std::vector<Symbol>(symbols_.begin() + static_cast<std::ptrdiff_t>(first),
                                            symbols_.begin() + static_cast<std::ptrdiff_t>(first + count)));
  }

  Symbol max_symbol() const {
    return symbols_.empty() ? 0 : *std::max_element(symbols_.begin(), symbols_.end());
  }

  bool valid_for(const Alphabet& a) const {
    return std::all_of(symbols_.begin(), symbols_.end(), [&](Symbol s) { return a.contains(s); });
  }

  friend bool operator==(const SymbolString&, const SymbolString&) = default;

 private:
  std::vector<Symbol> symbols_;
};

/// Translation table from raw symbols to a compact alphabet. Symbols of F get
/// codes 0..k-1 in first-occurrence order; everything else maps to k.
class AlphabetRemap {
 public:
  AlphabetRemap() = default;

  explicit AlphabetRemap(const SymbolString& fixed) {
    for (Symbol s : fixed) {
      if (table_.find(s) == table_.end()) {
        Symbol code = static_cast<Symbol>(table_.size());
        table_.emplace(s, code);
      }
    }
  }

  Symbol operator()(Symbol raw) const {
    auto it = table_.find(raw);
    return it == table_.end() ? other_code() : it->second;
  }

  SymbolString apply(const SymbolString& s) const {
    std::vector<Symbol> out;
    out.reserve(s.size());
    for (Symbol x : s) out.push_back((*this)(x));
    return SymbolString(std::move(out));
  }

  /// Number of distinct symbols of F (k).
  std::size_t fixed_symbol_count() const { return table_.size(); }
  /// The shared code of every symbol absent from F.
  Symbol other_code() const { return static_cast<Symbol>(table_.size()); }
  /// Codes used after remapping: the k symbols of F plus the shared code.
  std::size_t code_count() const { return table_.size() + 1; }

 private:
  std::unordered_map<Symbol, Symbol> table_;
};

/// Maps one incoming symbol through the remap built from F.
inline Symbol normalize_alphabet(const AlphabetRemap& remap, Symbol incoming) { return remap(incoming); }

inline bool is_power_of_two(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

/// A fixed string padded on the left to a power-of-two length.
struct NormalizedProblem {
  SymbolString fixed;        // sigma^(n_prime - n) . F
  std::size_t n = 0;         // original length
  std::size_t n_prime = 0;   // padded length
  std::size_t offset = 0;    // n_prime - n, subtracted from edit / Hamming outputs
  Symbol sigma = 0;          // pad symbol; must never occur in the stream
  AlphabetRemap remap;
};

inline NormalizedProblem pad_to_power_of_two(const SymbolString& fixed, Symbol sigma) {
  if (fixed.empty()) throw std::invalid_argument("pad_to_power_of_two: empty fixed string");
  NormalizedProblem out;
  out.n = fixed.size();
  out.n_prime = std::bit_ceil(out.n);
  out.offset = out.n_prime - out.n;
  out.sigma = sigma;
  std::vector<Symbol> padded(out.offset, sigma);
  padded.insert(padded.end(), fixed.begin(), fixed.end());
  out.fixed = SymbolString(std::move(padded));
  return out;
}

/// Remap F, then pad with a symbol one past the remapped alphabet. Streams
/// must be passed through `remap.apply` before use, which guarantees the pad
/// symbol never appears in them.
inline NormalizedProblem normalize(const SymbolString& fixed) {
  AlphabetRemap remap(fixed);
  NormalizedProblem out = pad_to_power_of_two(remap.apply(fixed), remap.other_code() + 1);
  out.remap = std::move(remap);
  return out;
}

/// Alphabet able to hold every code a normalized problem can produce,
/// including the pad symbol.
inline Alphabet normalized_alphabet(const NormalizedProblem& p) {
  return Alphabet::for_code_count(static_cast<std::uint64_t>(p.sigma) + 1);
}

}  // namespace probestream
