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

// Reference engines. Everything here is deliberately naive: these functions
// are the ground truth the cell-probe engine and the lemma harness are
// checked against.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "probestream/core_model.hpp"

namespace probestream {

__extension__ using Wide = __int128;
__extension__ using UWide = unsigned __int128;

inline std::string to_string(Wide v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  UWide u = neg ? static_cast<UWide>(-(v + 1)) + 1 : static_cast<UWide>(v);
  std::string s;
  while (u != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

/// One column of the edit-distance lattice: values for rows j = -1..n-1.
/// Infinity is stored as n+1.
class DpColumn {
 public:
  using Value = std::int32_t;

  DpColumn() = default;
  explicit DpColumn(std::size_t n) : n_(n), values_(n + 1, static_cast<Value>(n + 1)) {}

  /// Column -1 of the lattice: ED(j,-1) = j+1.
  static DpColumn boundary(std::size_t n) {
    DpColumn c(n);
    for (std::size_t k = 0; k <= n; ++k) c.values_[k] = static_cast<Value>(k);
    c.index_ = -1;
    return c;
  }

  std::size_t n() const { return n_; }
  Value inf() const { return static_cast<Value>(n_ + 1); }
  Value at(int j) const { return values_.at(static_cast<std::size_t>(j + 1)); }
  void set(int j, Value v) { values_.at(static_cast<std::size_t>(j + 1)) = v; }
  bool finite(int j) const { return at(j) < inf(); }
  bool all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [&](Value v) { return v < inf(); });
  }
  std::int64_t index() const { return index_; }
  void set_index(std::int64_t i) { index_ = i; }
  std::span<const Value> values() const { return values_; }
  std::span<Value> values() { return values_; }

  bool operator==(const DpColumn& o) const { return n_ == o.n_ && values_ == o.values_; }

 private:
  std::size_t n_ = 0;
  std::vector<Value> values_;
  std::int64_t index_ = 0;
};

enum class EdgeKind { right, down, diag };

/// Weight of the edge leaving lattice node (j,i). Rows index F, columns
/// index S; row -1 and column -1 carry no symbol. A diagonal edge costs 0 on
/// a match and 1 on a mismatch.
inline int edge_weight(EdgeKind kind, int j, std::int64_t i, const SymbolString& fixed,
                       const SymbolString& stream) {
  const int n = static_cast<int>(fixed.size());
  const std::int64_t m = static_cast<std::int64_t>(stream.size());
  if (j < -1 || j > n - 1 || i < -1 || i > m - 1) {
    throw std::out_of_range("edge_weight: node outside lattice");
  }
  switch (kind) {
    case EdgeKind::right:
      if (i + 1 > m - 1) throw std::out_of_range("edge_weight: right edge leaves lattice");
      return j == -1 ? 0 : 1;
    case EdgeKind::down:
      if (j + 1 > n - 1) throw std::out_of_range("edge_weight: down edge leaves lattice");
      return 1;
    case EdgeKind::diag:
      if (i + 1 > m - 1 || j + 1 > n - 1) throw std::out_of_range("edge_weight: diagonal edge leaves lattice");
      return fixed[static_cast<std::size_t>(j + 1)] == stream[static_cast<std::size_t>(i + 1)] ? 0 : 1;
  }
  return 1;
}

/// Online edit distance by adding one lattice column per arrival. Output d(i)
/// is the minimum edit distance between F and any suffix of S[0..i].
class OnlineEditNaive {
 public:
  explicit OnlineEditNaive(SymbolString fixed)
      : fixed_(std::move(fixed)), column_(DpColumn::boundary(fixed_.size())), next_(fixed_.size()) {}

  int arrival(Symbol s) {
    const std::size_t n = fixed_.size();
    auto prev = column_.values();
    auto cur = next_.values();
    cur[0] = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      int best = prev[k] + 1;
      best = std::min(best, prev[k - 1] + (fixed_[k - 1] == s ? 0 : 1));
      best = std::min(best, cur[k - 1] + 1);
      cur[k] = best;
    }
    std::swap(column_, next_);
    column_.set_index(++index_);
    return column_.at(static_cast<int>(n) - 1);
  }

  /// ED(.,i) for the latest arrival i (or the boundary column before any).
  const DpColumn& column() const { return column_; }
  const SymbolString& fixed() const { return fixed_; }

 private:
  SymbolString fixed_;
  DpColumn column_;
  DpColumn next_;
  std::int64_t index_ = -1;
};

/// Convenience: d(i) for every prefix of the stream.
inline std::vector<int> online_edit_outputs(const SymbolString& fixed, const SymbolString& stream) {
  OnlineEditNaive engine(fixed);
  std::vector<int> out;
  out.reserve(stream.size());
  for (Symbol s : stream) out.push_back(engine.arrival(s));
  return out;
}

/// Textbook Wagner-Fischer edit distance.
inline int edit_distance(std::span<const Symbol> a, std::span<const Symbol> b) {
  std::vector<int> row(b.size() + 1);
  for (std::size_t k = 0; k <= b.size(); ++k) row[k] = static_cast<int>(k);
  for (std::size_t x = 1; x <= a.size(); ++x) {
    int diag = row[0];
    row[0] = static_cast<int>(x);
    for (std::size_t y = 1; y <= b.size(); ++y) {
      int up = row[y];
      row[y] = std::min({up + 1, row[y - 1] + 1, diag + (a[x - 1] == b[y - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

inline constexpr std::size_t kBruteForceLimit = 512;

/// min over h of Edit(F, S[h..end]), by direct enumeration of suffixes
/// (including the empty one).
inline int brute_force_min_edit(const SymbolString& fixed, const SymbolString& prefix) {
  if (prefix.size() > kBruteForceLimit) throw std::length_error("brute_force_min_edit: prefix exceeds 512 symbols");
  int best = static_cast<int>(fixed.size());
  for (std::size_t h = 0; h <= prefix.size(); ++h) {
    best = std::min(best, edit_distance(fixed.span(), prefix.span().subspan(h)));
  }
  return best;
}

inline void require_same_length(const SymbolString& fixed, const SymbolString& window, const char* what) {
  if (fixed.size() != window.size()) throw std::invalid_argument(std::string(what) + ": length mismatch");
}

inline std::size_t hamming(const SymbolString& fixed, const SymbolString& window) {
  require_same_length(fixed, window, "hamming");
  std::size_t d = 0;
  for (std::size_t k = 0; k < fixed.size(); ++k) d += fixed[k] != window[k];
  return d;
}

inline Wide convolution(const SymbolString& fixed, const SymbolString& window) {
  require_same_length(fixed, window, "convolution");
  Wide acc = 0;
  for (std::size_t k = 0; k < fixed.size(); ++k) acc += static_cast<Wide>(fixed[k]) * static_cast<Wide>(window[k]);
  return acc;
}

/// Convolution reported modulo 2^delta, accumulated in the ring directly.
inline std::uint64_t convolution_mod(const SymbolString& fixed, const SymbolString& window, unsigned delta) {
  require_same_length(fixed, window, "convolution");
  const std::uint64_t mask = delta >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << delta) - 1;
  std::uint64_t acc = 0;
  for (std::size_t k = 0; k < fixed.size(); ++k) acc += std::uint64_t{fixed[k]} * std::uint64_t{window[k]};
  return acc & mask;
}

inline constexpr std::size_t kQuadraticLcsLimit = 4096;

/// Quadratic LCS length of two arbitrary strings.
inline std::size_t lcs_length(std::span<const Symbol> a, std::span<const Symbol> b) {
  if (a.size() > kQuadraticLcsLimit || b.size() > kQuadraticLcsLimit) {
    throw std::length_error("lcs: input exceeds quadratic size guard");
  }
  std::vector<std::uint32_t> row(b.size() + 1, 0);
  for (std::size_t x = 1; x <= a.size(); ++x) {
    std::uint32_t diag = 0;
    for (std::size_t y = 1; y <= b.size(); ++y) {
      std::uint32_t up = row[y];
      row[y] = a[x - 1] == b[y - 1] ? diag + 1 : std::max(up, row[y - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

inline std::size_t lcs(const SymbolString& fixed, const SymbolString& window) {
  require_same_length(fixed, window, "lcs");
  return lcs_length(fixed.span(), window.span());
}

/// Word-parallel LCS against a fixed string (Crochemore et al. bit-vector
/// recurrence). O(|F|/64) per symbol of the other string.
class BitParallelLcs {
 public:
  explicit BitParallelLcs(const SymbolString& fixed) : m_(fixed.size()), words_((fixed.size() + 63) / 64) {
    for (std::size_t k = 0; k < m_; ++k) {
      auto& mask = masks_[fixed[k]];
      if (mask.empty()) mask.assign(words_, 0);
      mask[k / 64] |= std::uint64_t{1} << (k % 64);
    }
  }

  std::size_t length(std::span<const Symbol> other) const {
    std::vector<std::uint64_t> v(words_, ~std::uint64_t{0});
    if (m_ % 64 != 0) v.back() = (std::uint64_t{1} << (m_ % 64)) - 1;
    for (Symbol s : other) {
      auto it = masks_.find(s);
      if (it == masks_.end()) continue;
      const auto& mask = it->second;
      std::uint64_t carry = 0;
      for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t u = v[w] & mask[w];
        std::uint64_t sum = v[w] + u;
        std::uint64_t c1 = sum < v[w];
        std::uint64_t sum2 = sum + carry;
        std::uint64_t c2 = sum2 < sum;
        carry = c1 | c2;
        v[w] = sum2 | (v[w] & ~mask[w]);
      }
      if (m_ % 64 != 0) v.back() &= (std::uint64_t{1} << (m_ % 64)) - 1;
    }
    std::size_t ones = 0;
    for (auto x : v) ones += static_cast<std::size_t>(std::popcount(x));
    return m_ - ones;
  }

 private:
  std::size_t m_;
  std::size_t words_;
  std::unordered_map<Symbol, std::vector<std::uint64_t>> masks_;
};

/// Myers' bit-vector recurrence for approximate matching: feeds the stream
/// one symbol at a time and reports d(i) = min over h of Edit(F, S[h..i]).
/// O(|F|/64) per symbol.
class BitParallelMinEdit {
 public:
  explicit BitParallelMinEdit(const SymbolString& fixed)
      : m_(fixed.size()), words_((fixed.size() + 63) / 64), pv_(words_, ~std::uint64_t{0}), mv_(words_, 0),
        score_(static_cast<int>(fixed.size())) {
    if (m_ == 0) throw std::invalid_argument("BitParallelMinEdit: empty fixed string");
    for (std::size_t k = 0; k < m_; ++k) {
      auto& mask = masks_[fixed[k]];
      if (mask.empty()) mask.assign(words_, 0);
      mask[k / 64] |= std::uint64_t{1} << (k % 64);
    }
    zero_.assign(words_, 0);
  }

  int arrival(Symbol s) {
    auto it = masks_.find(s);
    const std::vector<std::uint64_t>& eq = it == masks_.end() ? zero_ : it->second;
    const std::size_t top_word = (m_ - 1) / 64;
    const std::uint64_t top_bit = std::uint64_t{1} << ((m_ - 1) % 64);
    std::uint64_t add_carry = 0, ph_carry = 0, mh_carry = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      const std::uint64_t e = eq[w];
      const std::uint64_t pv = pv_[w], mv = mv_[w];
      const std::uint64_t xv = e | mv;
      const std::uint64_t a = e & pv;
      const std::uint64_t sum1 = a + pv;
      const std::uint64_t c1 = sum1 < a;
      const std::uint64_t sum = sum1 + add_carry;
      const std::uint64_t c2 = sum < sum1;
      add_carry = c1 | c2;
      const std::uint64_t xh = (sum ^ pv) | e;
      std::uint64_t ph = mv | ~(xh | pv);
      std::uint64_t mh = pv & xh;
      if (w == top_word) {
        if (ph & top_bit) ++score_;
        if (mh & top_bit) --score_;
      }
      const std::uint64_t ph_out = ph >> 63, mh_out = mh >> 63;
      ph = (ph << 1) | ph_carry;
      mh = (mh << 1) | mh_carry;
      ph_carry = ph_out;
      mh_carry = mh_out;
      pv_[w] = mh | ~(xv | ph);
      mv_[w] = ph & xv;
    }
    return score_;
  }

 private:
  std::size_t m_;
  std::size_t words_;
  std::vector<std::uint64_t> pv_, mv_, zero_;
  std::unordered_map<Symbol, std::vector<std::uint64_t>> masks_;
  int score_;
};

/// S_t: the n symbols ending at stream index 2n+t.
inline SymbolString window_view(const SymbolString& stream, std::size_t t, std::size_t n) {
  if (stream.size() != 3 * n) throw std::invalid_argument("window_view: stream length must be 3n");
  if (t >= n) throw std::out_of_range("window_view: arrival outside [0, n)");
  return stream.substr(n + 1 + t, n);
}

enum class Problem { edit, hamming, convolution, lcs };

inline const char* to_string(Problem p) {
  switch (p) {
    case Problem::edit: return "edit";
    case Problem::hamming: return "hamming";
    case Problem::convolution: return "convolution";
    case Problem::lcs: return "lcs";
  }
  return "?";
}

/// Reference online engine for the window problems (Hamming, convolution,
/// LCS). Keeps the latest n symbols and recomputes on each arrival; emits a
/// value once the window is full.
class OnlineWindowEngine {
 public:
  OnlineWindowEngine(Problem problem, SymbolString fixed, std::optional<unsigned> modulus_bits = std::nullopt)
      : problem_(problem), fixed_(std::move(fixed)), modulus_bits_(modulus_bits) {
    if (problem_ == Problem::edit) throw std::invalid_argument("OnlineWindowEngine: edit has its own engines");
    if (problem_ == Problem::lcs) lcs_.emplace(fixed_);
  }

  std::optional<Wide> arrival(Symbol s) {
    window_.push_back(s);
    if (window_.size() > fixed_.size()) window_.pop_front();
    if (window_.size() < fixed_.size()) return std::nullopt;
    switch (problem_) {
      case Problem::hamming: {
        std::size_t d = 0;
        for (std::size_t k = 0; k < fixed_.size(); ++k) d += fixed_[k] != window_[k];
        return static_cast<Wide>(d);
      }
      case Problem::convolution: {
        if (modulus_bits_) {
          std::uint64_t acc = 0;
          for (std::size_t k = 0; k < fixed_.size(); ++k) acc += std::uint64_t{fixed_[k]} * window_[k];
          unsigned b = *modulus_bits_;
          return static_cast<Wide>(b >= 64 ? acc : acc & ((std::uint64_t{1} << b) - 1));
        }
        Wide acc = 0;
        for (std::size_t k = 0; k < fixed_.size(); ++k) acc += static_cast<Wide>(fixed_[k]) * window_[k];
        return acc;
      }
      case Problem::lcs: {
        std::vector<Symbol> w(window_.begin(), window_.end());
        return static_cast<Wide>(lcs_->length(w));
      }
      case Problem::edit: break;
    }
    return std::nullopt;
  }

 private:
  Problem problem_;
  SymbolString fixed_;
  std::optional<unsigned> modulus_bits_;
  std::deque<Symbol> window_;
  std::optional<BitParallelLcs> lcs_;
};

}  // namespace probestream
