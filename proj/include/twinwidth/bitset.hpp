#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tww {

using Word = std::uint64_t;

constexpr std::size_t words_for(std::size_t bits) noexcept { return (bits + 63) / 64; }

inline bool test_bit(std::span<const Word> row, std::size_t i) noexcept {
  return (row[i >> 6] >> (i & 63)) & 1U;
}
inline void set_bit(std::span<Word> row, std::size_t i) noexcept { row[i >> 6] |= Word{1} << (i & 63); }
inline void clear_bit(std::span<Word> row, std::size_t i) noexcept {
  row[i >> 6] &= ~(Word{1} << (i & 63));
}
inline void assign_bit(std::span<Word> row, std::size_t i, bool on) noexcept {
  if (on) set_bit(row, i); else clear_bit(row, i);
}

inline std::size_t popcount(std::span<const Word> row) noexcept {
  std::size_t c = 0;
  for (Word w : row) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

inline bool any_bit(std::span<const Word> row) noexcept {
  return std::any_of(row.begin(), row.end(), [](Word w) { return w != 0; });
}

// Calls f(index) for every set bit in ascending order.
template <class F>
void for_each_bit(Word w, std::size_t base, F&& f) {
  while (w) {
    f(base + static_cast<std::size_t>(std::countr_zero(w)));
    w &= w - 1;
  }
}

template <class F>
void for_each_bit(std::span<const Word> row, F&& f) {
  for (std::size_t k = 0; k < row.size(); ++k) for_each_bit(row[k], k * 64, f);
}

// In-place transpose of a 64x64 bit block (bit j of a[i] <-> bit i of a[j]).
inline void transpose64(Word* a) noexcept {
  Word m = 0x00000000FFFFFFFFULL;
  for (std::size_t j = 32; j != 0; j >>= 1, m ^= (m << j)) {
    for (std::size_t k = 0; k < 64; k = ((k | j) + 1) & ~j) {
      Word t = ((a[k] >> j) ^ a[k | j]) & m;
      a[k] ^= t << j;
      a[k | j] ^= t;
    }
  }
}

// Owning fixed-size bit row.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t bits) : bits_(bits), words_(words_for(bits), 0) {}

  std::size_t size() const noexcept { return bits_; }
  bool test(std::size_t i) const noexcept { return test_bit(words_, i); }
  void set(std::size_t i) noexcept { set_bit(words_, i); }
  void reset(std::size_t i) noexcept { clear_bit(words_, i); }
  void assign(std::size_t i, bool on) noexcept { assign_bit(words_, i, on); }
  void clear() noexcept { std::fill(words_.begin(), words_.end(), 0); }
  void fill() noexcept {
    std::fill(words_.begin(), words_.end(), ~Word{0});
    trim();
  }
  std::size_t count() const noexcept { return popcount(words_); }
  bool none() const noexcept { return !any_bit(words_); }

  std::span<Word> words() noexcept { return words_; }
  std::span<const Word> words() const noexcept { return words_; }

  friend bool operator==(const Bitset&, const Bitset&) = default;

 private:
  void trim() noexcept {
    if (bits_ % 64 != 0 && !words_.empty()) words_.back() &= (Word{1} << (bits_ % 64)) - 1;
  }
  std::size_t bits_ = 0;
  std::vector<Word> words_;
};

// Square bit matrix stored as contiguous padded rows.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n) : n_(n), stride_(words_for(n)), data_(n * stride_, 0) {}

  bool empty() const noexcept { return data_.empty(); }
  std::size_t size() const noexcept { return n_; }
  std::size_t stride() const noexcept { return stride_; }
  std::span<Word> row(std::size_t i) noexcept { return {data_.data() + i * stride_, stride_}; }
  std::span<const Word> row(std::size_t i) const noexcept { return {data_.data() + i * stride_, stride_}; }
  bool test(std::size_t i, std::size_t j) const noexcept { return test_bit(row(i), j); }
  void set(std::size_t i, std::size_t j) noexcept { set_bit(row(i), j); }
  void reset(std::size_t i, std::size_t j) noexcept { clear_bit(row(i), j); }

  // Mirrors the strict upper triangle into the lower one.
  void symmetrize_from_upper() {
    const std::size_t blocks = stride_;
    Word tile[64];
    for (std::size_t bi = 0; bi < blocks; ++bi) {
      for (std::size_t bj = bi; bj < blocks; ++bj) {
        load_tile(bi, bj, tile);
        transpose64(tile);
        if (bi == bj) {
          for (std::size_t t = 0; t < 64 && bi * 64 + t < n_; ++t) data_[(bi * 64 + t) * stride_ + bi] |= tile[t];
        } else {
          for (std::size_t t = 0; t < 64 && bj * 64 + t < n_; ++t) data_[(bj * 64 + t) * stride_ + bi] = tile[t];
        }
      }
    }
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  void load_tile(std::size_t bi, std::size_t bj, Word* tile) const {
    for (std::size_t t = 0; t < 64; ++t) {
      std::size_t r = bi * 64 + t;
      tile[t] = r < n_ ? data_[r * stride_ + bj] : 0;
    }
  }

  std::size_t n_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> data_;
};

}  // namespace tww
