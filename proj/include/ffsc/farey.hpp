#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ffsc/integer.hpp"

// Exact integer machinery for the Farey construction and the A/B matrix words.
//
// Bit convention used throughout the library: bit i of a configuration is
// sigma_i, 0 selects A and 1 selects B, and the leftmost bit is the first
// factor of the product.

namespace ffsc {

struct Fraction {
  UInt128 num = 0;
  UInt128 den = 1;

  [[nodiscard]] double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

[[nodiscard]] Fraction mediant(const Fraction& left, const Fraction& right);

struct FareyLevel {
  unsigned index = 0;
  std::vector<Fraction> entries;
};

/// Level 0: {0/1, 1/1}.
[[nodiscard]] FareyLevel initial_level();

/// Inserts the mediant between every adjacent pair. Throws OverflowError when
/// a mediant exceeds 128 bits.
[[nodiscard]] FareyLevel next_level(const FareyLevel& level);

/// Materializes level `index` by repeated next_level. Memory is O(2^index).
[[nodiscard]] FareyLevel farey_level(unsigned index);

/// 2x2 matrix ((m1, m2), (m3, m4)) over an unsigned integer type.
template <typename Int>
struct BasicMatrix2 {
  Int m1 = 1;
  Int m2 = 0;
  Int m3 = 0;
  Int m4 = 1;

  [[nodiscard]] constexpr Int trace() const { return m1 + m4; }
  friend constexpr bool operator==(const BasicMatrix2&, const BasicMatrix2&) = default;
};

using Matrix2 = BasicMatrix2<UInt128>;

inline constexpr Matrix2 kMatrixA{1, 0, 1, 1};
inline constexpr Matrix2 kMatrixB{1, 1, 0, 1};

/// Checked product; throws OverflowError.
[[nodiscard]] Matrix2 operator*(const Matrix2& lhs, const Matrix2& rhs);

/// Checked trace; throws OverflowError.
[[nodiscard]] UInt128 trace(const Matrix2& m);

/// True when m1*m4 - m2*m3 == 1, evaluated without wraparound.
[[nodiscard]] bool is_unimodular(const Matrix2& m);

/// ((m1,m2),(m3,m4)) -> ((m4,m3),(m2,m1)). Exchanges A and B inside any word.
[[nodiscard]] constexpr Matrix2 tilde(const Matrix2& m) { return {m.m4, m.m3, m.m2, m.m1}; }

class SpinConfiguration {
 public:
  /// Throws std::invalid_argument on empty input or a bit outside {0,1}.
  explicit SpinConfiguration(std::vector<std::uint8_t> bits);

  /// Parses a word over {'0','1'} or {'A','B'}.
  static SpinConfiguration parse(std::string_view word);

  /// The first `length` bits of `mask`, bit i taken from (mask >> i) & 1.
  static SpinConfiguration from_mask(std::uint64_t mask, unsigned length);

  [[nodiscard]] unsigned size() const { return static_cast<unsigned>(bits_.size()); }
  [[nodiscard]] std::uint8_t operator[](unsigned i) const { return bits_[i]; }
  [[nodiscard]] const std::vector<std::uint8_t>& bits() const { return bits_; }

  /// Number of B factors, i.e. sum of sigma_i.
  [[nodiscard]] unsigned b_count() const;

  /// Bitwise complement (A <-> B at every site).
  [[nodiscard]] SpinConfiguration complement() const;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Left-to-right product of A and B selected by the configuration bits.
[[nodiscard]] Matrix2 word_matrix(const SpinConfiguration& config);

struct ChainTrace {
  UInt128 trace = 0;
  unsigned b_count = 0;

  friend bool operator==(const ChainTrace&, const ChainTrace&) = default;
};

namespace detail {

template <typename Visitor>
void descend_pairs(const Fraction& left, const Fraction& right, unsigned depth, unsigned remaining,
                   Visitor& visit) {
  if (remaining == 0) {
    visit(left, right, depth);
    return;
  }
  const Fraction mid = mediant(left, right);
  descend_pairs(left, mid, depth + 1, remaining - 1, visit);
  descend_pairs(mid, right, depth + 1, remaining - 1, visit);
}

template <typename Visitor>
void descend_chains(const Fraction& left, const Fraction& right, unsigned b_count,
                    unsigned remaining, Visitor& visit) {
  if (remaining == 0) {
    visit(ChainTrace{checked_add(left.den, right.num), b_count});
    return;
  }
  const Fraction mid = mediant(left, right);
  descend_chains(left, mid, b_count, remaining - 1, visit);
  descend_chains(mid, right, b_count + 1, remaining - 1, visit);
}

}  // namespace detail

/// Streams the adjacent pairs of Farey level `level` in increasing order
/// without materializing the level. visit(left, right, level).
template <typename Visitor>
void for_each_adjacent_pair(unsigned level, Visitor&& visit) {
  detail::descend_pairs(Fraction{0, 1}, Fraction{1, 1}, 0, level, visit);
}

/// Streams (trace, b_count) for every chain of length `length` that starts
/// with A, in lexicographic word order (A before B). A chain of length L
/// corresponds to an adjacent pair (l, r) of Farey level L-1, with
/// trace = den(l) + num(r).
///
/// The visitor is called from the calling thread only; if it writes to shared
/// state the caller owns the synchronization.
template <typename Visitor>
void for_each_chain_trace(unsigned length, Visitor&& visit) {
  if (length == 0) {
    throw std::invalid_argument("chain length must be at least 1");
  }
  detail::descend_chains(Fraction{0, 1}, Fraction{1, 1}, 0, length - 1, visit);
}

[[nodiscard]] std::vector<ChainTrace> chain_traces_via_farey(unsigned length);

}  // namespace ffsc
