#include "ffsc/farey.hpp"

#include <algorithm>
#include <stdexcept>

namespace ffsc {

std::string to_string(UInt128 value) {
  if (value == 0) {
    return "0";
  }
  std::string digits;
  while (value != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

Fraction mediant(const Fraction& left, const Fraction& right) {
  return {checked_add(left.num, right.num), checked_add(left.den, right.den)};
}

FareyLevel initial_level() { return {0, {Fraction{0, 1}, Fraction{1, 1}}}; }

FareyLevel next_level(const FareyLevel& level) {
  if (level.entries.size() < 2) {
    throw std::invalid_argument("Farey level needs at least two entries");
  }
  FareyLevel out;
  out.index = level.index + 1;
  out.entries.reserve(2 * level.entries.size() - 1);
  out.entries.push_back(level.entries.front());
  for (std::size_t k = 0; k + 1 < level.entries.size(); ++k) {
    out.entries.push_back(mediant(level.entries[k], level.entries[k + 1]));
    out.entries.push_back(level.entries[k + 1]);
  }
  return out;
}

FareyLevel farey_level(unsigned index) {
  FareyLevel level = initial_level();
  while (level.index < index) {
    level = next_level(level);
  }
  return level;
}

Matrix2 operator*(const Matrix2& lhs, const Matrix2& rhs) {
  const auto dot = [](UInt128 a, UInt128 b, UInt128 c, UInt128 d) {
    return checked_add(checked_mul(a, b), checked_mul(c, d));
  };
  return {dot(lhs.m1, rhs.m1, lhs.m2, rhs.m3), dot(lhs.m1, rhs.m2, lhs.m2, rhs.m4),
          dot(lhs.m3, rhs.m1, lhs.m4, rhs.m3), dot(lhs.m3, rhs.m2, lhs.m4, rhs.m4)};
}

UInt128 trace(const Matrix2& m) { return checked_add(m.m1, m.m4); }

bool is_unimodular(const Matrix2& m) {
  // m1*m4 == m2*m3 + 1; products may overflow for very long words.
  UInt128 diag = 0;
  UInt128 off = 0;
  if (__builtin_mul_overflow(m.m1, m.m4, &diag) || __builtin_mul_overflow(m.m2, m.m3, &off)) {
    throw OverflowError("determinant check exceeds 128 bits");
  }
  return diag == off + 1;
}

SpinConfiguration::SpinConfiguration(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) {
    throw std::invalid_argument("spin configuration must have length >= 1");
  }
  for (auto b : bits_) {
    if (b > 1) {
      throw std::invalid_argument("spin configuration bits must be 0 or 1");
    }
  }
}

SpinConfiguration SpinConfiguration::parse(std::string_view word) {
  std::vector<std::uint8_t> bits;
  bits.reserve(word.size());
  for (char c : word) {
    switch (c) {
      case '0':
      case 'A':
      case 'a':
        bits.push_back(0);
        break;
      case '1':
      case 'B':
      case 'b':
        bits.push_back(1);
        break;
      default:
        throw std::invalid_argument("unexpected character in spin word");
    }
  }
  return SpinConfiguration(std::move(bits));
}

SpinConfiguration SpinConfiguration::from_mask(std::uint64_t mask, unsigned length) {
  if (length > 64) {
    throw std::invalid_argument("mask holds at most 64 sites");
  }
  std::vector<std::uint8_t> bits(length);
  for (unsigned i = 0; i < length; ++i) {
    bits[i] = static_cast<std::uint8_t>((mask >> i) & 1U);
  }
  return SpinConfiguration(std::move(bits));
}

unsigned SpinConfiguration::b_count() const {
  return static_cast<unsigned>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

SpinConfiguration SpinConfiguration::complement() const {
  std::vector<std::uint8_t> flipped(bits_.size());
  std::transform(bits_.begin(), bits_.end(), flipped.begin(),
                 [](std::uint8_t b) { return static_cast<std::uint8_t>(1 - b); });
  return SpinConfiguration(std::move(flipped));
}

Matrix2 word_matrix(const SpinConfiguration& config) {
  Matrix2 product{};
  for (auto bit : config.bits()) {
    // M*A = ((m1+m2, m2), (m3+m4, m4)); M*B = ((m1, m1+m2), (m3, m3+m4)).
    if (bit == 0) {
      product.m1 = checked_add(product.m1, product.m2);
      product.m3 = checked_add(product.m3, product.m4);
    } else {
      product.m2 = checked_add(product.m1, product.m2);
      product.m4 = checked_add(product.m3, product.m4);
    }
  }
  return product;
}

std::vector<ChainTrace> chain_traces_via_farey(unsigned length) {
  std::vector<ChainTrace> out;
  if (length >= 1 && length <= 30) {
    out.reserve(std::size_t{1} << (length - 1));
  }
  for_each_chain_trace(length, [&out](const ChainTrace& ct) { out.push_back(ct); });
  return out;
}

}  // namespace ffsc
