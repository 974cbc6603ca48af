#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "ffsc/errors.hpp"
#include "ffsc/farey.hpp"

using namespace ffsc;

namespace {

// Naive 2x2 product over signed 64-bit, used as an independent oracle.
using Naive = std::array<std::int64_t, 4>;

Naive naive_word(const std::vector<std::uint8_t>& bits) {
  Naive m{1, 0, 0, 1};
  for (auto b : bits) {
    const Naive f = b ? Naive{1, 1, 0, 1} : Naive{1, 0, 1, 1};
    m = {m[0] * f[0] + m[1] * f[2], m[0] * f[1] + m[1] * f[3], m[2] * f[0] + m[3] * f[2],
         m[2] * f[1] + m[3] * f[3]};
  }
  return m;
}

std::vector<std::uint8_t> bits_of(std::uint64_t mask, unsigned n) {
  std::vector<std::uint8_t> bits(n);
  for (unsigned i = 0; i < n; ++i) {
    bits[i] = static_cast<std::uint8_t>((mask >> i) & 1U);
  }
  return bits;
}

}  // namespace

TEST_CASE("farey levels 0..2") {
  const auto l0 = initial_level();
  REQUIRE(l0.entries.size() == 2);
  CHECK(l0.entries[0] == Fraction{0, 1});
  CHECK(l0.entries[1] == Fraction{1, 1});

  const auto l1 = next_level(l0);
  CHECK(l1.index == 1);
  CHECK(l1.entries == std::vector<Fraction>{{0, 1}, {1, 2}, {1, 1}});

  const auto l2 = farey_level(2);
  CHECK(l2.entries == std::vector<Fraction>{{0, 1}, {1, 3}, {1, 2}, {2, 3}, {1, 1}});
}

TEST_CASE("farey level invariants") {
  auto level = initial_level();
  for (unsigned n = 1; n <= 20; ++n) {
    level = next_level(level);
    REQUIRE(level.entries.size() == (std::size_t{1} << n) + 1);
    for (std::size_t k = 0; k + 1 < level.entries.size(); ++k) {
      const auto& l = level.entries[k];
      const auto& r = level.entries[k + 1];
      // Unimodular neighbours: r.num * l.den - l.num * r.den == 1.
      REQUIRE(r.num * l.den == l.num * r.den + 1);
    }
  }
}

TEST_CASE("streamed pairs match the materialized level") {
  const auto level = farey_level(12);
  std::size_t k = 0;
  bool ok = true;
  for_each_adjacent_pair(12, [&](const Fraction& l, const Fraction& r, unsigned depth) {
    ok = ok && depth == 12 && l == level.entries[k] && r == level.entries[k + 1];
    ++k;
  });
  CHECK(ok);
  CHECK(k == level.entries.size() - 1);
}

TEST_CASE("matrix words") {
  CHECK(word_matrix(SpinConfiguration::parse("A")) == kMatrixA);
  CHECK(word_matrix(SpinConfiguration::parse("1")) == kMatrixB);
  CHECK(word_matrix(SpinConfiguration::parse("AB")) == Matrix2{1, 1, 1, 2});
  CHECK(word_matrix(SpinConfiguration::parse("BA")) == Matrix2{2, 1, 1, 1});
  CHECK(SpinConfiguration::parse("0110").bits() == std::vector<std::uint8_t>{0, 1, 1, 0});
  CHECK(SpinConfiguration::parse("ABBA").b_count() == 2);
  CHECK_THROWS_AS(SpinConfiguration::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(SpinConfiguration::parse("0x1"), std::invalid_argument);
}

TEST_CASE("traces at N = 3") {
  std::multiset<std::uint64_t> a_half;
  for (const char* w : {"AAA", "AAB", "ABA", "ABB"}) {
    a_half.insert(static_cast<std::uint64_t>(trace(word_matrix(SpinConfiguration::parse(w)))));
  }
  CHECK(a_half == std::multiset<std::uint64_t>{2, 4, 4, 4});

  const auto farey = chain_traces_via_farey(3);
  REQUIRE(farey.size() == 4);
  CHECK(farey[0] == ChainTrace{2, 0});
  CHECK(farey[1] == ChainTrace{4, 1});
  CHECK(farey[2] == ChainTrace{4, 1});
  CHECK(farey[3] == ChainTrace{4, 2});
}

TEST_CASE("word products agree with a naive oracle, det 1, trace >= 2") {
  for (unsigned n = 1; n <= 12; ++n) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const auto bits = bits_of(mask, n);
      const auto m = word_matrix(SpinConfiguration(bits));
      const auto o = naive_word(bits);
      REQUIRE(m == Matrix2{static_cast<UInt128>(o[0]), static_cast<UInt128>(o[1]),
                           static_cast<UInt128>(o[2]), static_cast<UInt128>(o[3])});
      REQUIRE(is_unimodular(m));
      REQUIRE(trace(m) >= 2);
    }
  }
}

TEST_CASE("random long words stay unimodular") {
  std::mt19937_64 rng(20240611);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<std::uint8_t> bits(100);
    for (auto& b : bits) {
      b = static_cast<std::uint8_t>(rng() & 1U);
    }
    const SpinConfiguration config(bits);
    const auto m = word_matrix(config);
    CHECK(is_unimodular(m));
    CHECK(trace(m) >= 2);
    CHECK(tilde(m) == word_matrix(config.complement()));
  }
}

TEST_CASE("overflow is reported, not wrapped") {
  // (AB)^k has Fibonacci-like entries; 128 bits are exhausted near k = 92.
  std::vector<std::uint8_t> bits;
  for (int k = 0; k < 200; ++k) {
    bits.push_back(0);
    bits.push_back(1);
  }
  CHECK_THROWS_AS((void)word_matrix(SpinConfiguration(bits)), OverflowError);
  const UInt128 big = ~UInt128{0} - 1;
  CHECK_THROWS_AS((void)mediant(Fraction{0, big}, Fraction{1, big}), OverflowError);
}

TEST_CASE("tilde exchanges A and B") {
  CHECK(tilde(kMatrixA) == kMatrixB);
  CHECK(tilde(tilde(Matrix2{3, 5, 7, 11})) == Matrix2{3, 5, 7, 11});
  for (unsigned n = 1; n <= 12; ++n) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const auto c = SpinConfiguration::from_mask(mask, n);
      REQUIRE(tilde(word_matrix(c)) == word_matrix(c.complement()));
    }
  }
}

TEST_CASE("farey chain traces equal word traces") {
  for (unsigned n = 1; n <= 14; ++n) {
    const auto farey = chain_traces_via_farey(n);
    REQUIRE(farey.size() == (std::size_t{1} << (n - 1)));
    for (std::uint64_t i = 0; i < farey.size(); ++i) {
      // Word: A followed by the n-1 bits of i, most significant first.
      std::vector<std::uint8_t> bits(n, 0);
      for (unsigned s = 1; s < n; ++s) {
        bits[s] = static_cast<std::uint8_t>((i >> (n - 1 - s)) & 1U);
      }
      const auto o = naive_word(bits);
      REQUIRE(farey[i].trace == static_cast<UInt128>(o[0] + o[3]));
      REQUIRE(farey[i].b_count == SpinConfiguration(bits).b_count());
    }
  }
  CHECK_THROWS_AS((void)chain_traces_via_farey(0), std::invalid_argument);
}
