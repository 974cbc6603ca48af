#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "doctest.h"
#include "ffsc/errors.hpp"
#include "ffsc/spin_chain.hpp"

using namespace ffsc;
using boost::multiprecision::cpp_rational;

namespace {

struct NaiveTrace {
  std::int64_t trace;
  int b_count;
};

std::vector<NaiveTrace> naive_traces(int n) {
  std::vector<NaiveTrace> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::array<std::int64_t, 4> m{1, 0, 0, 1};
    int b = 0;
    for (int i = 0; i < n; ++i) {
      if ((mask >> i) & 1U) {
        m = {m[0], m[0] + m[1], m[2], m[2] + m[3]};
        ++b;
      } else {
        m = {m[0] + m[1], m[1], m[2] + m[3], m[3]};
      }
    }
    out.push_back({m[0] + m[3], b});
  }
  return out;
}

// Z_N(beta, 0) for integer beta as an exact rational.
cpp_rational exact_z(int n, int beta) {
  cpp_rational z = 0;
  for (const auto& t : naive_traces(n)) {
    cpp_rational w = 1;
    for (int k = 0; k < beta; ++k) {
      w /= t.trace;
    }
    z += w;
  }
  return z;
}

long double naive_log_z(int n, double beta, double h) {
  long double z = 0;
  for (const auto& t : naive_traces(n)) {
    const long double e = std::log(static_cast<long double>(t.trace)) + h * (2.0L * t.b_count - n);
    z += std::exp(-beta * e);
  }
  return std::log(z);
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }

const EnumerationOptions kSerial{1, kDefaultEnumerationCap};

}  // namespace

TEST_CASE("hand values of Z") {
  CHECK(log_partition({1, 2.0, 0.0}).log_z == doctest::Approx(std::log(0.5)).epsilon(1e-15));
  CHECK(log_partition({2, 2.0, 0.0}).log_z == doctest::Approx(std::log(13.0 / 18.0)).epsilon(1e-15));
  CHECK(log_partition({1, 1.0, 0.0}).log_z == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("single site in a field") {
  for (double beta : {0.5, 1.0, 3.0}) {
    for (double h : {-0.7, 0.0, 0.3}) {
      const auto p = thermo_point({1, beta, h});
      CHECK(p.m == doctest::Approx(std::tanh(beta * h)).epsilon(1e-14));
      const double lz = -beta * std::log(2.0) + std::log(2.0 * std::cosh(beta * h));
      CHECK(log_partition({1, beta, h}).log_z == doctest::Approx(lz).epsilon(1e-14));
    }
  }
}

TEST_CASE("exact rational oracle, integer beta, h = 0") {
  for (int n = 1; n <= 10; ++n) {
    for (int beta = 1; beta <= 3; ++beta) {
      const double expected = std::log(static_cast<double>(exact_z(n, beta)));
      const double got = log_partition({n, static_cast<double>(beta), 0.0}).log_z;
      REQUIRE(std::fabs(got - expected) <= 1e-13 * std::max(1.0, std::fabs(expected)));
    }
  }
}

TEST_CASE("entropy and energy from exact weights at beta = 3") {
  constexpr int n = 6;
  constexpr int beta = 3;
  const cpp_rational z = exact_z(n, beta);
  long double mean_e = 0;
  for (const auto& t : naive_traces(n)) {
    const cpp_rational w = cpp_rational(1) / (cpp_rational(t.trace) * t.trace * t.trace);
    mean_e += static_cast<long double>(static_cast<double>(w / z)) *
              std::log(static_cast<long double>(t.trace));
  }
  const double f = -std::log(static_cast<double>(z)) / (beta * n);
  const double u = static_cast<double>(mean_e) / n;
  const auto p = thermo_point({n, double(beta), 0.0});
  REQUIRE(p.f.has_value());
  CHECK(*p.f == doctest::Approx(f).epsilon(1e-13));
  CHECK(p.u == doctest::Approx(u).epsilon(1e-13));
  CHECK(p.s == doctest::Approx(beta * (u - f)).epsilon(1e-12));
  CHECK(p.m == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("general field against a naive sum") {
  for (int n = 1; n <= 12; ++n) {
    for (double beta : {0.3, 2.0, 3.5}) {
      for (double h : {-1.2, 0.05, 0.8}) {
        const double expected = static_cast<double>(naive_log_z(n, beta, h));
        const auto r = log_partition({n, beta, h});
        REQUIRE(std::fabs(r.log_z - expected) <= 1e-13 * std::max(1.0, std::fabs(expected)));
      }
    }
  }
}

TEST_CASE("thermodynamic derivatives match finite differences") {
  const EnsembleParams base{10, 2.5, 0.2};
  const auto p = thermo_point(base);
  const double d = 1e-5;
  auto lz = [](int n, double beta, double h) { return log_partition({n, beta, h}).log_z; };
  const double n = base.n;

  const double dlz_dh = (lz(base.n, base.beta, base.h + d) - lz(base.n, base.beta, base.h - d)) / (2 * d);
  CHECK(p.m == doctest::Approx(dlz_dh / (base.beta * n)).epsilon(1e-7));

  const double dlz_db = (lz(base.n, base.beta + d, base.h) - lz(base.n, base.beta - d, base.h)) / (2 * d);
  CHECK(p.u == doctest::Approx(-dlz_db / n).epsilon(1e-7));

  const double mp = thermo_point({base.n, base.beta, base.h + d}).m;
  const double mm = thermo_point({base.n, base.beta, base.h - d}).m;
  CHECK(p.chi == doctest::Approx((mp - mm) / (2 * d)).epsilon(1e-6));

  CHECK(p.s == doctest::Approx(base.beta * (p.u - *p.f)).epsilon(1e-12));
  CHECK(p.s >= 0.0);
  CHECK(p.chi >= 0.0);
}

TEST_CASE("infinite temperature") {
  const auto p = thermo_point({8, 0.0, 0.4});
  CHECK_FALSE(p.f.has_value());
  CHECK(p.s == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(p.m == doctest::Approx(0.0));
  CHECK(log_partition({8, 0.0, 0.4}).log_z == doctest::Approx(8 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("A and B halves swap under h -> -h") {
  for (int n = 1; n <= 14; ++n) {
    const auto plus = log_partition({n, 2.0, 0.37});
    const auto minus = log_partition({n, 2.0, -0.37});
    REQUIRE(plus.log_z_b == minus.log_z_a);
    REQUIRE(plus.log_z_a == minus.log_z_b);
    REQUIRE(plus.log_z == minus.log_z);
  }
  const auto zero = log_partition({9, 1.7, 0.0});
  CHECK(zero.log_z_a == zero.log_z_b);
  CHECK(zero.log_z == doctest::Approx(zero.log_z_a + std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("excited part excludes the two uniform chains") {
  const auto r = log_partition({6, 2.0, 0.0});
  const double ground = 2.0 * std::pow(2.0, -2.0);
  CHECK(std::exp(r.log_z) - ground == doctest::Approx(std::exp(r.log_z_excited)).epsilon(1e-13));
  CHECK(log_partition({1, 2.0, 0.0}).log_z_excited == -std::numeric_limits<double>::infinity());
}

TEST_CASE("direct enumeration equals the Farey route") {
  for (int n = 1; n <= 16; ++n) {
    for (double beta : {0.5, 2.0, 3.5}) {
      for (double h : {0.0, 0.5, -0.25}) {
        const auto a = log_partition({n, beta, h});
        const auto b = log_partition_via_farey({n, beta, h});
        REQUIRE(std::fabs(std::expm1(a.log_z - b.log_z)) <= 1e-12);
        REQUIRE(std::fabs(std::expm1(a.log_z_a - b.log_z_a)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("results do not depend on the thread count") {
  for (int n : {5, 13, 18}) {
    const EnsembleParams params{n, 2.3, 0.11};
    const auto ref = log_partition(params, {1, kDefaultEnumerationCap});
    const auto ref_t = thermo_point(params, {1, kDefaultEnumerationCap});
    for (unsigned threads : {2U, 3U, 8U}) {
      const auto r = log_partition(params, {threads, kDefaultEnumerationCap});
      CHECK(r.log_z == ref.log_z);
      CHECK(r.log_z_a == ref.log_z_a);
      CHECK(r.log_z_b == ref.log_z_b);
      const auto t = thermo_point(params, {threads, kDefaultEnumerationCap});
      CHECK(*t.f == *ref_t.f);
      CHECK(t.u == ref_t.u);
      CHECK(t.m == ref_t.m);
      CHECK(t.s == ref_t.s);
      CHECK(t.chi == ref_t.chi);
    }
  }
}

TEST_CASE("correlations") {
  // N = 2, h = 0: AA, BB have trace 2; AB, BA have trace 3.
  const double beta = 1.5;
  const double w2 = std::pow(2.0, -beta);
  const double w3 = std::pow(3.0, -beta);
  CHECK(correlation({2, beta, 0.0}, 2) == doctest::Approx((2 * w2 - 2 * w3) / (2 * w2 + 2 * w3)));
  CHECK(correlation({7, beta, 0.3}, 1) == doctest::Approx(1.0).epsilon(1e-14));

  const auto all = correlations({9, 2.0, 0.0}, kSerial);
  REQUIRE(all.size() == 9);
  for (int j = 1; j <= 9; ++j) {
    CHECK(all[static_cast<std::size_t>(j - 1)] ==
          doctest::Approx(correlation({9, 2.0, 0.0}, j)).epsilon(1e-14));
    CHECK(all[static_cast<std::size_t>(j - 1)] >= -1e-12);
  }
  CHECK_THROWS_AS((void)correlation({4, 1.0, 0.0}, 5), DomainError);
  CHECK_THROWS_AS((void)correlation({4, 1.0, 0.0}, 0), DomainError);
}

TEST_CASE("spectrum") {
  const auto s3 = spectrum_summary(3);
  CHECK(s3.ground_count == 2);
  CHECK(s3.min_excited_trace == 4);
  CHECK(s3.max_trace == 4);
  CHECK(spectrum_summary(1).min_excited_trace == 0);
  for (int n = 2; n <= 16; ++n) {
    const auto s = spectrum_summary(n);
    REQUIRE(s.ground_count == 2);
    REQUIRE(s.min_excited_trace >= static_cast<std::uint64_t>(n));
  }
}

TEST_CASE("free energy sequence") {
  const auto seq = free_energy_sequence(6, 2.0, 0.1);
  REQUIRE(seq.size() == 6);
  for (int n = 1; n <= 6; ++n) {
    CHECK(seq[static_cast<std::size_t>(n - 1)].first == n);
    CHECK(seq[static_cast<std::size_t>(n - 1)].second ==
          doctest::Approx(-log_partition({n, 2.0, 0.1}).log_z / (2.0 * n)));
  }
  CHECK_THROWS_AS((void)free_energy_sequence(6, 0.0, 0.1), DomainError);
}

TEST_CASE("argument validation and caps") {
  CHECK_THROWS_AS(validate({0, 1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(validate({3, -1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(validate({3, 1.0, std::nan("")}), DomainError);
  CHECK_THROWS_AS((void)log_partition({12, 1.0, 0.0}, {1, 10}), CapExceededError);
  CHECK_THROWS_AS((void)log_partition({63, 1.0, 0.0}, {1, 100}), CapExceededError);
}
