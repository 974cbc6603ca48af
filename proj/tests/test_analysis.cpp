#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "doctest.h"
#include "ffsc/analysis.hpp"
#include "ffsc/errors.hpp"
#include "ffsc/farey.hpp"
#include "ffsc/verification.hpp"

using namespace ffsc;
using namespace ffsc::analysis;

TEST_CASE("bounds hold on a small grid") {
  constexpr std::array betas{0.5, 2.0, 3.5};
  constexpr std::array fields{0.0, 0.5, -1.5};
  const auto r = verify_bounds(10, betas, fields);
  CHECK(r.passed());
  // Per (beta, h): 10 sandwich checks (20 when h != 0) and 2 * 9 ratio checks.
  CHECK(r.checks == 3 * (10 + 20 + 20 + 3 * 18));
  CHECK_THROWS_AS((void)verify_bounds(0, betas, fields), DomainError);
}

TEST_CASE("single-site lower bound is tight at h = 0") {
  constexpr std::array betas{2.0};
  constexpr std::array fields{0.0};
  const auto r = verify_bounds(1, betas, fields);
  CHECK(r.passed());
  CHECK(std::fabs(r.smallest_margin) <= 1e-15);
}

TEST_CASE("extrapolation recovers an exact 1/N law") {
  std::vector<std::pair<int, double>> seq;
  for (int n = 8; n <= 24; ++n) {
    seq.emplace_back(n, -0.5 + 0.7 / n);
  }
  const auto e = extrapolate_f(seq);
  CHECK(e.f_infinity == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(e.c1 == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(e.residual <= 1e-12);
  CHECK(e.n_points == 17);

  const std::vector<std::pair<int, double>> short_seq{{1, 0.0}, {2, 0.0}, {3, 0.0}};
  CHECK_THROWS_AS((void)extrapolate_f(short_seq), DomainError);
  const std::vector<std::pair<int, double>> repeated{{4, 0.0}, {4, 0.1}, {5, 0.0}, {6, 0.0}};
  CHECK_THROWS_AS((void)extrapolate_f(repeated), DomainError);
}

TEST_CASE("finite-size fit recovers a log power law") {
  std::vector<std::pair<int, double>> seq;
  for (int n = 8; n <= 30; ++n) {
    seq.emplace_back(n, 0.3 * std::pow(std::log(static_cast<double>(n)), -1.5));
  }
  const auto fit = fss_fit(seq);
  CHECK(fit.exponent_p == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(fit.amplitude == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(fit.warnings.empty());

  std::vector<std::pair<int, double>> mixed{{8, 0.1}, {10, -0.05}, {12, 0.02}};
  const auto warned = fss_fit(mixed);
  CHECK(warned.warnings.size() == 2);
  const std::vector<std::pair<int, double>> zero{{8, 0.0}, {10, 1.0}, {12, 1.0}};
  CHECK_THROWS_AS((void)fss_fit(zero), DomainError);
}

TEST_CASE("first Farey moment is exactly one") {
  for (int level = 0; level <= 20; ++level) {
    REQUIRE(farey_moments(level, 1).sum == 1.0);
  }
}

TEST_CASE("second moment hand values") {
  CHECK(farey_moments(0, 2).sum == 1.0);
  CHECK(farey_moments(1, 2).sum == 0.5);
  CHECK(farey_moments(2, 2).sum == doctest::Approx(10.0 / 36.0).epsilon(1e-15));
  const double l3 = 2.0 * (1.0 / 16 + 1.0 / 144 + 1.0 / 225 + 1.0 / 100);
  CHECK(farey_moments(3, 2).sum == doctest::Approx(l3).epsilon(1e-15));
}

TEST_CASE("moments against the materialized level") {
  for (int level = 1; level <= 12; ++level) {
    const auto entries = farey_level(static_cast<unsigned>(level)).entries;
    for (int m = 2; m <= 5; ++m) {
      long double sum = 0;
      for (std::size_t k = 0; k + 1 < entries.size(); ++k) {
        const long double gap = static_cast<long double>(entries[k + 1].num) / static_cast<long double>(entries[k + 1].den) -
                                static_cast<long double>(entries[k].num) / static_cast<long double>(entries[k].den);
        sum += std::pow(gap, static_cast<long double>(m));
      }
      REQUIRE(farey_moments(level, m).sum == doctest::Approx(static_cast<double>(sum)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS((void)farey_moments(3, 0), DomainError);
  CHECK_THROWS_AS((void)farey_moments(31, 2), DomainError);
}

TEST_CASE("moment scaling report") {
  constexpr std::array orders{2, 3, 4};
  const auto rows = moment_scaling_report(14, orders);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].order == orders[i]);
    CHECK(rows[i].n_points == 11);
    CHECK(rows[i].power_vs_level < 0.0);
    CHECK(rows[i].power_vs_count < 0.0);
  }
  CHECK(rows[1].power_vs_level < rows[0].power_vs_level);
  CHECK(rows[1].power_vs_count == rows[1].power_vs_count_log_corrected);
  constexpr std::array bad{7};
  CHECK_THROWS_AS((void)moment_scaling_report(14, bad), DomainError);
  CHECK_THROWS_AS((void)moment_scaling_report(5, orders), DomainError);
}

TEST_CASE("moment powers up to level 20") {
  constexpr std::array orders{2, 3, 4, 5, 6};
  const auto rows = moment_scaling_report(20, orders);
  // The [-2.3, -1.7] window for m = 2 holds against the level index; against
  // ln(2^N + 1) the sums decay far more slowly.
  CHECK(rows[0].power_vs_level >= -2.3);
  CHECK(rows[0].power_vs_level <= -1.7);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].power_vs_level < rows[i - 1].power_vs_level);
    CHECK(rows[i].power_vs_count < rows[i - 1].power_vs_count);
  }
  const auto again = moment_scaling_report(20, orders);
  CHECK(again[0].power_vs_count == rows[0].power_vs_count);
  CHECK(again[0].residual_vs_level == rows[0].residual_vs_level);
}

TEST_CASE("fits are deterministic") {
  std::vector<std::pair<int, double>> seq;
  for (int n = 8; n <= 20; ++n) {
    seq.emplace_back(n, log_partition({n, 2.0, 0.0}).log_z);
  }
  const auto a = fss_fit(seq);
  const auto b = fss_fit(seq);
  CHECK(a.exponent_p == b.exponent_p);
  CHECK(a.amplitude == b.amplitude);
  CHECK(a.residual == b.residual);
  const auto e1 = extrapolate_f(seq);
  const auto e2 = extrapolate_f(seq);
  CHECK(e1.f_infinity == e2.f_infinity);
  CHECK(e1.c1 == e2.c1);
}

TEST_CASE("verification suites") {
  for (const auto& name : suite_names()) {
    const auto report = run_suite(name);
    CHECK_MESSAGE(report.passed(), name);
    CHECK(report.suite == name);
    CHECK_FALSE(report.checks.empty());
  }
  CHECK_THROWS_AS((void)run_suite("nope"), std::invalid_argument);
}
