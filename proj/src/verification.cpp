#include "ffsc/verification.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "ffsc/analysis.hpp"
#include "ffsc/farey.hpp"
#include "ffsc/rg_flow.hpp"

namespace ffsc::analysis {
namespace {

constexpr std::array kBetas{0.5, 2.0, 3.5};
constexpr std::array kFields{0.0, 0.5, -0.5, 1.5, -1.5};

double relative_gap(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)); }

SuiteReport bounds_suite(const EnumerationOptions& options) {
  SuiteReport report{"bounds", {}};
  constexpr int kNMax = 12;
  const auto result = verify_bounds(kNMax, kBetas, kFields, options);
  for (const char* family : {"sandwich-lower", "sandwich-upper", "ratio-lower", "ratio-upper"}) {
    const auto bad = std::count_if(result.violations.begin(), result.violations.end(),
                                   [family](const BoundViolation& v) { return v.inequality == family; });
    report.checks.push_back({family, bad == 0, fmt::format("N<={} violations={}", kNMax, bad)});
  }
  report.checks.push_back({"bounds-total", result.passed(),
                           fmt::format("checks={} smallest_margin={:.3e}", result.checks,
                                       result.smallest_margin)});
  return report;
}

SuiteReport symmetry_suite(const EnumerationOptions& options) {
  SuiteReport report{"symmetry", {}};

  bool tilde_ok = true;
  std::uint64_t words = 0;
  for (unsigned n = 1; n <= 12 && tilde_ok; ++n) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const auto config = SpinConfiguration::from_mask(mask, n);
      ++words;
      if (tilde(word_matrix(config)) != word_matrix(config.complement())) {
        tilde_ok = false;
        break;
      }
    }
  }
  report.checks.push_back({"tilde-exchanges-A-B", tilde_ok, fmt::format("words={}", words)});

  bool swap_ok = true;
  double worst = 0.0;
  for (int n = 1; n <= 12; ++n) {
    for (double beta : kBetas) {
      for (double h : {0.1, 0.7, 2.0}) {
        const auto plus = log_partition({n, beta, h}, options);
        const auto minus = log_partition({n, beta, -h}, options);
        swap_ok = swap_ok && plus.log_z_b == minus.log_z_a && plus.log_z_a == minus.log_z_b;
        worst = std::max(worst, relative_gap(plus.log_z, minus.log_z));
      }
    }
  }
  report.checks.push_back({"Z_B(h)==Z_A(-h)", swap_ok, "bit-exact, N<=12"});
  report.checks.push_back(
      {"field-sign-symmetry", worst <= 1e-13, fmt::format("max_rel_gap={:.3e}", worst)});
  return report;
}

SuiteReport spectrum_suite(const EnumerationOptions& options) {
  SuiteReport report{"spectrum", {}};
  const double growth = 2.0 * std::log(std::numbers::phi);
  bool ground_ok = true;
  bool excited_ok = true;
  bool growth_ok = true;
  double max_rate = 0.0;
  for (int n = 1; n <= 16; ++n) {
    const auto s = spectrum_summary(n, options);
    ground_ok = ground_ok && s.ground_count == 2;
    if (n >= 2) {
      excited_ok = excited_ok && std::log(static_cast<double>(s.min_excited_trace)) >=
                                     std::log(static_cast<double>(n));
    }
    const double log_max = std::log(static_cast<double>(s.max_trace));
    growth_ok = growth_ok && log_max <= growth * n + 1.0;
    max_rate = std::max(max_rate, log_max / n);
  }
  report.checks.push_back({"two-ground-states", ground_ok, "exactly two traces equal 2, N<=16"});
  report.checks.push_back({"excited-gap", excited_ok, "min excited E >= ln N, N<=16"});
  report.checks.push_back(
      {"energy-growth", growth_ok, fmt::format("max ln(T)/N={:.6f} <= 2 ln(phi)+1/N", max_rate)});
  return report;
}

SuiteReport oracle_suite(const EnumerationOptions& options) {
  SuiteReport report{"oracle", {}};
  bool traces_ok = true;
  for (unsigned n = 1; n <= 14 && traces_ok; ++n) {
    const auto farey = chain_traces_via_farey(n);
    for (std::uint64_t i = 0; i < farey.size(); ++i) {
      // Lexicographic index i of an A chain: site 1 is A, sites 2..n read from
      // the bits of i, most significant first.
      std::vector<std::uint8_t> bits(n, 0);
      for (unsigned s = 1; s < n; ++s) {
        bits[s] = static_cast<std::uint8_t>((i >> (n - 1 - s)) & 1U);
      }
      const SpinConfiguration config(bits);
      if (farey[i] != ChainTrace{trace(word_matrix(config)), config.b_count()}) {
        traces_ok = false;
        break;
      }
    }
  }
  report.checks.push_back({"farey-traces", traces_ok, "Farey recursion == word products, N<=14"});

  double worst = 0.0;
  for (int n = 1; n <= 16; ++n) {
    for (double beta : kBetas) {
      for (double h : {0.0, 0.5}) {
        const auto direct = log_partition({n, beta, h}, options);
        const auto farey = log_partition_via_farey({n, beta, h});
        worst = std::max(worst, std::fabs(std::expm1(direct.log_z - farey.log_z)));
      }
    }
  }
  report.checks.push_back(
      {"Z-direct==Z-farey", worst <= 1e-12, fmt::format("max_rel_gap={:.3e}, N<=16", worst)});
  return report;
}

SuiteReport rg_suite() {
  SuiteReport report{"rg", {}};
  const auto rg = rg::RGConstants::constrained();
  const rg::MeanFieldConstants mf{};

  double flow_gap = 0.0;
  for (double t : {1e-4, 1e-3, 1e-2}) {
    for (double h : {1e-5, 1e-4, 1e-3}) {
      for (double u : {0.1, 0.5, 1.0}) {
        const rg::RGState s0{t, h, u, 0.0};
        const auto exact = rg::flow_closed_form(s0, 10.0, rg);
        const auto rk = rg::flow_integrate(s0, 10.0, 1e-3, rg);
        flow_gap = std::max({flow_gap, relative_gap(exact.t, rk.t), relative_gap(exact.h, rk.h),
                             relative_gap(exact.u, rk.u)});
      }
    }
  }
  report.checks.push_back(
      {"rk4-vs-closed-form", flow_gap <= 1e-8, fmt::format("max_rel_gap={:.3e}", flow_gap)});

  rg::MeanFieldConstants degenerate = mf;
  degenerate.a = -4.0 * mf.b * rg.t0 / (3.0 * mf.g * mf.g);
  const auto jumps = rg::discontinuities_ffsc(1e-3, degenerate, rg);
  const bool zero_jumps = std::fabs(jumps.delta_m) <= 1e-10 && std::fabs(jumps.delta_s) <= 1e-10;
  report.checks.push_back({"degenerate-jumps-vanish", zero_jumps,
                           fmt::format("dm={:.3e} ds={:.3e}", jumps.delta_m, jumps.delta_s)});

  const double ref = rg::susceptibility_high(1e-6, mf, rg) * rg::singular_f_high(1e-6, 0.0, mf, rg);
  double product_gap = 0.0;
  for (double t = 1e-6; t <= 1e-2 * (1 + 1e-9); t *= 10.0) {
    const double p = rg::susceptibility_high(t, mf, rg) * rg::singular_f_high(t, 0.0, mf, rg);
    product_gap = std::max(product_gap, relative_gap(p, ref));
  }
  report.checks.push_back(
      {"chi-times-f-constant", product_gap <= 1e-10, fmt::format("max_rel_gap={:.3e}", product_gap)});

  const auto boundary = rg::phase_boundary_ffsc(1e-4, mf, rg);
  const double ratio = boundary.h_star / boundary.asymptote;
  report.checks.push_back(
      {"boundary-asymptote", std::fabs(ratio - 1.0) <= 0.02, fmt::format("ratio={:.12f}", ratio)});

  const rg::MeanFieldConstants grad_case{0.0, 1.0, 1.0, 1.0};
  const double m0 = rg::minimize_mean_field(1.0, 0.01, grad_case);
  const double grad = std::fabs(rg::mean_field_gradient(m0, 1.0, 0.01, grad_case));
  report.checks.push_back({"mean-field-stationary", grad <= 1e-8, fmt::format("|df/dM|={:.3e}", grad)});

  report.checks.push_back({"field-exponent", rg.field_exponent() == 2.0,
                           fmt::format("d/y_h + y_t/y_h = {}", rg.field_exponent())});
  return report;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"bounds", "symmetry", "spectrum", "oracle", "rg"};
  return names;
}

SuiteReport run_suite(std::string_view name, const EnumerationOptions& options) {
  if (name == "bounds") {
    return bounds_suite(options);
  }
  if (name == "symmetry") {
    return symmetry_suite(options);
  }
  if (name == "spectrum") {
    return spectrum_suite(options);
  }
  if (name == "oracle") {
    return oracle_suite(options);
  }
  if (name == "rg") {
    return rg_suite();
  }
  throw std::invalid_argument("unknown verification suite: " + std::string(name));
}

}  // namespace ffsc::analysis
