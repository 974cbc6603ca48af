#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ffsc/spin_chain.hpp"

namespace ffsc::analysis {

// ---------------------------------------------------------------------------
// Rigorous bounds on Z_N.

struct BoundViolation {
  std::string inequality;  // "sandwich-lower", "sandwich-upper", "ratio-lower", "ratio-upper"
  int n = 0;
  double beta = 0.0;
  double h = 0.0;
  double margin = 0.0;  // log-domain slack, negative for a violation
};

struct BoundsReport {
  std::vector<BoundViolation> violations;
  std::size_t checks = 0;
  double smallest_margin = 0.0;

  [[nodiscard]] bool passed() const { return violations.empty(); }
};

/// Log-domain slack allowed for rounding when testing an inequality.
inline constexpr double kBoundTolerance = 1e-12;

/// For h != 0:  2^{-beta} e^{beta |h| N} < Z_N(beta, h) < Z_N(beta, 0) e^{beta |h| N}.
/// For h == 0:  2 * 2^{-beta} <= Z_N(beta, 0).
/// For every N < n_max:  2^{-beta} e^{-beta|h|} <= Z_{N+1} / Z_N <= 2 e^{beta|h|}.
[[nodiscard]] BoundsReport verify_bounds(int n_max, std::span<const double> betas,
                                         std::span<const double> fields,
                                         const EnumerationOptions& options = {});

// ---------------------------------------------------------------------------
// Thermodynamic-limit extrapolation and finite-size scaling.

struct Extrapolation {
  double f_infinity = 0.0;
  double c1 = 0.0;
  double residual = 0.0;  // RMS
  int n_points = 0;
};

/// Least squares f_N = f_inf + c1 / N. Needs at least four points with
/// strictly increasing N.
[[nodiscard]] Extrapolation extrapolate_f(std::span<const std::pair<int, double>> sequence);

struct FitResult {
  double exponent_p = 0.0;
  double amplitude = 0.0;
  double residual = 0.0;  // weighted RMS in log space
  int n_points = 0;
  std::vector<std::string> warnings;
};

/// ln Z_N ~ amplitude (ln N)^{-p}, fitted as ln|ln Z_N| against ln ln N with
/// weights N. Warns when max N < 24 or when ln Z_N changes sign.
[[nodiscard]] FitResult fss_fit(std::span<const std::pair<int, double>> log_z_sequence);

// ---------------------------------------------------------------------------
// Moments of neighbouring Farey differences.

struct MomentResult {
  int level = 0;
  int order = 0;
  double sum = 0.0;
};

/// Sum over adjacent pairs of level `level` of (r_{k+1} - r_k)^order. Each
/// difference is the exact rational 1 / (d_k d_{k+1}); the powers are summed
/// in quad precision and rounded once.
[[nodiscard]] MomentResult farey_moments(int level, int order);

struct MomentScalingRow {
  int order = 0;
  double power_vs_count = 0.0;               // slope of ln sum against ln(2^N + 1)
  double power_vs_count_log_corrected = 0.0; // same after dividing out (ln Ñ)^{delta_{2,m}}
  double power_vs_level = 0.0;               // slope of ln sum against ln N
  double residual_vs_count = 0.0;
  double residual_vs_level = 0.0;
  int n_points = 0;
};

/// Diagnostic power-law fits over levels 4..n_max for each order in 2..6.
[[nodiscard]] std::vector<MomentScalingRow> moment_scaling_report(int n_max,
                                                                 std::span<const int> orders);

}  // namespace ffsc::analysis
