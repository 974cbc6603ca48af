#pragma once

// One-dimensional KDP chain with an external field, in two couplings:
//   EndpointField  Z_N = 2 cosh(beta N h) + 2^N exp(-beta N eps)
//   SiteField      Z_N = e^{beta N h} + e^{-beta N h} + e^{-beta eps N} (2 cosh beta h)^N

namespace ffsc::kdp {

enum class FieldVariant { EndpointField, SiteField };

enum class Phase { Ordered, HighTemperature, Boundary };

struct KdpParams {
  double epsilon = 1.0;
  FieldVariant variant = FieldVariant::EndpointField;

  /// ln 2 / epsilon.
  [[nodiscard]] double critical_beta() const;
};

struct KdpThermo {
  double t = 0.0;  // beta_c / beta - 1
  double f = 0.0;
  double m = 0.0;
  double s = 0.0;
  Phase phase = Phase::Ordered;
};

struct Discontinuities {
  double delta_m = 0.0;
  double delta_s = 0.0;
};

/// Free-energy gap below which the two phases are reported as coexisting.
inline constexpr double kBoundaryTolerance = 1e-12;

void validate(const KdpParams& params);

[[nodiscard]] double kdp_log_partition(int n, double beta, double h, const KdpParams& params);

/// N -> infinity limit. On the boundary m and s are the high-temperature side
/// values; in the ordered phase m = +1 for h >= 0 and -1 otherwise.
[[nodiscard]] KdpThermo kdp_free_energy(double beta, double h, const KdpParams& params);

/// Positive field h* on the phase boundary at reduced temperature t > 0.
/// SiteField is solved by bracketed root finding. Throws NoRootError for t <= 0.
[[nodiscard]] double kdp_phase_boundary(double t, const KdpParams& params);

/// Closed-form jumps of m and s across the boundary. SiteField values are the
/// small-t expansions 1 - t ln 2 and ln 2 (1 - (ln 2 / 2) t^2).
[[nodiscard]] Discontinuities kdp_discontinuities(double t, const KdpParams& params);

}  // namespace ffsc::kdp
