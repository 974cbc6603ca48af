#pragma once

// Mean-field expansion, marginal-field RG flow and the high-temperature
// singular free energy derived from it, together with the ordered/high-T
// phase boundary and the jumps of m and s across it.

namespace ffsc::rg {

/// Landau constants of f_MF = a + b t M^2 + u M^4 - g h M.
struct MeanFieldConstants {
  double a = -0.1;
  double b = 1.0;
  double u = 0.5;
  double g = 1.0;
};

/// Coefficients of
///   du/dl = -x u^2,  dt/dl = y_t t - z_t u t,  dh/dl = y_h h - z_h u h.
struct RGConstants {
  double x = 1.0;
  double y_t = 1.0;
  double y_h = 1.0;
  double z_t = 1.0;
  double z_h = 0.0;
  double t0 = 1.0;
  double h0 = 1.0;
  double d = 1.0;

  /// y_t = y_h = d, z_t = x, z_h = 0. Throws DomainError unless t0, h0 > 0.
  static RGConstants constrained(double d = 1.0, double x = 1.0, double t0 = 1.0,
                                 double h0 = 1.0);

  /// d / y_h + y_t / y_h: power of |h| in the field term, 2 under the constraints.
  [[nodiscard]] double field_exponent() const { return d / y_h + y_t / y_h; }

  [[nodiscard]] bool satisfies_constraints() const;
};

struct RGState {
  double t = 0.0;
  double h = 0.0;
  double u = 0.0;
  double ell = 0.0;
};

[[nodiscard]] double mean_field_f(double m, double t, double h, const MeanFieldConstants& c);

/// d f_MF / dM.
[[nodiscard]] double mean_field_gradient(double m, double t, double h,
                                         const MeanFieldConstants& c);

/// Global minimizer of f_MF in M: all real roots of 4uM^3 + 2btM - gh = 0
/// are found, Newton-polished, and the one with the lowest f_MF is returned.
/// Throws DomainError unless u > 0.
[[nodiscard]] double minimize_mean_field(double t, double h, const MeanFieldConstants& c);

/// Exact solution of the truncated flow from `state0` to state0.ell + ell.
/// Throws DomainError at or past the pole 1 + x u0 ell <= 0.
[[nodiscard]] RGState flow_closed_form(const RGState& state0, double ell, const RGConstants& rg);

/// Classical RK4 on the same system with a step no larger than `step`.
[[nodiscard]] RGState flow_integrate(const RGState& state0, double ell, double step,
                                     const RGConstants& rg);

struct MatchingScale {
  double ell0 = 0.0;           // bisection on the closed form
  double approximation = 0.0;  // large-ln(threshold / t) expansion
};

/// Smallest l with max(|t(l)|, |h(l)|) = threshold.
[[nodiscard]] MatchingScale matching_scale(const RGState& state0, double threshold,
                                           const RGConstants& rg);

/// Singular high-temperature free energy
///   |t/t0| [K]^{-1} a - (h^2 / t) [K] 3g^2/(16b),  K = (x/y_t) u ln(t0/t).
/// Throws DomainError unless t > 0 and K > 0.
[[nodiscard]] double singular_f_high(double t, double h, const MeanFieldConstants& mf,
                                     const RGConstants& rg);

/// chi = -d^2 f_s / dh^2 from the same expression.
[[nodiscard]] double susceptibility_high(double t, const MeanFieldConstants& mf,
                                         const RGConstants& rg);

/// m = -d f_s / dh = (h/t) [K] 3g^2/(8b).
[[nodiscard]] double magnetization_high(double t, double h, const MeanFieldConstants& mf,
                                        const RGConstants& rg);

/// -|h|.
[[nodiscard]] double ordered_f(double h);

/// Flow (t, h, mf.u) to the matching scale, evaluate the mean-field free
/// energy a - 3 (g h(l0))^2 / (16 b t(l0)) there and rescale by e^{-d l0}.
[[nodiscard]] double flow_matched_free_energy(double t, double h, const MeanFieldConstants& mf,
                                              const RGConstants& rg, double threshold = 1.0);

struct PhaseBoundary {
  double h_star = 0.0;       // physical root
  double h_unphysical = 0.0; // larger root, m > 1 there
  double asymptote = 0.0;    // k t / ln(t0 / t)
  bool degenerate = false;   // 3 a g^2 / (4 b t0) == -1, the roots coincide
};

/// Solves -h = singular_f_high(t, h) for h > 0 in closed form.
/// Throws NoRootError when 1 + 3ag^2/(4bt0) < 0, DomainError unless a < 0.
[[nodiscard]] PhaseBoundary phase_boundary_ffsc(double t, const MeanFieldConstants& mf,
                                                const RGConstants& rg);

struct FfscDiscontinuities {
  double delta_m = 0.0;                   // sqrt(1 + 3ag^2/(4bt0))
  double delta_m_from_magnetization = 0.0;  // 1 - m_high(h*)
  double delta_s = 0.0;
};

[[nodiscard]] FfscDiscontinuities discontinuities_ffsc(double t, const MeanFieldConstants& mf,
                                                       const RGConstants& rg);

}  // namespace ffsc::rg
