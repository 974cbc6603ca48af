#include "ffsc/rg_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "ffsc/errors.hpp"

namespace ffsc::rg {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// (z / x) ln(1 + x u0 l), continuous at x = 0.
double marginal_log(double z, double x, double u0, double ell) {
  if (x == 0.0) {
    return z * u0 * ell;
  }
  return z / x * std::log1p(x * u0 * ell);
}

struct Derivative {
  double du;
  double dt;
  double dh;
};

Derivative rhs(double t, double h, double u, const RGConstants& rg) {
  return {-rg.x * u * u, rg.y_t * t - rg.z_t * u * t, rg.y_h * h - rg.z_h * u * h};
}

double log_ratio(double t, const RGConstants& rg) {
  const double ratio = rg.t0 / t;
  if (!(t > 0.0) || !(ratio > 1.0)) {
    throw DomainError("high-temperature form needs 0 < t < t0");
  }
  return std::log(ratio);
}

// (x / y_t) u ln(t0 / t).
double marginal_factor(double t, const MeanFieldConstants& mf, const RGConstants& rg) {
  const double k = rg.x / rg.y_t * mf.u * log_ratio(t, rg);
  if (!(k > 0.0)) {
    throw DomainError("marginal factor (x/y_t) u ln(t0/t) must be positive");
  }
  return k;
}

// Roots of 4u M^3 + 2bt M - gh, polished by Newton.
std::vector<double> stationary_points(double t, double h, const MeanFieldConstants& c) {
  const double a3 = 4.0 * c.u;
  const double a1 = 2.0 * c.b * t;
  const double a0 = -c.g * h;
  // Depressed cubic M^3 + p M + q = 0.
  const double p = a1 / a3;
  const double q = a0 / a3;
  std::vector<double> roots;

  if (p >= 0.0) {
    // Monotone: exactly one real root, bracketed by |M| <= max(|q|/p, |q|^{1/3}).
    if (q == 0.0) {
      roots.push_back(0.0);
    } else {
      double bound = std::cbrt(std::fabs(q));
      if (p > 0.0) {
        bound = std::max(bound, std::fabs(q) / p);
      }
      bound *= 1.5;
      const auto cubic = [p, q](double m) { return (m * m + p) * m + q; };
      const double lo = q > 0.0 ? -bound : 0.0;
      const double hi = q > 0.0 ? 0.0 : bound;
      std::uintmax_t iters = 200;
      const auto tol = [](double x, double y) { return std::fabs(y - x) <= 4 * kEps * std::fabs(x); };
      const auto r = boost::math::tools::toms748_solve(cubic, lo, hi, cubic(lo), cubic(hi), tol, iters);
      roots.push_back(0.5 * (r.first + r.second));
    }
  } else {
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    if (disc > 0.0) {
      // One real root; p < 0 so w and -p/(3w) share a sign and nothing cancels.
      const double w = std::cbrt(-q / 2.0 + std::copysign(std::sqrt(disc), -q / 2.0));
      roots.push_back(w - p / (3.0 * w));
    } else {
      const double r = 2.0 * std::sqrt(-p / 3.0);
      const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
      const double phi = std::acos(arg) / 3.0;
      for (int k = 0; k < 3; ++k) {
        roots.push_back(r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
      }
    }
  }

  for (double& m : roots) {
    for (int it = 0; it < 4; ++it) {
      const double fm = (m * m + p) * m + q;
      const double dfm = 3.0 * m * m + p;
      if (dfm == 0.0) {
        break;
      }
      const double next = m - fm / dfm;
      if (!std::isfinite(next) || std::fabs((next * next + p) * next + q) >= std::fabs(fm)) {
        break;
      }
      m = next;
    }
  }
  return roots;
}

}  // namespace

RGConstants RGConstants::constrained(double d, double x, double t0, double h0) {
  if (!(t0 > 0.0) || !(h0 > 0.0)) {
    throw DomainError("t0 and h0 must be positive");
  }
  if (!(d > 0.0)) {
    throw DomainError("dimensionality must be positive");
  }
  RGConstants rg{x, d, d, x, 0.0, t0, h0, d};
  if (rg.field_exponent() != 2.0) {
    throw std::logic_error("field exponent must be 2 under the eigenvalue constraints");
  }
  return rg;
}

bool RGConstants::satisfies_constraints() const {
  return y_t == d && y_h == d && z_t == x && z_h == 0.0 && t0 > 0.0 && h0 > 0.0;
}

double mean_field_f(double m, double t, double h, const MeanFieldConstants& c) {
  const double m2 = m * m;
  return c.a + c.b * t * m2 + c.u * m2 * m2 - c.g * h * m;
}

double mean_field_gradient(double m, double t, double h, const MeanFieldConstants& c) {
  return 2.0 * c.b * t * m + 4.0 * c.u * m * m * m - c.g * h;
}

double minimize_mean_field(double t, double h, const MeanFieldConstants& c) {
  if (!(c.u > 0.0)) {
    throw DomainError("mean-field stability needs u > 0");
  }
  const auto roots = stationary_points(t, h, c);
  double best = roots.front();
  double best_f = mean_field_f(best, t, h, c);
  for (double m : roots) {
    const double fm = mean_field_f(m, t, h, c);
    if (fm < best_f) {
      best = m;
      best_f = fm;
    }
  }
  return best;
}

RGState flow_closed_form(const RGState& state0, double ell, const RGConstants& rg) {
  const double denom = 1.0 + rg.x * state0.u * ell;
  if (!(denom > 0.0)) {
    throw DomainError("flow reaches the pole 1 + x u0 l = 0");
  }
  RGState out;
  out.ell = state0.ell + ell;
  out.u = state0.u / denom;
  out.t = state0.t * std::exp(rg.y_t * ell - marginal_log(rg.z_t, rg.x, state0.u, ell));
  out.h = state0.h * std::exp(rg.y_h * ell - marginal_log(rg.z_h, rg.x, state0.u, ell));
  return out;
}

RGState flow_integrate(const RGState& state0, double ell, double step, const RGConstants& rg) {
  if (!(step > 0.0)) {
    throw DomainError("integration step must be positive");
  }
  if (!(1.0 + rg.x * state0.u * ell > 0.0)) {
    throw DomainError("flow reaches the pole 1 + x u0 l = 0");
  }
  const auto steps = static_cast<long>(std::ceil(std::fabs(ell) / step));
  if (steps == 0) {
    return state0;
  }
  const double dl = ell / static_cast<double>(steps);
  double t = state0.t;
  double h = state0.h;
  double u = state0.u;
  for (long i = 0; i < steps; ++i) {
    const auto k1 = rhs(t, h, u, rg);
    const auto k2 = rhs(t + 0.5 * dl * k1.dt, h + 0.5 * dl * k1.dh, u + 0.5 * dl * k1.du, rg);
    const auto k3 = rhs(t + 0.5 * dl * k2.dt, h + 0.5 * dl * k2.dh, u + 0.5 * dl * k2.du, rg);
    const auto k4 = rhs(t + dl * k3.dt, h + dl * k3.dh, u + dl * k3.du, rg);
    t += dl / 6.0 * (k1.dt + 2.0 * k2.dt + 2.0 * k3.dt + k4.dt);
    h += dl / 6.0 * (k1.dh + 2.0 * k2.dh + 2.0 * k3.dh + k4.dh);
    u += dl / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
  }
  return {t, h, u, state0.ell + ell};
}

MatchingScale matching_scale(const RGState& state0, double threshold, const RGConstants& rg) {
  const double size0 = std::max(std::fabs(state0.t), std::fabs(state0.h));
  if (!(threshold > 0.0) || !(size0 > 0.0) || !(size0 < threshold)) {
    throw DomainError("matching scale needs 0 < max(|t|, |h|) < threshold");
  }
  // log max(|t|,|h|) is convex in l, so the crossing is unique.
  const auto excess = [&](double ell) {
    const auto s = flow_closed_form(state0, ell, rg);
    return std::max(std::fabs(s.t), std::fabs(s.h)) - threshold;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (excess(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) {
      throw DomainError("flow never reaches the matching threshold");
    }
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  MatchingScale out;
  out.ell0 = std::fabs(excess(lo)) <= std::fabs(excess(hi)) ? lo : hi;

  const bool by_t = std::fabs(state0.t) > 0.0;
  const double y = by_t ? rg.y_t : rg.y_h;
  const double z = by_t ? rg.z_t : rg.z_h;
  const double big_log = std::log(threshold / (by_t ? std::fabs(state0.t) : std::fabs(state0.h)));
  out.approximation = big_log / y;
  if (rg.x != 0.0) {
    out.approximation += z / (rg.x * y) * std::log1p(rg.x / y * state0.u * big_log);
  } else {
    out.approximation += z / y * state0.u * big_log / y;
  }
  return out;
}

double singular_f_high(double t, double h, const MeanFieldConstants& mf, const RGConstants& rg) {
  const double k = marginal_factor(t, mf, rg);
  return std::fabs(t / rg.t0) / k * mf.a - h * h / t * k * (3.0 * mf.g * mf.g / (16.0 * mf.b));
}

double susceptibility_high(double t, const MeanFieldConstants& mf, const RGConstants& rg) {
  const double k = marginal_factor(t, mf, rg);
  return k / t * (3.0 * mf.g * mf.g / (8.0 * mf.b));
}

double magnetization_high(double t, double h, const MeanFieldConstants& mf,
                          const RGConstants& rg) {
  const double k = marginal_factor(t, mf, rg);
  return h / t * k * (3.0 * mf.g * mf.g / (8.0 * mf.b));
}

double ordered_f(double h) { return h == 0.0 ? 0.0 : -std::fabs(h); }

double flow_matched_free_energy(double t, double h, const MeanFieldConstants& mf,
                                const RGConstants& rg, double threshold) {
  const RGState start{t, h, mf.u, 0.0};
  const auto scale = matching_scale(start, threshold, rg);
  const auto s = flow_closed_form(start, scale.ell0, rg);
  const double gh = mf.g * s.h;
  const double at_scale = mf.a - 3.0 * gh * gh / (16.0 * mf.b * s.t);
  return std::exp(-rg.d * scale.ell0) * at_scale;
}

namespace {

struct Radicand {
  double q;                // 3 a g^2 / (4 b t0)
  double root;             // sqrt(1 + q)
  double one_minus_root;   // 1 - sqrt(1 + q), computed without cancellation
  bool degenerate;
};

Radicand boundary_radicand(const MeanFieldConstants& mf, const RGConstants& rg) {
  if (!(mf.a < 0.0)) {
    throw DomainError("phase boundary needs a < 0");
  }
  if (!(mf.b > 0.0) || !(rg.t0 > 0.0)) {
    throw DomainError("phase boundary needs b > 0 and t0 > 0");
  }
  Radicand r{};
  r.q = 3.0 * mf.a * mf.g * mf.g / (4.0 * mf.b * rg.t0);
  double disc = 1.0 + r.q;
  // Within a few ulps of zero the two roots are taken to coincide.
  if (std::fabs(disc) <= 8.0 * kEps * std::max(1.0, std::fabs(r.q))) {
    disc = 0.0;
    r.degenerate = true;
  }
  if (disc < 0.0) {
    throw NoRootError("continuity equation has no real root (1 + 3ag^2/(4bt0) < 0)");
  }
  r.root = std::sqrt(disc);
  r.one_minus_root = r.degenerate ? 1.0 : -r.q / (1.0 + r.root);
  return r;
}

}  // namespace

PhaseBoundary phase_boundary_ffsc(double t, const MeanFieldConstants& mf, const RGConstants& rg) {
  const auto rad = boundary_radicand(mf, rg);
  const double k = marginal_factor(t, mf, rg);
  // B h^2 - h - A = 0 with A = |t/t0| a / K, B = (K / t) 3g^2 / (16 b); 4AB = q.
  const double quad = k / t * (3.0 * mf.g * mf.g / (16.0 * mf.b));
  PhaseBoundary out;
  out.degenerate = rad.degenerate;
  out.h_star = rad.one_minus_root / (2.0 * quad);
  out.h_unphysical = (1.0 + rad.root) / (2.0 * quad);
  const double amplitude = 8.0 * mf.b * rg.y_t / (3.0 * rg.x * mf.u * mf.g * mf.g);
  out.asymptote = amplitude * rad.one_minus_root * t / log_ratio(t, rg);
  return out;
}

FfscDiscontinuities discontinuities_ffsc(double t, const MeanFieldConstants& mf,
                                         const RGConstants& rg) {
  const auto rad = boundary_radicand(mf, rg);
  const auto boundary = phase_boundary_ffsc(t, mf, rg);
  const double k = marginal_factor(t, mf, rg);
  FfscDiscontinuities out;
  out.delta_m = rad.root;
  out.delta_m_from_magnetization = 1.0 - magnetization_high(t, boundary.h_star, mf, rg);
  out.delta_s = -2.0 / k *
                (mf.a / rg.t0 + 4.0 * mf.b / (3.0 * mf.g * mf.g) * rad.one_minus_root);
  return out;
}

}  // namespace ffsc::rg
