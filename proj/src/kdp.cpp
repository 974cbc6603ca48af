#include "ffsc/kdp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "ffsc/errors.hpp"

namespace ffsc::kdp {
namespace {

const double kLn2 = std::log(2.0);

double log_sum_exp(std::array<double, 3> terms) {
  const double top = *std::max_element(terms.begin(), terms.end());
  double acc = 0.0;
  for (double x : terms) {
    acc += std::exp(x - top);
  }
  return top + std::log(acc);
}

// ln(2 cosh x) without overflow.
double log_two_cosh(double x) {
  const double ax = std::fabs(x);
  return ax + std::log1p(std::exp(-2.0 * ax));
}

double high_temperature_f(double beta, double h, const KdpParams& p) {
  if (p.variant == FieldVariant::EndpointField) {
    return p.epsilon - kLn2 / beta;
  }
  return p.epsilon - log_two_cosh(beta * h) / beta;
}

void require_positive_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be positive and finite");
  }
}

}  // namespace

double KdpParams::critical_beta() const { return kLn2 / epsilon; }

void validate(const KdpParams& params) {
  if (!(params.epsilon > 0.0) || !std::isfinite(params.epsilon)) {
    throw DomainError("epsilon must be positive");
  }
}

double kdp_log_partition(int n, double beta, double h, const KdpParams& params) {
  validate(params);
  require_positive_beta(beta);
  if (n < 1) {
    throw DomainError("N must be >= 1");
  }
  const double nn = static_cast<double>(n);
  const double bnh = beta * nn * h;
  const double excited = params.variant == FieldVariant::EndpointField
                             ? nn * (kLn2 - beta * params.epsilon)
                             : nn * (log_two_cosh(beta * h) - beta * params.epsilon);
  return log_sum_exp({bnh, -bnh, excited});
}

KdpThermo kdp_free_energy(double beta, double h, const KdpParams& params) {
  validate(params);
  require_positive_beta(beta);
  KdpThermo out;
  out.t = params.critical_beta() / beta - 1.0;
  const double f_ordered = h == 0.0 ? 0.0 : -std::fabs(h);
  const double f_high = high_temperature_f(beta, h, params);

  if (std::fabs(f_ordered - f_high) <= kBoundaryTolerance) {
    out.phase = Phase::Boundary;
  } else {
    out.phase = f_ordered < f_high ? Phase::Ordered : Phase::HighTemperature;
  }

  if (out.phase == Phase::Ordered) {
    out.f = f_ordered;
    out.m = h >= 0.0 ? 1.0 : -1.0;
    out.s = 0.0;
    return out;
  }
  out.f = std::min(f_ordered, f_high);
  if (params.variant == FieldVariant::EndpointField) {
    out.m = 0.0;
    out.s = kLn2;
  } else {
    const double x = beta * h;
    out.m = std::tanh(x);
    out.s = log_two_cosh(x) - x * std::tanh(x);
  }
  return out;
}

double kdp_phase_boundary(double t, const KdpParams& params) {
  validate(params);
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw NoRootError("phase boundary needs t > 0 (got t = " + std::to_string(t) + ")");
  }
  const double eps = params.epsilon;
  if (params.variant == FieldVariant::EndpointField) {
    return eps * t;
  }
  const double beta = params.critical_beta() / (1.0 + t);
  // g(h) = f_ordered - f_high: positive at h = 0 (eps t), tends to -eps.
  const auto gap = [&](double h) { return -h - eps + log_two_cosh(beta * h) / beta; };
  double lo = 0.0;
  double hi = 2.0 * eps * (t + 1.0);
  while (gap(hi) > 0.0) {
    hi *= 2.0;
  }
  std::uintmax_t max_iter = 200;
  const auto tol = [](double a, double b) { return std::fabs(b - a) <= 1e-13; };
  const auto bracket = boost::math::tools::toms748_solve(gap, lo, hi, gap(lo), gap(hi), tol, max_iter);
  return 0.5 * (bracket.first + bracket.second);
}

Discontinuities kdp_discontinuities(double t, const KdpParams& params) {
  validate(params);
  if (!(t >= 0.0)) {
    throw DomainError("discontinuities need t >= 0");
  }
  if (params.variant == FieldVariant::EndpointField) {
    return {1.0, kLn2};
  }
  return {1.0 - t * kLn2, kLn2 * (1.0 - 0.5 * kLn2 * t * t)};
}

}  // namespace ffsc::kdp
