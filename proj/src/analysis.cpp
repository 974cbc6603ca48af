#include "ffsc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "ffsc/errors.hpp"
#include "ffsc/farey.hpp"

namespace ffsc::analysis {
namespace {

const double kLn2 = std::log(2.0);

struct Line {
  double intercept = 0.0;
  double slope = 0.0;
  double residual = 0.0;
};

// Weighted least squares y ~ intercept + slope * x.
Line fit_line(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd design(n, 2);
  design.col(0).setOnes();
  design.col(1) = x;
  const Eigen::VectorXd sw = w.cwiseSqrt();
  const Eigen::MatrixXd scaled = sw.asDiagonal() * design;
  const Eigen::VectorXd rhs = sw.cwiseProduct(y);
  const Eigen::Vector2d coef = scaled.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd r = y - design * coef;
  Line out;
  out.intercept = coef(0);
  out.slope = coef(1);
  out.residual = std::sqrt(w.dot(r.cwiseProduct(r)) / w.sum());
  return out;
}

void record(BoundsReport& report, const char* name, int n, double beta, double h, double margin,
            double scale) {
  ++report.checks;
  report.smallest_margin = std::min(report.smallest_margin, margin);
  if (margin < -kBoundTolerance * std::max(1.0, std::fabs(scale))) {
    report.violations.push_back({name, n, beta, h, margin});
  }
}

}  // namespace

BoundsReport verify_bounds(int n_max, std::span<const double> betas,
                           std::span<const double> fields, const EnumerationOptions& options) {
  if (n_max < 1) {
    throw DomainError("n_max must be >= 1");
  }
  BoundsReport report;
  report.smallest_margin = std::numeric_limits<double>::infinity();
  for (double beta : betas) {
    std::vector<double> zero_field(static_cast<std::size_t>(n_max) + 1);
    for (int n = 1; n <= n_max; ++n) {
      zero_field[static_cast<std::size_t>(n)] = log_partition({n, beta, 0.0}, options).log_z;
    }
    for (double h : fields) {
      const double ah = std::fabs(h);
      std::vector<double> lz(static_cast<std::size_t>(n_max) + 1);
      for (int n = 1; n <= n_max; ++n) {
        const auto idx = static_cast<std::size_t>(n);
        lz[idx] = h == 0.0 ? zero_field[idx] : log_partition({n, beta, h}, options).log_z;
        const double nn = static_cast<double>(n);
        if (h != 0.0) {
          const double lower = -beta * kLn2 + beta * ah * nn;
          record(report, "sandwich-lower", n, beta, h, lz[idx] - lower, lower);
          const double upper = zero_field[idx] + beta * ah * nn;
          record(report, "sandwich-upper", n, beta, h, upper - lz[idx], upper);
        } else {
          const double lower = kLn2 - beta * kLn2;
          record(report, "sandwich-lower", n, beta, h, lz[idx] - lower, lower);
        }
      }
      for (int n = 1; n < n_max; ++n) {
        const auto idx = static_cast<std::size_t>(n);
        const double log_ratio = lz[idx + 1] - lz[idx];
        const double lower = -beta * kLn2 - beta * ah;
        const double upper = kLn2 + beta * ah;
        const double scale = std::max(std::fabs(lz[idx]), std::fabs(lz[idx + 1]));
        record(report, "ratio-lower", n, beta, h, log_ratio - lower, scale);
        record(report, "ratio-upper", n, beta, h, upper - log_ratio, scale);
      }
    }
  }
  return report;
}

Extrapolation extrapolate_f(std::span<const std::pair<int, double>> sequence) {
  if (sequence.size() < 4) {
    throw DomainError("extrapolation needs at least four points");
  }
  for (std::size_t i = 1; i < sequence.size(); ++i) {
    if (sequence[i].first <= sequence[i - 1].first) {
      throw DomainError("extrapolation needs strictly increasing N (degenerate fit)");
    }
  }
  const auto n = static_cast<Eigen::Index>(sequence.size());
  Eigen::VectorXd x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i) = 1.0 / static_cast<double>(sequence[static_cast<std::size_t>(i)].first);
    y(i) = sequence[static_cast<std::size_t>(i)].second;
  }
  const Line line = fit_line(x, y, Eigen::VectorXd::Ones(n));
  return {line.intercept, line.slope, line.residual, static_cast<int>(n)};
}

FitResult fss_fit(std::span<const std::pair<int, double>> log_z_sequence) {
  if (log_z_sequence.size() < 3) {
    throw DomainError("finite-size fit needs at least three points");
  }
  FitResult out;
  const auto n = static_cast<Eigen::Index>(log_z_sequence.size());
  Eigen::VectorXd x(n), y(n), w(n);
  bool positive = false;
  bool negative = false;
  int max_n = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& [size, log_z] = log_z_sequence[static_cast<std::size_t>(i)];
    if (size < 2) {
      throw DomainError("finite-size fit needs N >= 2");
    }
    if (log_z == 0.0) {
      throw DomainError("ln Z_N = 0 cannot be fitted on a log scale");
    }
    (log_z > 0.0 ? positive : negative) = true;
    max_n = std::max(max_n, size);
    x(i) = std::log(std::log(static_cast<double>(size)));
    y(i) = std::log(std::fabs(log_z));
    w(i) = static_cast<double>(size);
  }
  if (positive && negative) {
    out.warnings.emplace_back("ln Z_N changes sign; fitted |ln Z_N|");
  }
  if (max_n < 24) {
    out.warnings.emplace_back("insufficient range: max N < 24");
  }
  const Line line = fit_line(x, y, w);
  out.exponent_p = -line.slope;
  out.amplitude = (negative && !positive ? -1.0 : 1.0) * std::exp(line.intercept);
  out.residual = line.residual;
  out.n_points = static_cast<int>(n);
  return out;
}

MomentResult farey_moments(int level, int order) {
  if (order < 1) {
    throw DomainError("moment order must be >= 1");
  }
  if (level < 0 || level > 30) {
    throw DomainError("moment level must be in [0, 30]");
  }
  __float128 sum = 0;
  for_each_adjacent_pair(static_cast<unsigned>(level),
                         [&sum, order](const Fraction& left, const Fraction& right, unsigned) {
                           const __float128 gap =
                               __float128{1} / static_cast<__float128>(checked_mul(left.den, right.den));
                           __float128 power = gap;
                           for (int k = 1; k < order; ++k) {
                             power *= gap;
                           }
                           sum += power;
                         });
  return {level, order, static_cast<double>(sum)};
}

std::vector<MomentScalingRow> moment_scaling_report(int n_max, std::span<const int> orders) {
  constexpr int kFirstLevel = 4;
  if (n_max < kFirstLevel + 2) {
    throw DomainError("moment scaling needs n_max >= 6");
  }
  const Eigen::Index count = n_max - kFirstLevel + 1;
  Eigen::VectorXd log_count(count), log_level(count), loglog_count(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const int level = kFirstLevel + static_cast<int>(i);
    log_count(i) = std::log(std::ldexp(1.0, level) + 1.0);
    log_level(i) = std::log(static_cast<double>(level));
    loglog_count(i) = std::log(log_count(i));
  }
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(count);

  std::vector<MomentScalingRow> rows;
  for (int m : orders) {
    if (m < 2 || m > 6) {
      throw DomainError("moment scaling orders must lie in 2..6");
    }
    Eigen::VectorXd log_sum(count);
    for (Eigen::Index i = 0; i < count; ++i) {
      log_sum(i) = std::log(farey_moments(kFirstLevel + static_cast<int>(i), m).sum);
    }
    const double delta = m == 2 ? 1.0 : 0.0;
    const Line vs_count = fit_line(log_count, log_sum, ones);
    const Line corrected = fit_line(log_count, log_sum - delta * loglog_count, ones);
    const Line vs_level = fit_line(log_level, log_sum, ones);
    MomentScalingRow row;
    row.order = m;
    row.power_vs_count = vs_count.slope;
    row.power_vs_count_log_corrected = corrected.slope;
    row.power_vs_level = vs_level.slope;
    row.residual_vs_count = vs_count.residual;
    row.residual_vs_level = vs_level.residual;
    row.n_points = static_cast<int>(count);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ffsc::analysis
