#include "ffsc/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "ffsc/analysis.hpp"
#include "ffsc/errors.hpp"
#include "ffsc/kdp.hpp"
#include "ffsc/rg_flow.hpp"
#include "ffsc/spin_chain.hpp"
#include "ffsc/table.hpp"
#include "ffsc/verification.hpp"

namespace ffsc::cli {
namespace {

struct BadArguments : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// "min:max:step" -> min, min + step, ... <= max.
std::vector<double> parse_range(const std::string& text, const char* flag) {
  std::vector<double> parts;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw BadArguments(std::string(flag) + ": expected min:max:step, got '" + text + "'");
    }
  }
  if (parts.size() != 3) {
    throw BadArguments(std::string(flag) + ": expected min:max:step, got '" + text + "'");
  }
  const double lo = parts[0], hi = parts[1], step = parts[2];
  if (!(step > 0.0) || !(lo <= hi)) {
    throw BadArguments(std::string(flag) + ": need step > 0 and min <= max");
  }
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    out.push_back(lo + static_cast<double>(i) * step);
  }
  return out;
}

std::vector<double> scan_values(CLI::Option* single, double value, CLI::Option* range,
                                const std::string& range_text, const char* name) {
  if (single->count() > 0 && range->count() > 0) {
    throw BadArguments(std::string("give either --") + name + " or --" + name + "-range");
  }
  if (range->count() > 0) {
    return parse_range(range_text, name);
  }
  if (single->count() > 0) {
    return {value};
  }
  throw BadArguments(std::string("missing --") + name + " or --" + name + "-range");
}

Cell optional_cell(const std::optional<double>& v) {
  if (v) {
    return *v;
  }
  return std::monostate{};
}

struct Settings {
  std::string format = "csv";
  CLI::Option* format_option = nullptr;
  std::string output;
  unsigned threads = 0;
  int cap = kDefaultEnumerationCap;
  CLI::Option* cap_option = nullptr;

  rg::MeanFieldConstants mf;
  double x = 1.0, t0 = 1.0, h0 = 1.0, d = 1.0;
  double epsilon = 1.0;

  [[nodiscard]] EnumerationOptions enumeration() const { return {threads, cap}; }

  /// JSON unless --format was given explicitly.
  [[nodiscard]] Format result_format() const {
    if (format_option->count() == 0) {
      return Format::Json;
    }
    return format == "json" ? Format::Json : Format::Csv;
  }
  [[nodiscard]] Format table_format() const { return format == "json" ? Format::Json : Format::Csv; }
};

void resolve_cap(Settings& s) {
  if (s.cap_option->count() > 0) {
    return;
  }
  if (const char* env = std::getenv(kCapEnvironmentVariable); env != nullptr && *env != '\0') {
    try {
      s.cap = std::stoi(env);
    } catch (const std::exception&) {
      throw BadArguments(std::string(kCapEnvironmentVariable) + " must be an integer");
    }
  }
}

Table thermo_table(int n, const std::vector<double>& betas, const std::vector<double>& fields,
                   const EnumerationOptions& options) {
  Table table{{"N", "beta", "t", "h", "f", "u", "m", "s", "chi"}, {}};
  for (double beta : betas) {
    for (double h : fields) {
      const auto tp = thermo_point({n, beta, h}, options);
      const double t = kCriticalBeta / beta - 1.0;
      table.add_row({std::int64_t{n}, beta, t, h, optional_cell(tp.f), tp.u, tp.m, tp.s, tp.chi});
    }
  }
  return table;
}

Table phase_diagram_table(const std::string& model, const std::vector<double>& ts,
                          const Settings& s) {
  Table table{{"model", "t", "h_star", "h_asymptote", "delta_m", "delta_s", "status"}, {}};
  const auto rg = rg::RGConstants::constrained(s.d, s.x, s.t0, s.h0);
  for (double t : ts) {
    if (!(t > 0.0)) {
      throw BadArguments("phase-diagram needs t > 0");
    }
    if (model == "ffsc-rg") {
      try {
        const auto boundary = rg::phase_boundary_ffsc(t, s.mf, rg);
        const auto jumps = rg::discontinuities_ffsc(t, s.mf, rg);
        table.add_row({model, t, boundary.h_star, boundary.asymptote, jumps.delta_m, jumps.delta_s,
                       std::string(boundary.degenerate ? "degenerate" : "ok")});
      } catch (const NoRootError&) {
        table.add_row({model, t, std::monostate{}, std::monostate{}, std::monostate{},
                       std::monostate{}, std::string("no-real-root")});
      }
      continue;
    }
    const kdp::KdpParams params{s.epsilon, model == "kdp-site" ? kdp::FieldVariant::SiteField
                                                               : kdp::FieldVariant::EndpointField};
    const double series = params.variant == kdp::FieldVariant::SiteField
                              ? s.epsilon * t + 0.5 * s.epsilon * std::log(2.0) * t * t
                              : s.epsilon * t;
    const auto jumps = kdp::kdp_discontinuities(t, params);
    table.add_row({model, t, kdp::kdp_phase_boundary(t, params), series, jumps.delta_m,
                   jumps.delta_s, std::string("ok")});
  }
  return table;
}

Table fit_table(const analysis::FitResult& fit, int n_min, int n_max) {
  std::string warnings;
  for (const auto& w : fit.warnings) {
    warnings += (warnings.empty() ? "" : "; ") + w;
  }
  Table table{{"n_min", "n_max", "exponent_p", "amplitude", "residual", "n_points", "warnings"}, {}};
  table.add_row({std::int64_t{n_min}, std::int64_t{n_max}, fit.exponent_p, fit.amplitude,
                 fit.residual, std::int64_t{fit.n_points}, warnings});
  return table;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact thermodynamics of the Farey fraction spin chain and comparison models",
               args.empty() ? "ffsc" : args.front()};
  app.require_subcommand(1);
  // -h is taken by the field option.
  app.set_help_flag("--help", "print this help message and exit");
  app.fallthrough();

  Settings s;
  s.format_option = app.add_option("--format", s.format, "csv or json (JSON lines)")
                        ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output,-o", s.output, "write the table to this file");
  app.add_option("--threads", s.threads, "worker threads (0 = all cores)");
  s.cap_option = app.add_option("--cap", s.cap, "largest enumerable N")->check(CLI::PositiveNumber);

  std::function<int(std::ostream&)> action;

  // thermo
  auto* thermo = app.add_subcommand("thermo", "finite-N f, u, m, s, chi over a (beta, h) scan");
  int n = 0;
  double beta = 0.0, h = 0.0;
  std::string beta_range, h_range;
  thermo->add_option("--n", n, "chain length")->required()->check(CLI::PositiveNumber);
  auto* beta_opt = thermo->add_option("--beta", beta);
  auto* beta_range_opt = thermo->add_option("--beta-range", beta_range, "min:max:step");
  auto* h_opt = thermo->add_option("--h", h);
  auto* h_range_opt = thermo->add_option("--h-range", h_range, "min:max:step");
  thermo->callback([&]() {
    action = [&](std::ostream& os) {
      const auto betas = scan_values(beta_opt, beta, beta_range_opt, beta_range, "beta");
      const auto fields = scan_values(h_opt, h, h_range_opt, h_range, "h");
      write_table(thermo_table(n, betas, fields, s.enumeration()), s.table_format(), os);
      return kSuccess;
    };
  });

  // phase-diagram
  auto* phase = app.add_subcommand("phase-diagram", "boundary h*(t) with jumps of m and s");
  std::string model = "ffsc-rg";
  double t_single = 0.0;
  std::string t_range;
  phase->add_option("--model", model)->check(CLI::IsMember({"ffsc-rg", "kdp-endpoint", "kdp-site"}));
  auto* t_opt = phase->add_option("--t", t_single);
  auto* t_range_opt = phase->add_option("--t-range", t_range, "min:max:step");
  phase->add_option("--epsilon", s.epsilon, "KDP bond energy");
  phase->add_option("--a", s.mf.a);
  phase->add_option("--b", s.mf.b);
  phase->add_option("--u", s.mf.u);
  phase->add_option("--g", s.mf.g);
  phase->add_option("--x", s.x);
  phase->add_option("--t0", s.t0);
  phase->add_option("--h0", s.h0);
  phase->add_option("--d", s.d);
  phase->callback([&]() {
    action = [&](std::ostream& os) {
      const auto ts = scan_values(t_opt, t_single, t_range_opt, t_range, "t");
      write_table(phase_diagram_table(model, ts, s), s.table_format(), os);
      return kSuccess;
    };
  });

  // verify
  auto* verify = app.add_subcommand("verify", "run a property suite; exit 1 on any violation");
  std::string suite;
  std::vector<std::string> choices = analysis::suite_names();
  choices.emplace_back("all");
  verify->add_option("suite", suite)->required()->check(CLI::IsMember(choices));
  verify->callback([&]() {
    action = [&](std::ostream& os) {
      std::vector<std::string> names = suite == "all" ? analysis::suite_names()
                                                      : std::vector<std::string>{suite};
      bool ok = true;
      for (const auto& name : names) {
        const auto report = analysis::run_suite(name, s.enumeration());
        for (const auto& check : report.checks) {
          os << (check.passed ? "PASS " : "FAIL ") << report.suite << '/' << check.name << ' '
             << check.detail << '\n';
        }
        ok = ok && report.passed();
      }
      os << (ok ? "PASS" : "FAIL") << '\n';
      return ok ? kSuccess : kVerificationFailed;
    };
  });

  // fss
  auto* fss = app.add_subcommand("fss", "fit ln Z_N ~ (ln N)^-p at beta = 2, h = 0");
  int fss_min = 8, fss_max = 24;
  fss->add_option("--n-min", fss_min)->check(CLI::Range(2, 62));
  fss->add_option("--n-max", fss_max)->check(CLI::Range(2, 62));
  fss->callback([&]() {
    action = [&](std::ostream& os) {
      if (fss_max - fss_min < 2) {
        throw BadArguments("fss needs at least three chain lengths");
      }
      std::vector<std::pair<int, double>> seq;
      for (int size = fss_min; size <= fss_max; ++size) {
        seq.emplace_back(size, log_partition({size, kCriticalBeta, 0.0}, s.enumeration()).log_z);
      }
      write_table(fit_table(analysis::fss_fit(seq), fss_min, fss_max), s.result_format(), os);
      return kSuccess;
    };
  });

  // moments
  auto* moments = app.add_subcommand("moments", "moments of neighbouring Farey differences");
  int order = 2, level = 10, report_max = 20;
  bool report = false;
  moments->add_option("--m", order, "moment order")->check(CLI::PositiveNumber);
  moments->add_option("--level", level, "Farey level")->check(CLI::Range(0, 30));
  moments->add_flag("--report", report, "diagnostic scaling fits for orders 2..6");
  moments->add_option("--n-max", report_max, "largest level in the scaling report")
      ->check(CLI::Range(6, 26));
  moments->callback([&]() {
    action = [&](std::ostream& os) {
      if (report) {
        const std::vector<int> orders{2, 3, 4, 5, 6};
        Table table{{"order", "power_vs_count", "power_vs_count_log_corrected", "power_vs_level",
                     "residual_vs_count", "residual_vs_level", "n_points"},
                    {}};
        for (const auto& row : analysis::moment_scaling_report(report_max, orders)) {
          table.add_row({std::int64_t{row.order}, row.power_vs_count,
                         row.power_vs_count_log_corrected, row.power_vs_level,
                         row.residual_vs_count, row.residual_vs_level,
                         std::int64_t{row.n_points}});
        }
        write_table(table, s.result_format(), os);
        return kSuccess;
      }
      const auto result = analysis::farey_moments(level, order);
      Table table{{"level", "order", "sum"}, {}};
      table.add_row({std::int64_t{result.level}, std::int64_t{result.order}, result.sum});
      write_table(table, s.result_format(), os);
      return kSuccess;
    };
  });

  // extrapolate
  auto* extrapolate = app.add_subcommand("extrapolate", "fit f_N = f_inf + c1/N");
  double ex_beta = 3.0, ex_h = 0.0;
  int ex_min = 8, ex_max = 24;
  extrapolate->add_option("--beta", ex_beta)->check(CLI::PositiveNumber);
  extrapolate->add_option("--h", ex_h);
  extrapolate->add_option("--n-min", ex_min)->check(CLI::Range(1, 62));
  extrapolate->add_option("--n-max", ex_max)->check(CLI::Range(1, 62));
  extrapolate->callback([&]() {
    action = [&](std::ostream& os) {
      const auto all = free_energy_sequence(ex_max, ex_beta, ex_h, s.enumeration());
      std::vector<std::pair<int, double>> seq;
      for (const auto& point : all) {
        if (point.first >= ex_min) {
          seq.push_back(point);
        }
      }
      const auto fit = analysis::extrapolate_f(seq);
      Table table{{"beta", "h", "n_min", "n_max", "f_infinity", "c1", "residual", "n_points"}, {}};
      table.add_row({ex_beta, ex_h, std::int64_t{ex_min}, std::int64_t{ex_max}, fit.f_infinity,
                     fit.c1, fit.residual, std::int64_t{fit.n_points}});
      write_table(table, s.result_format(), os);
      return kSuccess;
    };
  });

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  if (argv.empty()) {
    argv.push_back("ffsc");
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kBadArguments;
  }

  try {
    resolve_cap(s);
    if (!s.output.empty()) {
      std::ofstream file(s.output, std::ios::binary);
      if (!file) {
        err << "error: cannot open " << s.output << " for writing\n";
        return kBadArguments;
      }
      return action(file);
    }
    return action(out);
  } catch (const CapExceededError& e) {
    err << "error: " << e.what() << '\n';
    return kResourceCapExceeded;
  } catch (const OverflowError& e) {
    err << "error: " << e.what() << '\n';
    return kResourceCapExceeded;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kBadArguments;
  }
}

}  // namespace ffsc::cli
