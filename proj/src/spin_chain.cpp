#include "ffsc/spin_chain.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "ffsc/compensated_sum.hpp"
#include "ffsc/errors.hpp"

namespace ffsc {
namespace {

const double kLn2 = std::log(2.0);

// Prefix length used to cut each half into independent subtrees. Depends on
// N only, never on the worker count.
int prefix_bits(int n) { return std::min(n - 1, 10); }

template <bool BFirst, typename Acc>
void descend(std::uint64_t m1, std::uint64_t m2, std::uint64_t m3, std::uint64_t m4, int depth,
             int n, unsigned b_count, std::uint64_t mask, Acc& acc) {
  if (depth == n) {
    acc.leaf(m1 + m4, b_count, mask);
    return;
  }
  if constexpr (BFirst) {
    descend<BFirst>(m1, m1 + m2, m3, m3 + m4, depth + 1, n, b_count + 1,
                    mask | (std::uint64_t{1} << depth), acc);
    descend<BFirst>(m1 + m2, m2, m3 + m4, m4, depth + 1, n, b_count, mask, acc);
  } else {
    descend<BFirst>(m1 + m2, m2, m3 + m4, m4, depth + 1, n, b_count, mask, acc);
    descend<BFirst>(m1, m1 + m2, m3, m3 + m4, depth + 1, n, b_count + 1,
                    mask | (std::uint64_t{1} << depth), acc);
  }
}

// Walks one prefix subtree. Task `index` of the A half fixes sites 1..k to the
// bits of `index` (site 1 most significant); the matching task of the B half
// fixes the complement and visits children B-first, so its leaves are the
// complements of the A task's leaves in the same order.
template <typename Acc>
void run_task(int n, int k, std::uint64_t index, bool b_half, Acc& acc) {
  std::uint64_t m1 = 1, m2 = 0, m3 = 0, m4 = 1;
  std::uint64_t mask = 0;
  unsigned b_count = 0;
  for (int site = 0; site <= k; ++site) {
    bool bit = site == 0 ? false : ((index >> (k - site)) & 1U) != 0;
    if (b_half) {
      bit = !bit;
    }
    if (bit) {
      m2 = m1 + m2;
      m4 = m3 + m4;
      mask |= std::uint64_t{1} << site;
      ++b_count;
    } else {
      m1 = m1 + m2;
      m3 = m3 + m4;
    }
  }
  if (b_half) {
    descend<true>(m1, m2, m3, m4, k + 1, n, b_count, mask, acc);
  } else {
    descend<false>(m1, m2, m3, m4, k + 1, n, b_count, mask, acc);
  }
}

template <typename Acc>
struct Halves {
  Acc a;
  Acc b;
};

void check_enumerable(int n, const EnumerationOptions& options) {
  if (n < 1) {
    throw DomainError("chain length must be at least 1");
  }
  const int cap = std::min(options.cap, kMaxEnumerationLength);
  if (n > cap) {
    throw CapExceededError("N = " + std::to_string(n) + " exceeds the enumeration cap of " +
                           std::to_string(cap));
  }
}

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) {
    return requested;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

template <typename Acc, typename MakeAcc>
Halves<Acc> enumerate_halves(int n, const EnumerationOptions& options, const MakeAcc& make) {
  check_enumerable(n, options);
  const int k = prefix_bits(n);
  const std::size_t per_half = std::size_t{1} << k;
  const std::size_t tasks = 2 * per_half;

  std::vector<Acc> parts;
  parts.reserve(tasks);
  for (std::size_t t = 0; t < tasks; ++t) {
    parts.push_back(make());
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    try {
      for (std::size_t t = next.fetch_add(1); t < tasks; t = next.fetch_add(1)) {
        const bool b_half = t >= per_half;
        run_task(n, k, b_half ? t - per_half : t, b_half, parts[t]);
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_mutex);
      failure = std::current_exception();
    }
  };

  const auto workers = static_cast<std::size_t>(
      std::min<std::size_t>(resolve_threads(options.threads), tasks));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  Halves<Acc> out{make(), make()};
  for (std::size_t i = 0; i < per_half; ++i) {
    out.a.merge(parts[i]);
    out.b.merge(parts[per_half + i]);
  }
  return out;
}

// E - E_min with E_min = ln 2 - |h| N. Non-negative in floating point: the
// log is monotone and h*(2b-N) >= -(|h|*N) under monotone rounding.
inline double excess_energy(double log_trace, double h, unsigned b_count, int n) {
  const double field = h * static_cast<double>(2 * static_cast<int>(b_count) - n);
  return (log_trace - kLn2) + (field + std::fabs(h) * static_cast<double>(n));
}

struct ThermoAccumulator {
  int n = 1;
  double beta = 0.0;
  double h = 0.0;
  CompensatedSum total;
  CompensatedSum excited;
  CompensatedSum energy;  // sum of w * (E - E_min)
  std::vector<CompensatedSum> by_b_count;

  ThermoAccumulator(int n_, double beta_, double h_)
      : n(n_), beta(beta_), h(h_), by_b_count(static_cast<std::size_t>(n_) + 1) {}

  void leaf(std::uint64_t tr, unsigned b_count, std::uint64_t /*mask*/) {
    const double de = excess_energy(std::log(static_cast<double>(tr)), h, b_count, n);
    const double w = std::exp(-beta * de);
    total.add(w);
    energy.add(w * de);
    by_b_count[b_count].add(w);
    if (b_count != 0 && b_count != static_cast<unsigned>(n)) {
      excited.add(w);
    }
  }

  void merge(const ThermoAccumulator& other) {
    total.merge(other.total);
    excited.merge(other.excited);
    energy.merge(other.energy);
    for (std::size_t i = 0; i < by_b_count.size(); ++i) {
      by_b_count[i].merge(other.by_b_count[i]);
    }
  }
};

double safe_log(double value) {
  return value > 0.0 ? std::log(value) : -std::numeric_limits<double>::infinity();
}

double log_weight_shift(const EnsembleParams& p) {
  // -beta * E_min
  return -p.beta * (kLn2 - std::fabs(p.h) * static_cast<double>(p.n));
}

Halves<ThermoAccumulator> thermo_halves(const EnsembleParams& params,
                                        const EnumerationOptions& options) {
  validate(params);
  return enumerate_halves<ThermoAccumulator>(params.n, options, [&params]() {
    return ThermoAccumulator(params.n, params.beta, params.h);
  });
}

PartitionResult to_partition(const EnsembleParams& params, const ThermoAccumulator& a,
                             const ThermoAccumulator& b) {
  CompensatedSum total = a.total;
  total.merge(b.total);
  CompensatedSum excited = a.excited;
  excited.merge(b.excited);
  const double shift = log_weight_shift(params);
  PartitionResult r;
  r.params = params;
  r.log_z = shift + std::log(total.value());
  r.log_z_a = shift + safe_log(a.total.value());
  r.log_z_b = shift + safe_log(b.total.value());
  r.log_z_excited = shift + safe_log(excited.value());
  return r;
}

struct CorrelationAccumulator {
  int n = 1;
  double beta = 0.0;
  double h = 0.0;
  CompensatedSum total;
  std::vector<CompensatedSum> products;  // sum of w * s_1 s_j, index j-1

  CorrelationAccumulator(int n_, double beta_, double h_)
      : n(n_), beta(beta_), h(h_), products(static_cast<std::size_t>(n_)) {}

  void leaf(std::uint64_t tr, unsigned b_count, std::uint64_t mask) {
    const double w =
        std::exp(-beta * excess_energy(std::log(static_cast<double>(tr)), h, b_count, n));
    total.add(w);
    const std::uint64_t first = mask & 1U;
    for (int j = 0; j < n; ++j) {
      const bool aligned = ((mask >> j) & 1U) == first;
      products[static_cast<std::size_t>(j)].add(aligned ? w : -w);
    }
  }

  void merge(const CorrelationAccumulator& other) {
    total.merge(other.total);
    for (std::size_t j = 0; j < products.size(); ++j) {
      products[j].merge(other.products[j]);
    }
  }
};

struct SpectrumAccumulator {
  std::uint64_t ground = 0;
  std::uint64_t min_excited = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t max_trace = 0;

  void leaf(std::uint64_t tr, unsigned /*b_count*/, std::uint64_t /*mask*/) {
    if (tr == 2) {
      ++ground;
    } else {
      min_excited = std::min(min_excited, tr);
    }
    max_trace = std::max(max_trace, tr);
  }

  void merge(const SpectrumAccumulator& other) {
    ground += other.ground;
    min_excited = std::min(min_excited, other.min_excited);
    max_trace = std::max(max_trace, other.max_trace);
  }
};

}  // namespace

void validate(const EnsembleParams& params) {
  if (params.n < 1) {
    throw DomainError("chain length N must be >= 1");
  }
  if (!(params.beta >= 0.0) || !std::isfinite(params.beta)) {
    throw DomainError("beta must be finite and >= 0");
  }
  if (!std::isfinite(params.h)) {
    throw DomainError("field h must be finite");
  }
}

double config_energy(const SpinConfiguration& config, double h) {
  const double log_trace = std::log(static_cast<double>(trace(word_matrix(config))));
  const int n = static_cast<int>(config.size());
  return log_trace + h * static_cast<double>(2 * static_cast<int>(config.b_count()) - n);
}

PartitionResult log_partition(const EnsembleParams& params, const EnumerationOptions& options) {
  const auto halves = thermo_halves(params, options);
  return to_partition(params, halves.a, halves.b);
}

PartitionResult log_partition_via_farey(const EnsembleParams& params) {
  validate(params);
  CompensatedSum a_total;
  CompensatedSum b_total;
  CompensatedSum excited;
  const auto n = params.n;
  for_each_chain_trace(static_cast<unsigned>(n), [&](const ChainTrace& ct) {
    const double log_trace = std::log(static_cast<double>(ct.trace));
    // The involution maps an A chain with b B's onto a B chain with N - b B's
    // and the same trace.
    const unsigned mirrored = static_cast<unsigned>(n) - ct.b_count;
    const double wa = std::exp(-params.beta * excess_energy(log_trace, params.h, ct.b_count, n));
    const double wb = std::exp(-params.beta * excess_energy(log_trace, params.h, mirrored, n));
    a_total.add(wa);
    b_total.add(wb);
    if (ct.b_count != 0) {
      excited.add(wa);
    }
    if (mirrored != static_cast<unsigned>(n)) {
      excited.add(wb);
    }
  });
  CompensatedSum total = a_total;
  total.merge(b_total);
  const double shift = log_weight_shift(params);
  PartitionResult r;
  r.params = params;
  r.log_z = shift + std::log(total.value());
  r.log_z_a = shift + safe_log(a_total.value());
  r.log_z_b = shift + safe_log(b_total.value());
  r.log_z_excited = shift + safe_log(excited.value());
  return r;
}

ThermoPoint thermo_point(const EnsembleParams& params, const EnumerationOptions& options) {
  const auto halves = thermo_halves(params, options);
  ThermoAccumulator all = halves.a;
  all.merge(halves.b);

  const double n = static_cast<double>(params.n);
  const double total = all.total.value();
  const double mean_excess = all.energy.value() / total;
  const double e_min = kLn2 - std::fabs(params.h) * n;

  double mean_mag = 0.0;
  for (std::size_t b = 0; b < all.by_b_count.size(); ++b) {
    const double mag = n - 2.0 * static_cast<double>(b);
    mean_mag += all.by_b_count[b].value() / total * mag;
  }
  double var_mag = 0.0;
  for (std::size_t b = 0; b < all.by_b_count.size(); ++b) {
    const double dev = (n - 2.0 * static_cast<double>(b)) - mean_mag;
    var_mag += all.by_b_count[b].value() / total * dev * dev;
  }

  ThermoPoint tp;
  tp.params = params;
  tp.u = (e_min + mean_excess) / n;
  tp.m = std::clamp(mean_mag / n, -1.0, 1.0);
  tp.chi = params.beta * var_mag / n;
  // S = ln(sum w) + beta <E - E_min>; both terms are non-negative.
  tp.s = (std::log(total) + params.beta * mean_excess) / n;
  if (params.beta > 0.0) {
    const double log_z = log_weight_shift(params) + std::log(total);
    tp.f = -log_z / (params.beta * n);
  }
  return tp;
}

std::vector<double> correlations(const EnsembleParams& params, const EnumerationOptions& options) {
  validate(params);
  const auto halves = enumerate_halves<CorrelationAccumulator>(params.n, options, [&params]() {
    return CorrelationAccumulator(params.n, params.beta, params.h);
  });
  CorrelationAccumulator all = halves.a;
  all.merge(halves.b);
  std::vector<double> out(static_cast<std::size_t>(params.n));
  const double total = all.total.value();
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = all.products[j].value() / total;
  }
  out[0] = 1.0;
  return out;
}

double correlation(const EnsembleParams& params, int j, const EnumerationOptions& options) {
  if (j < 1 || j > params.n) {
    throw DomainError("site index j must satisfy 1 <= j <= N");
  }
  return correlations(params, options)[static_cast<std::size_t>(j - 1)];
}

std::vector<std::pair<int, double>> free_energy_sequence(int n_max, double beta, double h,
                                                         const EnumerationOptions& options) {
  if (!(beta > 0.0)) {
    throw DomainError("free energy needs beta > 0");
  }
  if (n_max < 1) {
    throw DomainError("n_max must be >= 1");
  }
  check_enumerable(n_max, options);
  std::vector<std::pair<int, double>> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    out.emplace_back(n, *thermo_point({n, beta, h}, options).f);
  }
  return out;
}

SpectrumSummary spectrum_summary(int n, const EnumerationOptions& options) {
  const auto halves =
      enumerate_halves<SpectrumAccumulator>(n, options, [] { return SpectrumAccumulator{}; });
  SpectrumAccumulator all = halves.a;
  all.merge(halves.b);
  SpectrumSummary out;
  out.n = n;
  out.ground_count = all.ground;
  out.min_excited_trace = all.ground == (std::uint64_t{1} << n) ? 0 : all.min_excited;
  out.max_trace = all.max_trace;
  return out;
}

}  // namespace ffsc
