#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ffsc/farey.hpp"

namespace ffsc {

/// Inverse critical temperature of the Farey chain.
inline constexpr double kCriticalBeta = 2.0;

/// Default largest N for which 2^N enumeration is attempted.
inline constexpr int kDefaultEnumerationCap = 34;

/// Hard ceiling: configurations are addressed by 64-bit masks and traces of
/// words up to this length fit in 64 bits (entries grow like Fibonacci numbers).
inline constexpr int kMaxEnumerationLength = 62;

struct EnsembleParams {
  int n = 1;
  double beta = 1.0;
  double h = 0.0;
};

/// Throws DomainError unless n >= 1, beta >= 0 and h finite.
void validate(const EnsembleParams& params);

struct EnumerationOptions {
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
  int cap = kDefaultEnumerationCap;
};

/// Natural logs of the partition function and its splits.
struct PartitionResult {
  EnsembleParams params;
  double log_z = 0.0;
  double log_z_a = 0.0;        // chains starting with A
  double log_z_b = 0.0;        // chains starting with B
  double log_z_excited = 0.0;  // everything but all-A and all-B; -inf when empty
};

struct ThermoPoint {
  EnsembleParams params;
  std::optional<double> f;  // empty at beta = 0
  double u = 0.0;           // mean energy per site
  double m = 0.0;           // <#A - #B> / N
  double s = 0.0;           // entropy per site
  double chi = 0.0;         // (beta / N) Var(#A - #B)
};

/// ln Tr(M) + h (2 sum(sigma) - N).
[[nodiscard]] double config_energy(const SpinConfiguration& config, double h);

/// Exact sum over all 2^N configurations.
///
/// Weights are taken relative to the ground-state bound E >= ln 2 - |h| N and
/// accumulated with compensated sums. The configuration space is cut into
/// fixed prefix subtrees whose count depends on N only; partial sums are
/// reduced in ascending prefix order, so results do not depend on the number
/// of worker threads. The B half is walked as the bitwise complement of the A
/// half, which makes log_z_b(h) and log_z_a(-h) bit-identical.
///
/// Throws CapExceededError when N exceeds options.cap (or the hard ceiling).
[[nodiscard]] PartitionResult log_partition(const EnsembleParams& params,
                                            const EnumerationOptions& options = {});

/// Same quantity assembled from the Farey recursion for the A half and the
/// A <-> B involution for the B half. Single threaded; an independent route
/// used to cross-check log_partition.
[[nodiscard]] PartitionResult log_partition_via_farey(const EnsembleParams& params);

/// f, u, m, s and chi from one enumeration pass.
[[nodiscard]] ThermoPoint thermo_point(const EnsembleParams& params,
                                       const EnumerationOptions& options = {});

/// <s_1 s_j> with s_i = 2 sigma_i - 1, 1 <= j <= N.
[[nodiscard]] double correlation(const EnsembleParams& params, int j,
                                 const EnumerationOptions& options = {});

/// <s_1 s_j> for j = 1..N (index j-1).
[[nodiscard]] std::vector<double> correlations(const EnsembleParams& params,
                                               const EnumerationOptions& options = {});

/// (N, f_N) for N = 1..n_max. beta must be positive.
[[nodiscard]] std::vector<std::pair<int, double>> free_energy_sequence(
    int n_max, double beta, double h, const EnumerationOptions& options = {});

/// Trace statistics of all 2^N words at h = 0.
struct SpectrumSummary {
  int n = 0;
  std::uint64_t ground_count = 0;        // words with trace 2
  std::uint64_t min_excited_trace = 0;   // over all other words; 0 if none
  std::uint64_t max_trace = 0;
};

[[nodiscard]] SpectrumSummary spectrum_summary(int n, const EnumerationOptions& options = {});

}  // namespace ffsc
