#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dfwer/null_model.hpp"
#include "dfwer/procedures.hpp"
#include "dfwer/rng.hpp"

namespace dfwer {

enum class TestKind { FET, BET };

/// One Monte Carlo scenario. The first m0 = round(m * pi0) hypotheses are
/// true nulls, the rest false nulls.
///
/// FET: both arms Bin(N, p_null) under the null; group 2 is Bin(N, p_alt)
/// under the alternative. BET: both arms Poi(lambda_null) under the null;
/// group 2 is Poi(lambda_alt) under the alternative. rho > 0 (BET only)
/// switches to block-dependent counts with a shared Poisson component per
/// block and arm.
struct SimConfig {
  TestKind test_kind = TestKind::FET;
  std::size_t m = 10;
  double pi0 = 0.8;
  std::int64_t sample_size = 50;
  double p_null = 0.1;
  double p_alt = 0.2;
  double lambda_null = 2.0;
  double lambda_alt = 10.0;
  double rho = 0.0;
  std::size_t replicates = 2000;
  double alpha = 0.05;
  std::uint64_t seed = 20200101;

  /// Throws UsageError naming the offending field.
  void validate() const;
  std::size_t true_nulls() const;
};

struct Replicate {
  Family family;
  std::vector<bool> true_null;  // per hypothesis, original order
};

/// Raw count pairs behind one replicate, original hypothesis order.
struct CountPairs {
  std::vector<std::int64_t> x1;
  std::vector<std::int64_t> x2;
};

CountPairs draw_fet_counts(const SimConfig& config, Philox4x32& rng);
CountPairs draw_bet_counts_indep(const SimConfig& config, Philox4x32& rng);
CountPairs draw_bet_counts_block(const SimConfig& config, Philox4x32& rng);

Replicate gen_fet_replicate(const SimConfig& config, Philox4x32& rng);
Replicate gen_bet_replicate_indep(const SimConfig& config, Philox4x32& rng);
Replicate gen_bet_replicate_block(const SimConfig& config, Philox4x32& rng);

/// Replicate r drawn from its own stream (seed, r).
Replicate generate_replicate(const SimConfig& config, std::uint64_t index);

struct SimResult {
  ProcedureId procedure;
  std::size_t replicates = 0;
  double fwer_hat = 0.0;    // replicates with >= 1 true-null rejection
  double fwer_stderr = 0.0;
  double minpow_hat = 0.0;  // replicates with >= 1 false-null rejection
  double minpow_stderr = 0.0;
  bool minpow_defined = true;  // false when there are no false nulls
  double mean_rejections = 0.0;
};

/// Per-procedure integer counts; merging is exact and order independent.
struct SimTally {
  std::uint64_t any_true_rejection = 0;
  std::uint64_t any_false_rejection = 0;
  std::uint64_t rejections = 0;

  SimTally& operator+=(const SimTally& other);
};

/// Applies every procedure to one replicate. Adds into `tallies`, which is
/// indexed like `procedures`.
void tally_replicate(const Replicate& rep, std::span<const ProcedureId> procedures, double alpha,
                     std::span<SimTally> tallies);

std::vector<SimResult> summarize(const SimConfig& config, std::span<const ProcedureId> procedures,
                                 std::span<const SimTally> tallies);

/// OpenMP-parallel over replicates. threads = 0 uses the OpenMP default.
/// Output is identical for every thread count.
std::vector<SimResult> estimate(const SimConfig& config, std::span<const ProcedureId> procedures,
                                int threads = 0);

/// Single-threaded reference implementation of estimate().
std::vector<SimResult> estimate_serial(const SimConfig& config, std::span<const ProcedureId> procedures);

}  // namespace dfwer
