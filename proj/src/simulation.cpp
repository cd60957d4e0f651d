#include "dfwer/simulation.hpp"

#include <cmath>
#include <omp.h>

#include "dfwer/exact_tests.hpp"
#include "dfwer/sampling.hpp"

namespace dfwer {

void SimConfig::validate() const {
  if (m < 1) throw UsageError("m: need at least one hypothesis");
  if (!(pi0 >= 0.0 && pi0 <= 1.0)) throw UsageError("pi0: must lie in [0, 1]");
  if (replicates < 1) throw UsageError("B: need at least one replicate");
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha: must lie in (0, 1)");
  if (!(rho >= 0.0 && rho < 1.0)) throw UsageError("rho: must lie in [0, 1)");
  if (test_kind == TestKind::FET) {
    if (sample_size < 1) throw UsageError("N: must be positive");
    if (!(p_null >= 0.0 && p_null <= 1.0)) throw UsageError("p_null: must lie in [0, 1]");
    if (!(p_alt >= 0.0 && p_alt <= 1.0)) throw UsageError("p_alt: must lie in [0, 1]");
    if (rho != 0.0) throw UsageError("rho: block dependence is only defined for BET");
  } else {
    if (!(lambda_null > 0.0)) throw UsageError("lambda_null: must be positive");
    if (!(lambda_alt > 0.0)) throw UsageError("lambda_alt: must be positive");
  }
}

std::size_t SimConfig::true_nulls() const {
  return static_cast<std::size_t>(std::llround(static_cast<double>(m) * pi0));
}

namespace {

std::vector<bool> truth_labels(const SimConfig& cfg) {
  std::vector<bool> truth(cfg.m);
  const std::size_t m0 = cfg.true_nulls();
  for (std::size_t i = 0; i < cfg.m; ++i) truth[i] = i < m0;
  return truth;
}

Replicate fet_family(const SimConfig& cfg, const CountPairs& counts) {
  std::vector<ExactTestResult> results;
  results.reserve(cfg.m);
  for (std::size_t i = 0; i < cfg.m; ++i) {
    results.push_back(fisher_exact({counts.x1[i], counts.x2[i], cfg.sample_size, cfg.sample_size}, Alternative::Less));
  }
  return {Family::from_results(results), truth_labels(cfg)};
}

Replicate bet_family(const SimConfig& cfg, const CountPairs& counts) {
  std::vector<ExactTestResult> results;
  results.reserve(cfg.m);
  for (std::size_t i = 0; i < cfg.m; ++i) results.push_back(binomial_exact({counts.x1[i], counts.x2[i]}, Alternative::Less));
  return {Family::from_results(results), truth_labels(cfg)};
}

}  // namespace

CountPairs draw_fet_counts(const SimConfig& cfg, Philox4x32& rng) {
  const std::size_t m0 = cfg.true_nulls();
  CountPairs c{std::vector<std::int64_t>(cfg.m), std::vector<std::int64_t>(cfg.m)};
  for (std::size_t i = 0; i < cfg.m; ++i) {
    c.x1[i] = sample_binomial(rng, cfg.sample_size, cfg.p_null);
    c.x2[i] = sample_binomial(rng, cfg.sample_size, i < m0 ? cfg.p_null : cfg.p_alt);
  }
  return c;
}

CountPairs draw_bet_counts_indep(const SimConfig& cfg, Philox4x32& rng) {
  const std::size_t m0 = cfg.true_nulls();
  CountPairs c{std::vector<std::int64_t>(cfg.m), std::vector<std::int64_t>(cfg.m)};
  for (std::size_t i = 0; i < cfg.m; ++i) {
    c.x1[i] = sample_poisson(rng, cfg.lambda_null);
    c.x2[i] = sample_poisson(rng, i < m0 ? cfg.lambda_null : cfg.lambda_alt);
  }
  return c;
}

CountPairs draw_bet_counts_block(const SimConfig& cfg, Philox4x32& rng) {
  const std::size_t m0 = cfg.true_nulls();
  const double rho = cfg.rho;
  // Shared components: one for group 1, one per block in group 2.
  const std::int64_t shared1 = sample_poisson(rng, rho * cfg.lambda_null);
  const std::int64_t shared2_null = sample_poisson(rng, rho * cfg.lambda_null);
  const std::int64_t shared2_alt = sample_poisson(rng, rho * cfg.lambda_alt);

  CountPairs c{std::vector<std::int64_t>(cfg.m), std::vector<std::int64_t>(cfg.m)};
  for (std::size_t i = 0; i < cfg.m; ++i) {
    const bool null = i < m0;
    c.x1[i] = sample_poisson(rng, (1.0 - rho) * cfg.lambda_null) + shared1;
    c.x2[i] = sample_poisson(rng, (1.0 - rho) * (null ? cfg.lambda_null : cfg.lambda_alt)) +
              (null ? shared2_null : shared2_alt);
  }
  return c;
}

Replicate gen_fet_replicate(const SimConfig& cfg, Philox4x32& rng) { return fet_family(cfg, draw_fet_counts(cfg, rng)); }

Replicate gen_bet_replicate_indep(const SimConfig& cfg, Philox4x32& rng) {
  return bet_family(cfg, draw_bet_counts_indep(cfg, rng));
}

Replicate gen_bet_replicate_block(const SimConfig& cfg, Philox4x32& rng) {
  return bet_family(cfg, draw_bet_counts_block(cfg, rng));
}

Replicate generate_replicate(const SimConfig& cfg, std::uint64_t index) {
  Philox4x32 rng(cfg.seed, index);
  if (cfg.test_kind == TestKind::FET) return gen_fet_replicate(cfg, rng);
  if (cfg.rho == 0.0) return gen_bet_replicate_indep(cfg, rng);
  return gen_bet_replicate_block(cfg, rng);
}

SimTally& SimTally::operator+=(const SimTally& o) {
  any_true_rejection += o.any_true_rejection;
  any_false_rejection += o.any_false_rejection;
  rejections += o.rejections;
  return *this;
}

void tally_replicate(const Replicate& rep, std::span<const ProcedureId> procedures, double alpha,
                     std::span<SimTally> tallies) {
  for (std::size_t p = 0; p < procedures.size(); ++p) {
    const Decision d = apply(procedures[p], rep.family, alpha);
    bool any_true = false;
    bool any_false = false;
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < d.rejected.size(); ++i) {
      if (!d.rejected[i]) continue;
      ++count;
      (rep.true_null[i] ? any_true : any_false) = true;
    }
    tallies[p].any_true_rejection += any_true ? 1 : 0;
    tallies[p].any_false_rejection += any_false ? 1 : 0;
    tallies[p].rejections += count;
  }
}

std::vector<SimResult> summarize(const SimConfig& cfg, std::span<const ProcedureId> procedures,
                                 std::span<const SimTally> tallies) {
  const double b = static_cast<double>(cfg.replicates);
  const bool has_false = cfg.true_nulls() < cfg.m;
  auto stderr_of = [b](double r) { return std::sqrt(r * (1.0 - r) / b); };
  std::vector<SimResult> out;
  for (std::size_t p = 0; p < procedures.size(); ++p) {
    SimResult r;
    r.procedure = procedures[p];
    r.replicates = cfg.replicates;
    r.fwer_hat = static_cast<double>(tallies[p].any_true_rejection) / b;
    r.fwer_stderr = stderr_of(r.fwer_hat);
    r.minpow_defined = has_false;
    r.minpow_hat = has_false ? static_cast<double>(tallies[p].any_false_rejection) / b : 0.0;
    r.minpow_stderr = stderr_of(r.minpow_hat);
    r.mean_rejections = static_cast<double>(tallies[p].rejections) / b;
    out.push_back(r);
  }
  return out;
}

std::vector<SimResult> estimate(const SimConfig& cfg, std::span<const ProcedureId> procedures, int threads) {
  cfg.validate();
  const std::size_t np = procedures.size();
  const auto reps = static_cast<std::int64_t>(cfg.replicates);
  std::vector<SimTally> total(np);
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel num_threads(nthreads)
  {
    std::vector<SimTally> local(np);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t r = 0; r < reps; ++r) {
      tally_replicate(generate_replicate(cfg, static_cast<std::uint64_t>(r)), procedures, cfg.alpha, local);
    }
#pragma omp critical(dfwer_tally_merge)
    for (std::size_t p = 0; p < np; ++p) total[p] += local[p];
  }
  return summarize(cfg, procedures, total);
}

}  // namespace dfwer
