// Independent reference computations used only by the test suites.
//
// Nothing here calls into the procedure implementations: exact-test oracles
// use exact integer arithmetic, procedure oracles use linear scans and literal
// transcriptions of the procedure definitions.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "dfwer/exact_tests.hpp"
#include "dfwer/null_model.hpp"

namespace oracle {

__extension__ typedef unsigned __int128 u128;

inline u128 choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  u128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * static_cast<u128>(n - k + i) / static_cast<u128>(i);
  return r;
}

inline long double to_ld(u128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  const auto lo = static_cast<std::uint64_t>(v);
  return static_cast<long double>(hi) * 18446744073709551616.0L + static_cast<long double>(lo);
}

/// Exact p-value of every outcome from integer weights. The two-sided rule
/// treats w_j as tied with w_k when w_j * 1e7 <= w_k * (1e7 + 1).
inline std::vector<long double> pvalues(const std::vector<u128>& w, dfwer::Alternative alt) {
  u128 total = 0;
  for (auto x : w) total += x;
  std::vector<long double> out(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    u128 s = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      bool in = false;
      switch (alt) {
        case dfwer::Alternative::Greater: in = j >= k; break;
        case dfwer::Alternative::Less: in = j <= k; break;
        case dfwer::Alternative::TwoSided:
          in = w[j] * static_cast<u128>(10000000) <= w[k] * static_cast<u128>(10000001);
          break;
      }
      if (in) s += w[j];
    }
    out[k] = to_ld(s) / to_ld(total);
  }
  return out;
}

/// Hypergeometric weights C(n1,k) C(n2,c-k) over the feasible k, plus the
/// smallest feasible k.
inline std::vector<u128> hypergeometric_weights(std::int64_t c, std::int64_t n1, std::int64_t n2, std::int64_t& lo) {
  lo = std::max<std::int64_t>(0, c - n2);
  const std::int64_t hi = std::min(c, n1);
  std::vector<u128> w;
  for (std::int64_t k = lo; k <= hi; ++k) w.push_back(choose(n1, k) * choose(n2, c - k));
  return w;
}

inline std::vector<u128> binomial_weights(std::int64_t c) {
  std::vector<u128> w;
  for (std::int64_t k = 0; k <= c; ++k) w.push_back(choose(c, k));
  return w;
}

/// Sorted distinct values of a list of exact p-values.
inline std::vector<long double> distinct(std::vector<long double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline bool leq(double a, double b) { return a <= b * (1.0 + 1e-12); }

// ---------------------------------------------------------------------------
// Null-model oracles: linear scans.

inline double cdf(std::span<const double> support, double u) {
  double best = 0.0;
  for (double s : support) {
    if (leq(s, u)) best = std::max(best, s);
  }
  return best;
}

inline std::vector<double> naive_union(const dfwer::Family& f, std::size_t from_rank) {
  std::set<double> all;
  for (std::size_t r = from_rank; r <= f.size(); ++r) {
    for (double s : f.ranked(r).null.support()) all.insert(s);
  }
  // Merge near-duplicates exactly as a brute-force pass would.
  std::vector<double> out;
  for (double s : all) {
    if (!out.empty() && leq(s, out.back())) {
      out.back() = s;
    } else {
      out.push_back(s);
    }
  }
  return out;
}

inline double naive_sum_cdf(const dfwer::Family& f, std::size_t from_rank, double p) {
  double s = 0.0;
  for (std::size_t r = from_rank; r <= f.size(); ++r) s += cdf(f.ranked(r).null.support(), p);
  return s;
}

/// Largest union point with summed CDF <= alpha, scanning every point.
inline double naive_critical(const dfwer::Family& f, std::size_t from_rank, double alpha, double fallback) {
  double best = -1.0;
  for (double p : naive_union(f, from_rank)) {
    if (leq(naive_sum_cdf(f, from_rank, p), alpha)) best = std::max(best, p);
  }
  return best < 0.0 ? fallback : best;
}

// ---------------------------------------------------------------------------
// Tarone-type oracles.

inline std::size_t literal_k(const std::vector<double>& pstar, double gamma) {
  const std::size_t n = pstar.size();
  for (std::size_t k = 1; k <= n; ++k) {
    std::size_t count = 0;
    for (double p : pstar) count += leq(p, gamma / static_cast<double>(k)) ? 1 : 0;
    if (count <= k) return k;
  }
  return n;
}

/// Candidate gammas {k p*_j} and {k P_j}, k = 1..n, inside (0, 1].
inline std::vector<double> gamma_grid(const std::vector<double>& pstar, const std::vector<double>& observed) {
  std::vector<double> grid;
  const std::size_t n = pstar.size();
  for (std::size_t k = 1; k <= n; ++k) {
    for (double p : pstar) grid.push_back(static_cast<double>(k) * p);
    for (double p : observed) grid.push_back(static_cast<double>(k) * p);
  }
  grid.erase(std::remove_if(grid.begin(), grid.end(), [](double g) { return !(g > 0.0 && g <= 1.0); }), grid.end());
  std::sort(grid.begin(), grid.end());
  return grid;
}

/// inf{alpha : some gamma <= alpha has P <= gamma / K(gamma)}, scanning the grid.
inline double mod_tarone_grid(const std::vector<double>& pstar, const std::vector<double>& observed, double p) {
  for (double g : gamma_grid(pstar, observed)) {
    if (leq(p, g / static_cast<double>(literal_k(pstar, g)))) return g;
  }
  return 1.0;
}

/// Literal level-alpha Tarone-Holm loop.
inline std::vector<bool> tarone_holm_loop(const dfwer::Family& f, double alpha) {
  std::vector<bool> rejected(f.size());
  std::vector<std::size_t> active(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) active[i] = i;
  while (!active.empty()) {
    std::vector<double> pstar, obs;
    for (auto i : active) {
      pstar.push_back(f[i].null.min_attainable());
      obs.push_back(f[i].observed_p);
    }
    auto grid = gamma_grid(pstar, obs);
    grid.push_back(alpha);
    std::vector<std::size_t> keep;
    for (auto i : active) {
      bool hit = false;
      for (double g : grid) {
        if (g <= alpha && leq(f[i].observed_p, g / static_cast<double>(literal_k(pstar, g)))) {
          hit = true;
          break;
        }
      }
      if (hit) {
        rejected[i] = true;
      } else {
        keep.push_back(i);
      }
    }
    if (keep.size() == active.size()) break;
    active = keep;
  }
  return rejected;
}

// ---------------------------------------------------------------------------
// Random families.

/// Random family of up to max_m hypotheses built from small Fisher and binomial
/// exact tests. Observed p-values are drawn from the supports.
inline dfwer::Family random_family(std::mt19937_64& gen, std::size_t max_m) {
  std::uniform_int_distribution<std::size_t> msize(1, max_m);
  const std::size_t m = msize(gen);
  std::vector<dfwer::Hypothesis> hyps;
  for (std::size_t i = 0; i < m; ++i) {
    dfwer::ExactTestResult res;
    if (gen() % 2 == 0) {
      const std::int64_t n1 = 2 + static_cast<std::int64_t>(gen() % 25);
      const std::int64_t n2 = 2 + static_cast<std::int64_t>(gen() % 25);
      const std::int64_t x1 = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(n1 + 1)) / 2;
      const std::int64_t x2 = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(n2 + 1)) / 2;
      const auto alt = static_cast<dfwer::Alternative>(gen() % 3);
      res = dfwer::fisher_exact({x1, x2, n1, n2}, alt);
    } else {
      const std::int64_t x1 = static_cast<std::int64_t>(gen() % 8);
      const std::int64_t x2 = static_cast<std::int64_t>(gen() % 15);
      res = dfwer::binomial_exact({x1, x2}, gen() % 2 ? dfwer::Alternative::Less : dfwer::Alternative::Greater);
    }
    // Resample the observed value uniformly from the support so that small
    // p-values show up often enough to exercise rejections.
    const double obs = res.support[gen() % res.support.size()];
    hyps.push_back({obs, dfwer::DiscreteNull(res.support)});
  }
  return dfwer::Family(std::move(hyps));
}

/// Random family whose hypotheses all share one support.
inline dfwer::Family random_identical_family(std::mt19937_64& gen, std::size_t max_m) {
  const std::int64_t n = 3 + static_cast<std::int64_t>(gen() % 20);
  const std::int64_t x1 = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(n + 1));
  const auto base = dfwer::fisher_exact({x1, n - x1, n, n}, dfwer::Alternative::Less);
  const std::size_t m = 1 + gen() % max_m;
  std::vector<dfwer::Hypothesis> hyps;
  for (std::size_t i = 0; i < m; ++i) {
    hyps.push_back({base.support[gen() % base.support.size()], dfwer::DiscreteNull(base.support)});
  }
  return dfwer::Family(std::move(hyps));
}

inline std::vector<double> grid_alphas(std::size_t n, double lo = 0.001, double hi = 0.5) {
  std::vector<double> a;
  for (std::size_t i = 0; i < n; ++i) a.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  return a;
}

}  // namespace oracle
