#include "dfwer/procedures.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numeric>

namespace dfwer {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
}

std::vector<bool> reject_by_adjusted(std::span<const double> adjusted, double alpha) {
  std::vector<bool> out(adjusted.size());
  for (std::size_t i = 0; i < adjusted.size(); ++i) out[i] = at_most(adjusted[i], alpha);
  return out;
}

Decision from_adjusted(ProcedureId id, double alpha, std::vector<double> adjusted,
                       std::vector<double> critical) {
  Decision d{id, alpha, reject_by_adjusted(adjusted, alpha), std::move(adjusted), std::move(critical)};
  return d;
}

// Scatters rank-ordered values back to original positions.
std::vector<double> unrank(const Family& family, std::span<const double> by_rank) {
  std::vector<double> out(family.size());
  const auto order = family.order();
  for (std::size_t r = 0; r < by_rank.size(); ++r) out[order[r]] = by_rank[r];
  return out;
}

std::vector<double> holm_constants(std::size_t m, double alpha) {
  std::vector<double> c(m);
  for (std::size_t r = 1; r <= m; ++r) c[r - 1] = alpha / static_cast<double>(m - r + 1);
  return c;
}

// Largest point of a sorted grid satisfying a monotone predicate, if any.
template <class Pred>
std::optional<double> last_satisfying(std::span<const double> grid, Pred ok) {
  const auto it = std::partition_point(grid.begin(), grid.end(), ok);
  if (it == grid.begin()) return std::nullopt;
  return *std::prev(it);
}

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  return s;
}

// Modified-Tarone adjusted value of an observed p-value, given the minimal
// attainable p-values of the currently active hypotheses (sorted).
double mod_tarone_value(std::span<const double> pstar_sorted, double p) {
  const std::size_t n = pstar_sorted.size();
  for (std::size_t k = 1; k <= n; ++k) {
    const double gamma = static_cast<double>(k) * p;
    if (gamma > 1.0) break;
    if (tarone_count(pstar_sorted, gamma, k) <= k) return gamma;
  }
  return 1.0;
}

// sup over gamma in (0, alpha] of gamma / K(gamma). K is a nondecreasing step
// function that jumps where gamma / k crosses a minimal p-value, so the sup is
// either at alpha or at the left limit of a jump.
double mod_tarone_threshold(std::span<const double> pstar_sorted, double alpha) {
  const std::size_t n = pstar_sorted.size();
  auto k_left = [&](double gamma) {
    for (std::size_t k = 1; k <= n; ++k) {
      const auto below = std::lower_bound(pstar_sorted.begin(), pstar_sorted.end(),
                                          gamma / static_cast<double>(k));
      if (static_cast<std::size_t>(below - pstar_sorted.begin()) <= k) return k;
    }
    return n;
  };
  double best = alpha / static_cast<double>(tarone_k(pstar_sorted, alpha));
  for (double ps : pstar_sorted) {
    for (std::size_t k = 1; k <= n; ++k) {
      const double b = static_cast<double>(k) * ps;
      if (b > alpha) break;
      best = std::max(best, b / static_cast<double>(k_left(b)));
    }
  }
  return best;
}

}  // namespace

std::string_view to_string(ProcedureId id) {
  switch (id) {
    case ProcedureId::Bonf: return "Bonf";
    case ProcedureId::Sidak: return "Sidak";
    case ProcedureId::Holm: return "Holm";
    case ProcedureId::Hochberg: return "Hochberg";
    case ProcedureId::Tarone: return "Tarone";
    case ProcedureId::ModTarone: return "ModTarone";
    case ProcedureId::TaroneHolm: return "TaroneHolm";
    case ProcedureId::MBonf: return "MBonf";
    case ProcedureId::MHolm: return "MHolm";
    case ProcedureId::MHoch: return "MHoch";
  }
  return "?";
}

ProcedureId parse_procedure(std::string_view name) {
  std::string key;
  for (char ch : name) {
    if (ch == '-' || ch == '_' || std::isspace(static_cast<unsigned char>(ch))) continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  struct Alias {
    std::string_view name;
    ProcedureId id;
  };
  static constexpr std::array<Alias, 17> kAliases{{
      {"bonf", ProcedureId::Bonf},
      {"bonferroni", ProcedureId::Bonf},
      {"sidak", ProcedureId::Sidak},
      {"holm", ProcedureId::Holm},
      {"hochberg", ProcedureId::Hochberg},
      {"hoch", ProcedureId::Hochberg},
      {"tarone", ProcedureId::Tarone},
      {"modtarone", ProcedureId::ModTarone},
      {"modifiedtarone", ProcedureId::ModTarone},
      {"tstar", ProcedureId::ModTarone},
      {"taroneholm", ProcedureId::TaroneHolm},
      {"th", ProcedureId::TaroneHolm},
      {"mbonf", ProcedureId::MBonf},
      {"modifiedbonferroni", ProcedureId::MBonf},
      {"mholm", ProcedureId::MHolm},
      {"modifiedholm", ProcedureId::MHolm},
      {"mhoch", ProcedureId::MHoch},
  }};
  for (const auto& a : kAliases) {
    if (a.name == key) return a.id;
  }
  if (key == "modifiedhochberg") return ProcedureId::MHoch;
  throw UsageError("unknown procedure '" + std::string(name) + "'");
}

std::vector<ProcedureId> parse_procedure_list(std::string_view csv) {
  std::vector<ProcedureId> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const auto token = csv.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (!token.empty()) out.push_back(parse_procedure(token));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw UsageError("empty procedure list");
  return out;
}

std::span<const ProcedureId> all_procedures() {
  static constexpr std::array<ProcedureId, 10> kAll{
      ProcedureId::Bonf,      ProcedureId::Sidak,      ProcedureId::Holm,  ProcedureId::Hochberg,
      ProcedureId::Tarone,    ProcedureId::ModTarone,  ProcedureId::TaroneHolm,
      ProcedureId::MBonf,     ProcedureId::MHolm,      ProcedureId::MHoch,
  };
  return kAll;
}

std::size_t Decision::rejections() const {
  return static_cast<std::size_t>(std::count(rejected.begin(), rejected.end(), true));
}

// ---------------------------------------------------------------------------
// Conventional procedures

std::vector<double> bonferroni_adjusted(const Family& family) {
  const double m = static_cast<double>(family.size());
  std::vector<double> out;
  for (const auto& h : family.hypotheses()) out.push_back(std::min(1.0, m * h.observed_p));
  return out;
}

std::vector<double> sidak_adjusted(const Family& family) {
  const double m = static_cast<double>(family.size());
  std::vector<double> out;
  for (const auto& h : family.hypotheses()) {
    out.push_back(h.observed_p >= 1.0 ? 1.0 : -std::expm1(m * std::log1p(-h.observed_p)));
  }
  return out;
}

std::vector<double> holm_adjusted(const Family& family) {
  const std::size_t m = family.size();
  std::vector<double> by_rank(m);
  double running = 0.0;
  for (std::size_t r = 1; r <= m; ++r) {
    const double v = std::min(1.0, static_cast<double>(m - r + 1) * family.ranked(r).observed_p);
    running = std::max(running, v);
    by_rank[r - 1] = running;
  }
  return unrank(family, by_rank);
}

std::vector<double> hochberg_adjusted(const Family& family) {
  const std::size_t m = family.size();
  std::vector<double> by_rank(m);
  double running = 1.0;
  for (std::size_t r = m; r >= 1; --r) {
    const double v = std::min(1.0, static_cast<double>(m - r + 1) * family.ranked(r).observed_p);
    running = std::min(running, v);
    by_rank[r - 1] = running;
  }
  return unrank(family, by_rank);
}

Decision bonferroni(const Family& family, double alpha) {
  check_alpha(alpha);
  return from_adjusted(ProcedureId::Bonf, alpha, bonferroni_adjusted(family),
                       {alpha / static_cast<double>(family.size())});
}

Decision sidak(const Family& family, double alpha) {
  check_alpha(alpha);
  const double c = -std::expm1(std::log1p(-alpha) / static_cast<double>(family.size()));
  return from_adjusted(ProcedureId::Sidak, alpha, sidak_adjusted(family), {c});
}

Decision holm(const Family& family, double alpha) {
  check_alpha(alpha);
  return from_adjusted(ProcedureId::Holm, alpha, holm_adjusted(family), holm_constants(family.size(), alpha));
}

Decision hochberg(const Family& family, double alpha) {
  check_alpha(alpha);
  return from_adjusted(ProcedureId::Hochberg, alpha, hochberg_adjusted(family),
                       holm_constants(family.size(), alpha));
}

// ---------------------------------------------------------------------------
// Tarone family

std::size_t tarone_count(std::span<const double> min_attainable, double gamma, std::size_t k) {
  const double bound = gamma / static_cast<double>(k);
  return static_cast<std::size_t>(
      std::count_if(min_attainable.begin(), min_attainable.end(), [&](double p) { return at_most(p, bound); }));
}

std::size_t tarone_k(std::span<const double> min_attainable, double gamma) {
  const std::size_t n = min_attainable.size();
  for (std::size_t k = 1; k < n; ++k) {
    if (tarone_count(min_attainable, gamma, k) <= k) return k;
  }
  return std::max<std::size_t>(n, 1);
}

Decision tarone(const Family& family, double alpha) {
  check_alpha(alpha);
  const auto pstar = family.min_attainable();
  const double crit = alpha / static_cast<double>(tarone_k(pstar, alpha));
  Decision d{ProcedureId::Tarone, alpha, std::vector<bool>(family.size()), std::nullopt, {crit}};
  for (std::size_t i = 0; i < family.size(); ++i) d.rejected[i] = at_most(family[i].observed_p, crit);
  return d;
}

std::vector<double> mod_tarone_adjusted(const Family& family) {
  const auto pstar = sorted_copy(family.min_attainable());
  std::vector<double> out;
  for (const auto& h : family.hypotheses()) out.push_back(mod_tarone_value(pstar, h.observed_p));
  return out;
}

Decision mod_tarone(const Family& family, double alpha) {
  check_alpha(alpha);
  const auto pstar = sorted_copy(family.min_attainable());
  return from_adjusted(ProcedureId::ModTarone, alpha, mod_tarone_adjusted(family),
                       {mod_tarone_threshold(pstar, alpha)});
}

std::vector<double> tarone_holm_adjusted(const Family& family) {
  const std::size_t m = family.size();
  std::vector<std::size_t> active(family.order().begin(), family.order().end());
  std::vector<double> out(m, 1.0);
  double running = 0.0;
  while (!active.empty()) {
    std::vector<double> pstar;
    for (auto i : active) pstar.push_back(family[i].null.min_attainable());
    std::sort(pstar.begin(), pstar.end());

    // active stays in rank order, so the first minimum is also the smallest
    // observed p-value among tied stage values.
    std::size_t best = 0;
    double best_value = 2.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
      const double v = mod_tarone_value(pstar, family[active[a]].observed_p);
      if (v < best_value) {
        best_value = v;
        best = a;
      }
    }
    running = std::max(running, best_value);
    out[active[best]] = running;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

Decision tarone_holm(const Family& family, double alpha) {
  check_alpha(alpha);
  Decision d{ProcedureId::TaroneHolm, alpha, std::vector<bool>(family.size()), tarone_holm_adjusted(family), {}};

  // Level-alpha elimination loop: every hypothesis rejected in a stage leaves
  // the active set together.
  std::vector<std::size_t> active(family.order().begin(), family.order().end());
  while (!active.empty()) {
    std::vector<double> pstar;
    for (auto i : active) pstar.push_back(family[i].null.min_attainable());
    std::sort(pstar.begin(), pstar.end());
    d.critical.push_back(mod_tarone_threshold(pstar, alpha));

    std::vector<std::size_t> keep;
    for (auto i : active) {
      if (at_most(mod_tarone_value(pstar, family[i].observed_p), alpha)) {
        d.rejected[i] = true;
      } else {
        keep.push_back(i);
      }
    }
    if (keep.size() == active.size()) break;
    active = std::move(keep);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Procedures using the full null CDFs

double mbonf_critical(const Family& family, double alpha) {
  check_alpha(alpha);
  const auto grid = family.support_union(1);
  const auto best = last_satisfying(grid, [&](double p) { return at_most(family.sum_cdf(1, p), alpha); });
  return best.value_or(alpha / static_cast<double>(family.size()));
}

std::vector<double> mbonf_adjusted(const Family& family) {
  std::vector<double> out;
  for (const auto& h : family.hypotheses()) out.push_back(std::min(1.0, family.sum_cdf(1, h.observed_p)));
  return out;
}

Decision mbonf(const Family& family, double alpha) {
  const double s = mbonf_critical(family, alpha);
  Decision d{ProcedureId::MBonf, alpha, std::vector<bool>(family.size()), mbonf_adjusted(family), {s}};
  for (std::size_t i = 0; i < family.size(); ++i) d.rejected[i] = at_most(family[i].observed_p, s);
  return d;
}

std::vector<double> mholm_critical(const Family& family, double alpha) {
  check_alpha(alpha);
  const std::size_t m = family.size();
  std::vector<double> crit(m);
  double previous = 0.0;
  for (std::size_t r = 1; r <= m; ++r) {
    const auto grid = family.support_union(r);
    const auto best = last_satisfying(grid, [&](double p) { return at_most(family.sum_cdf(r, p), alpha); });
    crit[r - 1] = best ? *best : std::max(previous, alpha / static_cast<double>(m - r + 1));
    previous = crit[r - 1];
  }
  return crit;
}

std::vector<double> mholm_adjusted(const Family& family) {
  const std::size_t m = family.size();
  std::vector<double> by_rank(m);
  double running = 0.0;
  for (std::size_t r = 1; r <= m; ++r) {
    running = std::max(running, std::min(1.0, family.sum_cdf(r, family.ranked(r).observed_p)));
    by_rank[r - 1] = running;
  }
  return unrank(family, by_rank);
}

Decision mholm(const Family& family, double alpha) {
  auto crit = mholm_critical(family, alpha);
  Decision d{ProcedureId::MHolm, alpha, std::vector<bool>(family.size()), mholm_adjusted(family), {}};
  for (std::size_t r = 1; r <= family.size(); ++r) {
    if (!at_most(family.ranked(r).observed_p, crit[r - 1])) break;
    d.rejected[family.order()[r - 1]] = true;
  }
  d.critical = std::move(crit);
  return d;
}

std::vector<double> mhoch_adjusted(const Family& family) {
  const std::size_t m = family.size();
  std::vector<double> by_rank(m);
  // At rank m the sum has a single term F_(m)(P_(m)) <= 1.
  double running = family.sum_cdf(m, family.ranked(m).observed_p);
  by_rank[m - 1] = running;
  for (std::size_t r = m - 1; r >= 1; --r) {
    running = std::min(running, family.sum_cdf(r, family.ranked(r).observed_p));
    by_rank[r - 1] = std::clamp(running, 0.0, 1.0);
  }
  return unrank(family, by_rank);
}

Decision mhoch(const Family& family, double alpha) {
  auto crit = mholm_critical(family, alpha);
  Decision d{ProcedureId::MHoch, alpha, std::vector<bool>(family.size()), mhoch_adjusted(family), {}};
  std::size_t last = 0;
  for (std::size_t r = family.size(); r >= 1; --r) {
    if (at_most(family.ranked(r).observed_p, crit[r - 1])) {
      last = r;
      break;
    }
  }
  for (std::size_t r = 1; r <= last; ++r) d.rejected[family.order()[r - 1]] = true;
  d.critical = std::move(crit);
  return d;
}

Decision apply(ProcedureId id, const Family& family, double alpha) {
  switch (id) {
    case ProcedureId::Bonf: return bonferroni(family, alpha);
    case ProcedureId::Sidak: return sidak(family, alpha);
    case ProcedureId::Holm: return holm(family, alpha);
    case ProcedureId::Hochberg: return hochberg(family, alpha);
    case ProcedureId::Tarone: return tarone(family, alpha);
    case ProcedureId::ModTarone: return mod_tarone(family, alpha);
    case ProcedureId::TaroneHolm: return tarone_holm(family, alpha);
    case ProcedureId::MBonf: return mbonf(family, alpha);
    case ProcedureId::MHolm: return mholm(family, alpha);
    case ProcedureId::MHoch: return mhoch(family, alpha);
  }
  throw UsageError("unknown procedure id");
}

}  // namespace dfwer
