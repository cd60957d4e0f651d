#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dfwer/null_model.hpp"

namespace dfwer {

enum class ProcedureId {
  Bonf,
  Sidak,
  Holm,
  Hochberg,
  Tarone,
  ModTarone,
  TaroneHolm,
  MBonf,
  MHolm,
  MHoch,
};

/// Bad procedure name, malformed request and the like.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string_view to_string(ProcedureId id);

/// Case-insensitive; accepts the canonical names above plus a few common
/// aliases ("bonferroni", "hoch", "th", ...). Throws UsageError.
ProcedureId parse_procedure(std::string_view name);

/// Comma-separated list of names.
std::vector<ProcedureId> parse_procedure_list(std::string_view csv);

std::span<const ProcedureId> all_procedures();

/// Outcome of one procedure on one family at level alpha.
struct Decision {
  ProcedureId procedure;
  double alpha = 0.05;
  std::vector<bool> rejected;                   // original hypothesis order
  std::optional<std::vector<double>> adjusted;  // original order; empty for plain Tarone
  // Single-step: one constant. MHolm/MHoch, Holm/Hochberg: one per rank.
  // Tarone-Holm: one threshold per elimination stage that was run.
  std::vector<double> critical;

  std::size_t rejections() const;
};

// Conventional procedures. Adjusted values in original order.
std::vector<double> bonferroni_adjusted(const Family& family);
std::vector<double> sidak_adjusted(const Family& family);
std::vector<double> holm_adjusted(const Family& family);
std::vector<double> hochberg_adjusted(const Family& family);

Decision bonferroni(const Family& family, double alpha);
Decision sidak(const Family& family, double alpha);
Decision holm(const Family& family, double alpha);
Decision hochberg(const Family& family, double alpha);

// Tarone family, driven by the minimal attainable p-values only.

/// M(gamma, k) = #{i : p*_i <= gamma / k} over the given minimal p-values.
std::size_t tarone_count(std::span<const double> min_attainable, double gamma, std::size_t k);

/// K(gamma) = min{k : M(gamma, k) <= k}; always <= min_attainable.size().
std::size_t tarone_k(std::span<const double> min_attainable, double gamma);

/// Rejects H_i iff P_i <= alpha / K(alpha). Not alpha-consistent, so the
/// decision carries no adjusted p-values.
Decision tarone(const Family& family, double alpha);

std::vector<double> mod_tarone_adjusted(const Family& family);
Decision mod_tarone(const Family& family, double alpha);

std::vector<double> tarone_holm_adjusted(const Family& family);
Decision tarone_holm(const Family& family, double alpha);

// Procedures that use the full null CDFs.

/// Single-step critical value s*: the largest union support point whose summed
/// CDF stays within alpha, else alpha / m.
double mbonf_critical(const Family& family, double alpha);
std::vector<double> mbonf_adjusted(const Family& family);
Decision mbonf(const Family& family, double alpha);

/// Rank-wise constants alpha_1..alpha_m shared by the step-down and step-up
/// procedures. Index r - 1 holds the constant for rank r.
std::vector<double> mholm_critical(const Family& family, double alpha);
std::vector<double> mholm_adjusted(const Family& family);
Decision mholm(const Family& family, double alpha);

std::vector<double> mhoch_adjusted(const Family& family);
Decision mhoch(const Family& family, double alpha);

/// Dispatches on id. Throws std::domain_error for alpha outside (0, 1).
Decision apply(ProcedureId id, const Family& family, double alpha);

}  // namespace dfwer
