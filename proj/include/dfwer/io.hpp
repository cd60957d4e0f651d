#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "dfwer/procedures.hpp"
#include "dfwer/simulation.hpp"

namespace dfwer {

/// Malformed input; `line` is 1-based, 0 when no particular line is at fault.
class ParseError : public UsageError {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct CountRow {
  std::string label;
  std::int64_t x1 = 0;
  std::int64_t x2 = 0;
};

/// Reads `label,x1,x2` rows. An optional header line, blank lines and lines
/// starting with '#' are skipped.
std::vector<CountRow> parse_counts(std::istream& in);

struct SimRequest {
  SimConfig config;
  std::vector<ProcedureId> procedures;
};

/// key=value lines; '#' starts a comment. Keys:
///   test_kind (FET|BET), m, pi0, N (FET), p_null, p_alt, lambda_null,
///   lambda_alt, rho, B, alpha, seed, procedures (comma list)
/// test_kind, m, pi0 and, for FET, N are required. Throws ParseError naming
/// the key.
SimRequest parse_sim_config(std::istream& in);

/// Fixed-point with `precision` decimals; precision < 0 prints round-trip
/// (17 significant digit) output.
std::string format_probability(double p, int precision);

std::vector<std::string> split_fields(std::string_view line, char sep = ',');
std::string_view trim(std::string_view s);

}  // namespace dfwer
