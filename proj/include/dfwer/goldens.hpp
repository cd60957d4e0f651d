#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dfwer/io.hpp"
#include "dfwer/null_model.hpp"

namespace dfwer {

/// Skin body-system adverse events of a two-arm safety study (study arm
/// N1 = 600, control arm N2 = 650), listed in increasing order of their
/// two-sided Fisher exact p-values.
inline constexpr std::int64_t kClinicalN1 = 600;
inline constexpr std::int64_t kClinicalN2 = 650;
std::span<const CountRow> clinical_dataset();

/// Two-sided Fisher exact family for the clinical dataset.
Family clinical_family();

/// Reference 4-decimal values for one column, listed by rank.
struct GoldenColumn {
  std::string name;  // "P" or a procedure name
  std::vector<double> by_rank;
};

struct GoldenTable {
  std::string name;
  std::vector<GoldenColumn> columns;
};

/// Three tables: raw and single-step adjusted p-values, step-down, and
/// step-up (Roth two-stage values are not reproduced).
std::vector<GoldenTable> clinical_expectations();

struct GoldenCell {
  std::string table;
  std::string column;
  std::size_t rank;
  double expected;
  double actual;
  bool pass;
};

std::vector<GoldenCell> check_goldens(std::span<const GoldenTable> tables);

/// Prints one line per cell and a summary. Returns 0 when every cell passes,
/// 1 otherwise.
int report_goldens(std::span<const GoldenTable> tables, std::ostream& out);

}  // namespace dfwer
