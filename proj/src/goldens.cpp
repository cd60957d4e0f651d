#include "dfwer/goldens.hpp"

#include <cmath>
#include <stdexcept>

#include "dfwer/exact_tests.hpp"
#include "dfwer/procedures.hpp"

namespace dfwer {

std::span<const CountRow> clinical_dataset() {
  static const std::vector<CountRow> kRows{
      {"AE1", 13, 3}, {"AE2", 8, 1}, {"AE3", 4, 0}, {"AE4", 6, 2}, {"AE5", 2, 0},
      {"AE6", 4, 2},  {"AE7", 0, 2}, {"AE8", 2, 1}, {"AE9", 1, 2},
  };
  return kRows;
}

Family clinical_family() {
  std::vector<ExactTestResult> results;
  std::vector<std::string> labels;
  for (const auto& row : clinical_dataset()) {
    results.push_back(fisher_exact({row.x1, row.x2, kClinicalN1, kClinicalN2}, Alternative::TwoSided));
    labels.push_back(row.label);
  }
  return Family::from_results(results, std::move(labels));
}

std::vector<GoldenTable> clinical_expectations() {
  return {
      {"single-step",
       {
           {"P", {0.0098, 0.0170, 0.0528, 0.1634, 0.2302, 0.4353, 0.5004, 0.6103, 1.0000}},
           {"MBonf", {0.0218, 0.0469, 0.1978, 0.8467, 1.0000, 1.0000, 1.0000, 1.0000, 1.0000}},
           {"ModTarone", {0.0295, 0.0679, 0.2640, 1.0000, 1.0000, 1.0000, 1.0000, 1.0000, 1.0000}},
           {"Sidak", {0.0851, 0.1428, 0.3863, 0.7993, 0.9051, 0.9942, 0.9981, 0.9998, 1.0000}},
           {"Bonf", {0.0885, 0.1527, 0.4753, 1.0000, 1.0000, 1.0000, 1.0000, 1.0000, 1.0000}},
       }},
      {"step-down",
       {
           {"MHolm", {0.0218, 0.0370, 0.1165, 0.4948, 0.9009, 1.0000, 1.0000, 1.0000, 1.0000}},
           {"TaroneHolm", {0.0295, 0.0509, 0.1584, 0.6536, 1.0000, 1.0000, 1.0000, 1.0000, 1.0000}},
           {"Holm", {0.0885, 0.1358, 0.3697, 0.9804, 1.0000, 1.0000, 1.0000, 1.0000, 1.0000}},
       }},
      {"step-up",
       {
           {"MHoch", {0.0218, 0.0370, 0.1165, 0.4948, 0.9009, 1.0000, 1.0000, 1.0000, 1.0000}},
           {"Hochberg", {0.0885, 0.1358, 0.3697, 0.9804, 1.0000, 1.0000, 1.0000, 1.0000, 1.0000}},
       }},
  };
}

std::vector<GoldenCell> check_goldens(std::span<const GoldenTable> tables) {
  const Family family = clinical_family();
  const auto order = family.order();
  std::vector<GoldenCell> cells;
  for (const auto& table : tables) {
    for (const auto& col : table.columns) {
      std::vector<double> actual;
      if (col.name == "P") {
        actual = family.observed();
      } else {
        const auto d = apply(parse_procedure(col.name), family, 0.05);
        if (!d.adjusted) throw std::logic_error(col.name + " has no adjusted p-values");
        actual = *d.adjusted;
      }
      if (col.by_rank.size() != family.size()) throw std::logic_error("golden column size mismatch: " + col.name);
      for (std::size_t r = 1; r <= family.size(); ++r) {
        const double a = actual[order[r - 1]];
        const double e = col.by_rank[r - 1];
        const double rounded = std::round(a * 1e4) / 1e4;
        cells.push_back({table.name, col.name, r, e, a, std::abs(rounded - e) < 1e-9});
      }
    }
  }
  return cells;
}

int report_goldens(std::span<const GoldenTable> tables, std::ostream& out) {
  const auto cells = check_goldens(tables);
  std::size_t failed = 0;
  for (const auto& c : cells) {
    out << (c.pass ? "PASS " : "FAIL ") << c.table << ' ' << c.column << " (" << c.rank << ")"
        << " expected=" << format_probability(c.expected, 4) << " actual=" << format_probability(c.actual, 4)
        << '\n';
    if (!c.pass) ++failed;
  }
  out << (failed == 0 ? "all " : "") << cells.size() - failed << '/' << cells.size() << " cells match\n";
  if (failed > 0) {
    out << "mismatched cells:";
    for (const auto& c : cells) {
      if (!c.pass) out << ' ' << c.table << ':' << c.column << '(' << c.rank << ')';
    }
    out << '\n';
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace dfwer
