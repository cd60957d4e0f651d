#include "dfwer/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dfwer/goldens.hpp"
#include "dfwer/io.hpp"

namespace dfwer {

namespace {

Family build_family(const AnalysisRequest& req, const std::vector<CountRow>& rows) {
  std::vector<ExactTestResult> results;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    try {
      if (req.test_kind == TestKind::FET) {
        results.push_back(fisher_exact({row.x1, row.x2, req.n1, req.n2},
                                       req.alternative.value_or(Alternative::TwoSided)));
      } else {
        results.push_back(binomial_exact({row.x1, row.x2}, req.alternative.value_or(Alternative::Less)));
      }
    } catch (const std::invalid_argument& e) {
      throw UsageError("row " + std::to_string(i + 1) + " ('" + row.label + "'): " + e.what());
    }
    labels.push_back(row.label);
  }
  return Family::from_results(results, std::move(labels));
}

std::string adjusted_cell(const Decision& d, std::size_t i, int precision) {
  return d.adjusted ? format_probability((*d.adjusted)[i], precision) : std::string("NA");
}

}  // namespace

int cmd_analyze(const AnalysisRequest& req, std::ostream& out, std::ostream& err) {
  try {
    if (!(req.alpha > 0.0 && req.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
    if (req.test_kind == TestKind::FET && (req.n1 <= 0 || req.n2 <= 0)) {
      throw UsageError("FET analysis needs positive --n1 and --n2");
    }
    if (req.procedures.empty()) throw UsageError("no procedures requested");
    std::ifstream in(req.input_path);
    if (!in) throw UsageError("cannot open input file '" + req.input_path + "'");
    const auto rows = [&] {
      try {
        return parse_counts(in);
      } catch (const ParseError& e) {
        throw UsageError(req.input_path + ": " + e.what());
      }
    }();

    const Family family = build_family(req, rows);
    std::vector<Decision> decisions;
    for (auto id : req.procedures) decisions.push_back(apply(id, family, req.alpha));

    const int prec = req.precision;
    if (req.format == OutputFormat::Delimited) {
      out << "rank,label,x1,x2,p";
      for (const auto& d : decisions) out << ',' << to_string(d.procedure) << ',' << to_string(d.procedure) << "_reject";
      out << '\n';
      for (std::size_t r = 1; r <= family.size(); ++r) {
        const std::size_t i = family.order()[r - 1];
        out << r << ',' << rows[i].label << ',' << rows[i].x1 << ',' << rows[i].x2 << ','
            << format_probability(family[i].observed_p, prec);
        for (const auto& d : decisions) out << ',' << adjusted_cell(d, i, prec) << ',' << (d.rejected[i] ? 1 : 0);
        out << '\n';
      }
      return kExitOk;
    }

    std::size_t label_width = 5;
    for (const auto& row : rows) label_width = std::max(label_width, row.label.size());
    const int cell = std::max(prec < 0 ? 22 : prec + 4, 11);
    out << std::left << std::setw(6) << "(i)" << std::setw(static_cast<int>(label_width) + 2) << "label" << std::right
        << std::setw(6) << "x1" << std::setw(6) << "x2" << std::setw(cell) << "P";
    for (const auto& d : decisions) out << std::setw(cell) << to_string(d.procedure) << ' ';
    out << '\n';
    for (std::size_t r = 1; r <= family.size(); ++r) {
      const std::size_t i = family.order()[r - 1];
      out << std::left << std::setw(6) << ("(" + std::to_string(r) + ")")
          << std::setw(static_cast<int>(label_width) + 2) << rows[i].label << std::right << std::setw(6) << rows[i].x1
          << std::setw(6) << rows[i].x2 << std::setw(cell) << format_probability(family[i].observed_p, prec);
      for (const auto& d : decisions) out << std::setw(cell) << adjusted_cell(d, i, prec) << (d.rejected[i] ? '*' : ' ');
      out << '\n';
    }
    out << "alpha = " << req.alpha << "; * marks rejected hypotheses\n";
    for (const auto& d : decisions) out << to_string(d.procedure) << ": " << d.rejections() << " rejected\n";
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

void write_sim_results(std::ostream& out, const std::vector<SimResult>& results, int precision) {
  out << "procedure,B,fwer_hat,fwer_stderr,minpow_hat,minpow_stderr,minpow_defined,mean_rejections\n";
  for (const auto& r : results) {
    out << to_string(r.procedure) << ',' << r.replicates << ',' << format_probability(r.fwer_hat, precision) << ','
        << format_probability(r.fwer_stderr, precision) << ',' << format_probability(r.minpow_hat, precision) << ','
        << format_probability(r.minpow_stderr, precision) << ',' << (r.minpow_defined ? 1 : 0) << ','
        << format_probability(r.mean_rejections, precision) << '\n';
  }
}

int cmd_simulate(const SimulateRequest& req, std::ostream& out, std::ostream& err) {
  try {
    std::ifstream in(req.config_path);
    if (!in) throw UsageError("cannot open config file '" + req.config_path + "'");
    auto sim = [&] {
      try {
        return parse_sim_config(in);
      } catch (const ParseError& e) {
        throw UsageError(req.config_path + ": " + e.what());
      }
    }();
    if (req.seed) sim.config.seed = *req.seed;
    write_sim_results(out, estimate(sim.config, sim.procedures, req.threads), req.precision);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cmd_goldens(std::ostream& out) {
  const auto tables = clinical_expectations();
  return report_goldens(tables, out) == 0 ? kExitOk : kExitMismatch;
}

}  // namespace dfwer
