#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dfwer/exact_tests.hpp"
#include "dfwer/procedures.hpp"
#include "dfwer/simulation.hpp"

namespace dfwer {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;

enum class OutputFormat { Table, Delimited };

struct AnalysisRequest {
  std::string input_path;
  TestKind test_kind = TestKind::FET;
  std::int64_t n1 = 0;  // FET group sizes
  std::int64_t n2 = 0;
  std::vector<ProcedureId> procedures;
  double alpha = 0.05;
  OutputFormat format = OutputFormat::Table;
  int precision = 4;  // < 0: full precision
  // Defaults to two-sided for FET and Less for BET.
  std::optional<Alternative> alternative;
};

int cmd_analyze(const AnalysisRequest& request, std::ostream& out, std::ostream& err);

struct SimulateRequest {
  std::string config_path;
  std::optional<std::uint64_t> seed;  // overrides the config file
  int threads = 0;
  int precision = 4;
};

int cmd_simulate(const SimulateRequest& request, std::ostream& out, std::ostream& err);

int cmd_goldens(std::ostream& out);

/// Delimited simulation report, one row per procedure.
void write_sim_results(std::ostream& out, const std::vector<SimResult>& results, int precision);

}  // namespace dfwer
