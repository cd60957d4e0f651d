// dfwer: familywise error rate control for discrete tests.
//
//   dfwer analyze counts.csv --test fet --n1 600 --n2 650 --procedures MBonf,MHolm
//   dfwer simulate scenario.cfg [--seed N]
//   dfwer goldens

#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "dfwer/commands.hpp"

int main(int argc, char** argv) {
  using namespace dfwer;

  CLI::App app{"Familywise error rate controlling procedures for discrete data"};
  app.require_subcommand(1);

  AnalysisRequest analysis;
  std::string test = "fet";
  std::string procedures = "MBonf,ModTarone,Sidak,Bonf";
  std::string format = "table";
  std::string alternative;
  int precision = 4;

  auto* analyze = app.add_subcommand("analyze", "Adjust p-values of count data (label,x1,x2 rows)");
  analyze->add_option("input", analysis.input_path, "Delimited count file")->required();
  analyze->add_option("--test", test, "fet (Fisher exact) or bet (binomial exact)")
      ->check(CLI::IsMember({"fet", "bet"}, CLI::ignore_case));
  analyze->add_option("--n1", analysis.n1, "Group-1 size (FET)");
  analyze->add_option("--n2", analysis.n2, "Group-2 size (FET)");
  analyze->add_option("--procedures", procedures, "Comma-separated procedure names");
  analyze->add_option("--alpha", analysis.alpha, "Significance level");
  analyze->add_option("--format", format, "table or delimited")
      ->check(CLI::IsMember({"table", "delimited", "csv"}, CLI::ignore_case));
  analyze->add_option("--alternative", alternative, "two-sided, greater or less (group-1 count)")
      ->check(CLI::IsMember({"two-sided", "greater", "less"}, CLI::ignore_case));

  SimulateRequest sim;
  std::uint64_t seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo FWER and minimal power (key=value config)");
  simulate->add_option("config", sim.config_path, "Scenario file")->required();
  auto* seed_opt = simulate->add_option("--seed", seed, "Override the config seed");
  simulate->add_option("--threads", sim.threads, "Worker threads (0 = OpenMP default)");

  app.add_subcommand("goldens", "Check the embedded clinical example against reference tables");

  for (auto* sub : {analyze, simulate}) {
    sub->add_option("--precision", precision, "Decimals for probabilities; -1 prints full precision");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*analyze) {
    analysis.test_kind = CLI::detail::to_lower(test) == "bet" ? TestKind::BET : TestKind::FET;
    analysis.format = CLI::detail::to_lower(format) == "table" ? OutputFormat::Table : OutputFormat::Delimited;
    analysis.precision = precision;
    if (!alternative.empty()) {
      static const std::map<std::string, Alternative> kAlt{
          {"two-sided", Alternative::TwoSided}, {"greater", Alternative::Greater}, {"less", Alternative::Less}};
      analysis.alternative = kAlt.at(CLI::detail::to_lower(alternative));
    }
    try {
      analysis.procedures = parse_procedure_list(procedures);
    } catch (const UsageError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitUsage;
    }
    return cmd_analyze(analysis, std::cout, std::cerr);
  }
  if (*simulate) {
    if (*seed_opt) sim.seed = seed;
    sim.precision = precision;
    return cmd_simulate(sim, std::cout, std::cerr);
  }
  return cmd_goldens(std::cout);
}
