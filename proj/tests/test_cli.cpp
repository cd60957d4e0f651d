#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dfwer/commands.hpp"
#include "dfwer/goldens.hpp"
#include "dfwer/io.hpp"

using namespace dfwer;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& body) {
  const auto dir = fs::temp_directory_path() / "dfwer_tests";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << body;
  return path;
}

std::string clinical_csv() {
  std::string s = "label,x1,x2\n";
  for (const auto& row : clinical_dataset()) s += row.label + "," + std::to_string(row.x1) + "," + std::to_string(row.x2) + "\n";
  return s;
}

AnalysisRequest clinical_request(std::vector<ProcedureId> procs) {
  AnalysisRequest req;
  req.input_path = write_temp("clinical.csv", clinical_csv()).string();
  req.n1 = kClinicalN1;
  req.n2 = kClinicalN2;
  req.procedures = std::move(procs);
  req.format = OutputFormat::Delimited;
  return req;
}

std::vector<std::vector<std::string>> run_delimited(const AnalysisRequest& req) {
  std::ostringstream out, err;
  REQUIRE(cmd_analyze(req, out, err) == kExitOk);
  std::istringstream in(out.str());
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) rows.push_back(split_fields(line));
  return rows;
}

const GoldenColumn& golden(const std::string& name) {
  static const auto tables = clinical_expectations();
  for (const auto& t : tables) {
    for (const auto& c : t.columns) {
      if (c.name == name) return c;
    }
  }
  throw std::logic_error("no golden column " + name);
}

void check_column(const std::vector<std::vector<std::string>>& rows, const std::string& name) {
  const auto& header = rows[0];
  const std::string key = name == "P" ? "p" : name;
  const auto col = static_cast<std::size_t>(std::find(header.begin(), header.end(), key) - header.begin());
  REQUIRE(col < header.size());
  const auto& expected = golden(name).by_rank;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    INFO(name, " rank ", r);
    CHECK(rows[r][col] == format_probability(expected[r - 1], 4));
  }
}

int analyze_file(const std::string& body, std::string& err_text) {
  AnalysisRequest req = clinical_request({ProcedureId::MBonf});
  req.input_path = write_temp("bad.csv", body).string();
  std::ostringstream out, err;
  const int code = cmd_analyze(req, out, err);
  err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("parse_counts") {
  std::istringstream ok("label,x1,x2\n# comment\n\nA,1,2\n B , 3 ,4\n");
  const auto rows = parse_counts(ok);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].label == "B");
  CHECK(rows[1].x1 == 3);

  std::istringstream headerless("A,1,2\n");
  CHECK(parse_counts(headerless).size() == 1);

  auto line_of = [](const std::string& body) -> std::size_t {
    std::istringstream in(body);
    try {
      parse_counts(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 999;
  };
  CHECK(line_of("label,x1,x2\nA,1,2\nB,1\n") == 3);
  CHECK(line_of("label,x1,x2\nA,1,-2\n") == 2);
  CHECK(line_of("label,x1,x2\nA,1.5,2\n") == 2);
  CHECK(line_of("label,x1,x2\n") == 0);
}

TEST_CASE("analyze reproduces the single-step and step-down reference columns") {
  const auto t1 = run_delimited(
      clinical_request({ProcedureId::MBonf, ProcedureId::ModTarone, ProcedureId::Sidak, ProcedureId::Bonf}));
  REQUIRE(t1.size() == 10);
  CHECK(t1[0][0] == "rank");
  CHECK(t1[1][1] == "AE1");
  check_column(t1, "P");
  for (const char* c : {"MBonf", "ModTarone", "Sidak", "Bonf"}) check_column(t1, c);

  const auto t2 = run_delimited(clinical_request({ProcedureId::MHolm, ProcedureId::TaroneHolm, ProcedureId::Holm}));
  for (const char* c : {"MHolm", "TaroneHolm", "Holm"}) check_column(t2, c);
}

TEST_CASE("delimited output at full precision round-trips") {
  auto req = clinical_request({ProcedureId::MBonf, ProcedureId::MHoch, ProcedureId::Tarone});
  req.precision = -1;
  const auto rows = run_delimited(req);
  const auto family = clinical_family();
  const auto mbonf = mbonf_adjusted(family), mhoch = mhoch_adjusted(family);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::size_t i = family.order()[r - 1];
    CHECK(std::stod(rows[r][4]) == family[i].observed_p);
    CHECK(std::stod(rows[r][5]) == mbonf[i]);
    CHECK(std::stod(rows[r][7]) == mhoch[i]);
    CHECK(rows[r][9] == "NA");
  }
}

TEST_CASE("table output marks rejections and counts them") {
  auto req = clinical_request({ProcedureId::MBonf, ProcedureId::Bonf});
  req.format = OutputFormat::Table;
  std::ostringstream out, err;
  REQUIRE(cmd_analyze(req, out, err) == kExitOk);
  const auto text = out.str();
  CHECK(text.find("0.0218*") != std::string::npos);
  CHECK(text.find("MBonf: 2 rejected") != std::string::npos);
  CHECK(text.find("Bonf: 0 rejected") != std::string::npos);
}

TEST_CASE("analyze usage errors exit 2") {
  std::string err;
  CHECK(analyze_file("", err) == kExitUsage);
  CHECK(err.find("no data rows") != std::string::npos);
  CHECK(analyze_file("label,x1,x2\nA,1,2\nB,x,2\n", err) == kExitUsage);
  CHECK(err.find("line 3") != std::string::npos);
  CHECK(analyze_file("label,x1,x2\nA,700,2\n", err) == kExitUsage);  // x1 > n1

  auto req = clinical_request({ProcedureId::MBonf});
  std::ostringstream out, e;
  req.alpha = 0.0;
  CHECK(cmd_analyze(req, out, e) == kExitUsage);
  req.alpha = 0.05;
  req.n1 = 0;
  CHECK(cmd_analyze(req, out, e) == kExitUsage);
  req.n1 = kClinicalN1;
  req.input_path = "/nonexistent/counts.csv";
  CHECK(cmd_analyze(req, out, e) == kExitUsage);
  CHECK_THROWS_AS(parse_procedure_list("MBonf,Nope"), UsageError);
}

TEST_CASE("BET analysis") {
  AnalysisRequest req;
  req.input_path = write_temp("bet.csv", "label,x1,x2\nA,0,3\nB,2,2\n").string();
  req.test_kind = TestKind::BET;
  req.procedures = {ProcedureId::MBonf};
  req.format = OutputFormat::Delimited;
  req.precision = -1;
  const auto rows = run_delimited(req);
  CHECK(std::stod(rows[1][4]) == doctest::Approx(0.125));
}

TEST_CASE("parse_sim_config") {
  auto parse = [](const std::string& body) {
    std::istringstream in(body);
    return parse_sim_config(in);
  };
  const auto req = parse("# scenario\ntest_kind = FET\nm=5\npi0=0.8\nN=150\nB=100\nseed=7\nprocedures=MBonf,Bonf\n");
  CHECK(req.config.m == 5);
  CHECK(req.config.sample_size == 150);
  CHECK(req.config.replicates == 100);
  CHECK(req.config.seed == 7);
  CHECK(req.procedures.size() == 2);
  CHECK(parse("test_kind=BET\nm=3\npi0=1\n").procedures.size() == all_procedures().size());

  auto message = [&](const std::string& body) -> std::string {
    try {
      parse(body);
    } catch (const UsageError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message("m=5\npi0=0.8\n").find("test_kind") != std::string::npos);
  CHECK(message("test_kind=FET\nm=5\npi0=0.8\n").find("'n'") != std::string::npos);
  CHECK(message("test_kind=FET\nm=5\npi0=abc\nN=3\n").find("pi0") != std::string::npos);
  CHECK(message("test_kind=BET\nm=5\npi0=0.5\nrho=1.5\n").find("rho") != std::string::npos);
  CHECK(message("test_kind=BET\nm=5\npi0=0.5\ncolour=red\n").find("colour") != std::string::npos);
  CHECK(message("test_kind=BET\nm=5\nm=6\npi0=0.5\n").find("duplicate") != std::string::npos);
  CHECK(message("test_kind=XYZ\nm=5\npi0=0.5\n").find("test_kind") != std::string::npos);
  CHECK(message("test_kind=BET\nm=5\npi0=0.5\nprocedures=Foo\n").find("procedures") != std::string::npos);
  CHECK(message("test_kind=BET\nm=-1\npi0=0.5\n").find("'m'") != std::string::npos);
}

TEST_CASE("simulate is reproducible and validates its config") {
  const auto path = write_temp("sim.cfg", "test_kind=BET\nm=5\npi0=0.6\nrho=0.3\nB=200\nseed=11\n").string();
  auto run = [&](std::optional<std::uint64_t> seed, int threads) {
    SimulateRequest req{path, seed, threads, 4};
    std::ostringstream out, err;
    REQUIRE(cmd_simulate(req, out, err) == kExitOk);
    return out.str();
  };
  const auto a = run(std::nullopt, 1);
  CHECK(a == run(std::nullopt, 3));
  CHECK(a != run(12, 1));
  CHECK(a.rfind("procedure,B,fwer_hat", 0) == 0);

  const auto one = write_temp("one.cfg", "test_kind=FET\nm=4\npi0=0.5\nN=30\nB=1\n").string();
  std::ostringstream out, err;
  REQUIRE(cmd_simulate({one, std::nullopt, 0, 4}, out, err) == kExitOk);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    const auto f = split_fields(line);
    CHECK((f[2] == "0.0000" || f[2] == "1.0000"));
    CHECK((f[4] == "0.0000" || f[4] == "1.0000"));
  }

  const auto bad = write_temp("bad.cfg", "test_kind=FET\nm=4\npi0=0.5\n").string();
  std::ostringstream o2, e2;
  CHECK(cmd_simulate({bad, std::nullopt, 0, 4}, o2, e2) == kExitUsage);
  CHECK(e2.str().find("'n'") != std::string::npos);
}

TEST_CASE("golden report") {
  const auto tables = clinical_expectations();
  std::ostringstream first, second;
  CHECK(report_goldens(tables, first) == 0);
  report_goldens(tables, second);
  CHECK(first.str() == second.str());
  const auto cells = check_goldens(tables);
  CHECK(cells.size() == 90);

  auto perturbed = tables;
  perturbed[1].columns[0].by_rank[2] += 0.0001;
  std::ostringstream out;
  CHECK(report_goldens(perturbed, out) == 1);
  CHECK(out.str().find("mismatched cells") != std::string::npos);
}
