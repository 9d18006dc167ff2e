#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "famrisk/cli.hpp"
#include "famrisk/dataset.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using famrisk::cli::run;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// "quantity,value" rows.
std::map<std::string, std::string> csv_pairs(const std::string& text) {
  std::map<std::string, std::string> pairs;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    pairs[line.substr(0, comma)] = line.substr(comma + 1);
  }
  return pairs;
}

// "key   value" rows; notes skipped.
std::map<std::string, std::string> table_pairs(const std::string& text) {
  std::map<std::string, std::string> pairs;
  std::istringstream in(text);
  std::string key, value;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("note:", 0) == 0) continue;
    std::istringstream fields(line);
    fields >> key >> value;
    pairs[key] = value;
  }
  return pairs;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Solve, TesticularCancer) {
  const auto r = invoke({"solve", "--frr1", "5.88", "--frr2", "21.71", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto v = csv_pairs(r.out);
  EXPECT_NEAR(std::stod(v.at("irr")), 30.6, 0.1);
  EXPECT_NEAR(std::stod(v.at("q")), 0.010, 0.0011);
  EXPECT_EQ(v.at("iterations").find('.'), std::string::npos);
}

TEST(Solve, DegenerateExitsZero) {
  const auto r = invoke({"solve", "--frr1", "1", "--frr2", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("degenerate"), std::string::npos);
}

TEST(Solve, InfeasibleExitsTwo) {
  const auto r = invoke({"solve", "--frr1", "3", "--frr2", "2"});
  EXPECT_EQ(r.code, famrisk::cli::kInfeasible);
  EXPECT_NE(r.err.find("infeasible"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Solve, InvalidInputIsUsageError) {
  EXPECT_EQ(invoke({"solve", "--frr1", "abc", "--frr2", "2"}).code, famrisk::cli::kUsageError);
  EXPECT_EQ(invoke({"solve", "--frr1", "2"}).code, famrisk::cli::kUsageError);
  EXPECT_EQ(invoke({"solve", "--frr1", "nan", "--frr2", "3"}).code, famrisk::cli::kUsageError);
  EXPECT_EQ(invoke({"solve", "--frr1", "2", "--frr2", "3", "--format", "xml"}).code,
            famrisk::cli::kUsageError);
  EXPECT_EQ(invoke({}).code, famrisk::cli::kUsageError);
}

TEST(Solve, FormatsCarryIdenticalNumbers) {
  const std::vector<std::string> base = {"solve", "--frr1", "2.96", "--frr2", "7.71"};
  auto with = [&](const std::string& format) {
    auto args = base;
    args.insert(args.end(), {"--format", format});
    const auto r = invoke(args);
    EXPECT_EQ(r.code, 0);
    return r.out;
  };
  const auto table = table_pairs(with("table"));
  const auto csv = csv_pairs(with("csv"));
  const auto json = nlohmann::json::parse(with("json"));
  ASSERT_EQ(table.size(), csv.size());
  for (const auto& [key, value] : csv) {
    EXPECT_EQ(table.at(key), value) << key;
    EXPECT_EQ(json.at(key).get<double>(), std::stod(value)) << key;
  }
}

TEST(FitBeta, Parkinson) {
  const auto r = invoke({"fit-beta", "--risk", "0.01", "--frr", "2.3", "--top", "10%",
                         "--top", "1", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j.at("alpha").get<double>(), 0.75, 0.005);
  EXPECT_NEAR(j.at("beta").get<double>(), 74.0, 0.5);
  EXPECT_NEAR(j.at("gini").get<double>(), 0.55, 0.005);
  EXPECT_TRUE(j.contains("top_share_10%"));
  EXPECT_TRUE(j.contains("median_risk_ratio_1%"));
}

TEST(FitBeta, PointMass) {
  const auto r = invoke({"fit-beta", "--risk", "0.5", "--frr", "1", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  const auto v = csv_pairs(r.out);
  EXPECT_EQ(v.at("gini"), "0");
  EXPECT_EQ(v.at("alpha"), "");
}

TEST(FitBeta, InfeasibleCitesBound) {
  const auto r = invoke({"fit-beta", "--risk", "0.002", "--frr", "600"});
  EXPECT_EQ(r.code, famrisk::cli::kInfeasible);
  EXPECT_NE(r.err.find("E[P^2] <= E[P]"), std::string::npos);
}

TEST(FitBeta, BadTopFraction) {
  EXPECT_EQ(invoke({"fit-beta", "--risk", "0.01", "--frr", "2", "--top", "150"}).code,
            famrisk::cli::kUsageError);
}

TEST(Curves, SingleUnitPoint) {
  const auto r = invoke({"curves", "--sweep", "irr", "--q", "0.01", "--points", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "irr,frr1,frr2\n1,1,1\n");
}

TEST(Curves, QSweepPeaksAtSmallQ) {
  const auto r = invoke({"curves", "--sweep", "q", "--irr", "20", "--from", "0.001",
                         "--to", "0.999", "--points", "999", "--affected", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "q,frr1");
  double best = 0.0, best_q = 0.0;
  while (std::getline(in, line)) {
    const double q = std::stod(line.substr(0, line.find(',')));
    const double f = std::stod(line.substr(line.find(',') + 1));
    if (f > best) {
      best = f;
      best_q = q;
    }
  }
  EXPECT_LT(best_q, 0.1);
}

TEST(Curves, InvalidRangeIsUsageError) {
  EXPECT_EQ(invoke({"curves", "--sweep", "irr", "--q", "0.01", "--from", "5", "--to", "1"}).code,
            famrisk::cli::kUsageError);
  EXPECT_EQ(invoke({"curves", "--sweep", "sideways", "--q", "0.01"}).code,
            famrisk::cli::kUsageError);
}

TEST(Curves, LorenzToFile) {
  const fs::path dir = fresh_dir("famrisk_cli_curves");
  fs::create_directories(dir);
  const auto r = invoke({"curves", "--model", "beta", "--sweep", "lorenz", "--risk", "0.01",
                         "--frr", "1.5", "--frr", "6", "--points", "3", "--out",
                         (dir / "lorenz.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string text = read_file(dir / "lorenz.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')), "u,lorenz_frr_1.5,lorenz_frr_6");
  fs::remove_all(dir);
}

TEST(Curves, UnwritableOutputIsIoError) {
  const auto r = invoke({"curves", "--sweep", "irr", "--q", "0.01", "--out",
                         "/nonexistent-dir/x/y.csv"});
  EXPECT_EQ(r.code, famrisk::cli::kIoError);
}

TEST(Simulate, NoHeterogeneity) {
  const auto r = invoke({"simulate", "--model", "dichotomous", "--q", "0.2", "--irr", "1",
                         "--families", "200000", "--seed", "3", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j.at("frr1").get<double>(), 1.0, 3.0 * j.at("frr1_se").get<double>());
  EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 3u);
}

TEST(Simulate, DeterministicPerSeed) {
  const std::vector<std::string> args = {"simulate", "--model", "beta", "--alpha", "0.75",
                                         "--beta", "74", "--families", "100000", "--seed", "11"};
  EXPECT_EQ(invoke(args).out, invoke(args).out);
}

TEST(Simulate, SeedFromEnvironment) {
  const std::vector<std::string> args = {"simulate", "--model", "beta", "--risk", "0.01",
                                         "--frr", "2.3", "--families", "20000", "--format", "csv"};
  ::setenv(famrisk::cli::kSeedEnvVar, "4242", 1);
  const auto r = invoke(args);
  ::unsetenv(famrisk::cli::kSeedEnvVar);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(csv_pairs(r.out).at("seed"), "4242");
  EXPECT_EQ(csv_pairs(invoke(args).out).at("seed"), std::to_string(famrisk::cli::kDefaultSeed));
}

TEST(Simulate, ZeroConditioningEventsWarns) {
  const auto r = invoke({"simulate", "--model", "dichotomous", "--q", "0.5", "--irr", "1",
                         "--low-risk", "1e-12", "--families", "1000"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("undefined"), std::string::npos);
  EXPECT_NE((r.out + r.err).find("no conditioning events"), std::string::npos) << r.out;
}

TEST(Simulate, ConflictingFlagsRejected) {
  const auto r = invoke({"simulate", "--model", "dichotomous", "--q", "0.1", "--irr", "3",
                         "--low-risk", "0.01", "--population-risk", "0.02"});
  EXPECT_EQ(r.code, famrisk::cli::kUsageError);
}

TEST(Report, BundledReproducesEverything) {
  const auto r = invoke({"report", "--bundled"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("Familial risk report: 15 records, 26 of 26 published values reproduced", 0),
            0u);
}

TEST(Report, ByteIdenticalAcrossRuns) {
  const auto a = invoke({"report", "--bundled", "--seed", "7"});
  const auto b = invoke({"report", "--bundled", "--seed", "7"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Report, EmptyDataset) {
  const fs::path dir = fresh_dir("famrisk_cli_empty");
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "empty.csv");
    out << famrisk::kDatasetHeader << '\n';
  }
  const auto r = invoke({"report", "--data", (dir / "empty.csv").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0 records"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Report, MissingDataFileIsIoError) {
  EXPECT_EQ(invoke({"report", "--data", "/nonexistent/diseases.csv"}).code,
            famrisk::cli::kIoError);
}

TEST(Report, MalformedDataIsUsageError) {
  const fs::path dir = fresh_dir("famrisk_cli_bad");
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "bad.csv");
    out << famrisk::kDatasetHeader << "\nA,sibs,two,3,,src,,,,\n";
  }
  const auto r = invoke({"report", "--data", (dir / "bad.csv").string()});
  EXPECT_EQ(r.code, famrisk::cli::kUsageError);
  EXPECT_NE(r.err.find("row 2"), std::string::npos) << r.err;
  fs::remove_all(dir);
}

TEST(Report, AllRecordsFailingExitsTwo) {
  const fs::path dir = fresh_dir("famrisk_cli_infeasible");
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "bad.csv");
    out << famrisk::kDatasetHeader << "\nA,sibs,3,2,,src,,,,\n";
  }
  const auto r = invoke({"report", "--data", (dir / "bad.csv").string()});
  EXPECT_EQ(r.code, famrisk::cli::kInfeasible);
  EXPECT_NE(r.out.find("Errors"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Report, FigureCount) {
  const fs::path dir = fresh_dir("famrisk_cli_figures");
  const auto r = invoke({"report", "--bundled", "--figures", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  int svg = 0, csv = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    svg += entry.path().extension() == ".svg";
    csv += entry.path().extension() == ".csv";
  }
  // One figure per continuous record plus the three-FRR comparison.
  EXPECT_EQ(svg, 11);
  EXPECT_EQ(csv, 10);
  EXPECT_TRUE(fs::exists(dir / "lorenz_comparison.svg"));
  const std::string first = read_file(dir / "lorenz_parkinson_s_disease.svg");
  ASSERT_EQ(invoke({"report", "--bundled", "--figures", dir.string()}).code, 0);
  EXPECT_EQ(read_file(dir / "lorenz_parkinson_s_disease.svg"), first);
  fs::remove_all(dir);
}

TEST(Help, ListsEveryFlag) {
  const auto r = invoke({"simulate", "--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* flag : {"--model", "--q", "--irr", "--low-risk", "--population-risk",
                           "--alpha", "--beta", "--risk", "--frr", "--family-size",
                           "--families", "--batches", "--seed", "--format", "--precision"}) {
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
  }
  const auto report = invoke({"report", "--help"});
  for (const char* flag : {"--data", "--bundled", "--figures", "--out", "--seed", "--format"}) {
    EXPECT_NE(report.out.find(flag), std::string::npos) << flag;
  }
}

TEST(Help, UnknownFlagFailsBeforeComputation) {
  const auto r = invoke({"report", "--bundled", "--bogus"});
  EXPECT_EQ(r.code, famrisk::cli::kUsageError);
  EXPECT_TRUE(r.out.empty());
}

TEST(Binary, ExitCodesPropagate) {
  const std::string exe = FAMRISK_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((exe + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  EXPECT_EQ(status("solve --frr1 2.96 --frr2 7.71"), 0);
  EXPECT_EQ(status("solve --frr1 3 --frr2 2"), 2);
  EXPECT_EQ(status("solve --frr1 x --frr2 2"), 1);
  EXPECT_EQ(status("report --data /nonexistent.csv"), 3);
}
