#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "gcomp/fixtures.hpp"
#include "gcomp/vector_set.hpp"

using namespace gcomp;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct Csv {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  double at(std::size_t row, const std::string& col) const {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == col) return rows.at(row).at(c);
    }
    throw std::out_of_range(col);
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> parts;
  std::stringstream s(line);
  std::string p;
  while (std::getline(s, p, ',')) parts.push_back(p);
  return parts;
}

// Comments only before the header, every row the header's width, every field a full number.
Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) throw std::runtime_error("empty line");
    if (line[0] == '#') {
      if (!csv.header.empty()) throw std::runtime_error("comment after header");
      csv.comments.push_back(line);
    } else if (csv.header.empty()) {
      csv.header = split(line);
    } else {
      const auto fields = split(line);
      if (fields.size() != csv.header.size()) throw std::runtime_error("ragged row: " + line);
      std::vector<double> row;
      for (const auto& f : fields) {
        std::size_t used = 0;
        const double v = std::stod(f, &used);
        if (used != f.size()) throw std::runtime_error("bad field " + f);
        row.push_back(v);
      }
      csv.rows.push_back(std::move(row));
    }
  }
  return csv;
}

}  // namespace

TEST(Cli, EstimateOutsideUnitIntervalExitsTwo) {
  const auto r = call({"estimate", "--t", "1.5", "--samples", "100"});
  EXPECT_EQ(r.code, cli::kValidation);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, ParseErrorsExitTwo) {
  EXPECT_EQ(call({"estimate"}).code, cli::kValidation);
  EXPECT_EQ(call({"curve", "--sign", "2"}).code, cli::kValidation);
  EXPECT_EQ(call({"curve", "--variant", "other"}).code, cli::kValidation);
  EXPECT_EQ(call({"frobnicate"}).code, cli::kValidation);
  EXPECT_EQ(call({"curve", "--samples", "1"}).code, cli::kValidation);
  EXPECT_EQ(call({"curve", "--t-grid", "0:1"}).code, cli::kValidation);
  EXPECT_EQ(call({"curve", "--t-grid", "0.1:1:0.1", "--samples", "50"}).code, cli::kValidation);
  EXPECT_EQ(call({"estimate", "--t", "0.5", "--set", "/nonexistent/matrix.txt"}).code, cli::kValidation);
  EXPECT_EQ(call({"--help"}).code, cli::kOk);
}

TEST(Cli, StandardRouteAtEndpointIsRejected) {
  EXPECT_EQ(call({"estimate", "--t", "1", "--route", "standard", "--samples", "100"}).code, cli::kValidation);
  EXPECT_EQ(call({"estimate", "--t", "0.005", "--route", "standard", "--samples", "100"}).code, cli::kValidation);
  EXPECT_EQ(call({"estimate", "--t", "1", "--route", "computed", "--samples", "100"}).code, cli::kOk);
}

TEST(Cli, CurveIsByteIdenticalAcrossThreadCounts) {
  const std::vector<std::string> base{"curve", "--samples", "3000", "--t-grid", "0:1:0.1", "--threads"};
  std::string first;
  for (const char* th : {"1", "4", "8"}) {
    auto args = base;
    args.push_back(th);
    const auto r = call(args);
    ASSERT_EQ(r.code, 0) << r.err;
    if (first.empty()) first = r.out;
    EXPECT_EQ(r.out, first) << "threads=" << th;
  }
}

TEST(Cli, CurveCsvShape) {
  const auto r = call({"curve", "--samples", "2000", "--t-grid", "0:0.5:0.1", "--set", "x_minus", "--variant", "general"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Csv csv = parse_csv(r.out);
  const std::vector<std::string> expected{"t",
                                          "dpsi_standard",
                                          "dpsi_standard_se",
                                          "dpsi_computed",
                                          "dpsi_computed_se",
                                          "psi_int_standard",
                                          "psi_int_computed",
                                          "psi_direct",
                                          "psi_direct_se"};
  EXPECT_EQ(csv.header, expected);
  ASSERT_EQ(csv.rows.size(), 6u);
  EXPECT_EQ(csv.at(0, "psi_int_standard"), csv.at(0, "psi_direct"));
  EXPECT_EQ(csv.at(0, "psi_int_computed"), csv.at(0, "psi_direct"));
  for (std::size_t k = 0; k < csv.rows.size(); ++k) EXPECT_NEAR(csv.at(k, "t"), 0.1 * k, 1e-12);

  bool seed = false, generator = false;
  for (const auto& c : csv.comments) {
    seed = seed || c.rfind("# seed: 20240531", 0) == 0;
    generator = generator || c.find("philox4x32-10") != std::string::npos;
  }
  EXPECT_TRUE(seed);
  EXPECT_TRUE(generator);
}

TEST(Cli, LiftedCurveCarriesAdjustedColumns) {
  const auto r = call({"curve", "--samples", "1000", "--t-grid", "0:0.2:0.1", "--variant", "lifted", "--c3", "0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Csv csv = parse_csv(r.out);
  ASSERT_EQ(csv.header.size(), 12u);
  EXPECT_EQ(csv.header[9], "adjusted_int_standard");
  EXPECT_EQ(csv.header[11], "adjusted_direct");
  const double psi = csv.at(0, "psi_direct");
  EXPECT_NEAR(csv.at(0, "adjusted_direct"), (std::log(psi) / 0.3 - 0.15) / std::sqrt(5.0), 1e-12);
}

TEST(Cli, SeedFlagAndEnvironment) {
  const auto a = call({"estimate", "--t", "0.3", "--samples", "500", "--seed", "7"});
  ASSERT_EQ(a.code, 0);
  EXPECT_NE(a.out.find("\"seed\": 7,"), std::string::npos);
  EXPECT_NE(a.out.find("\"seed_source\": \"flag\""), std::string::npos);

  ::setenv("GCOMP_SEED", "7", 1);
  const auto b = call({"estimate", "--t", "0.3", "--samples", "500"});
  ::setenv("GCOMP_SEED", "x7", 1);
  const auto bad = call({"estimate", "--t", "0.3", "--samples", "500"});
  ::unsetenv("GCOMP_SEED");
  ASSERT_EQ(b.code, 0);
  EXPECT_NE(b.out.find("\"seed_source\": \"env GCOMP_SEED\""), std::string::npos);
  EXPECT_EQ(a.out.substr(0, a.out.find("\"metadata\"")), b.out.substr(0, b.out.find("\"metadata\"")));
  EXPECT_EQ(bad.code, cli::kValidation);
}

TEST(Cli, ReproduceUnknownTableExitsTwo) {
  EXPECT_EQ(call({"reproduce", "table99"}).code, cli::kValidation);
}

TEST(Cli, ReproduceFailingCellsExitOne) {
  // 200 replications cannot meet the table tolerances.
  const auto r = call({"reproduce", "table5", "--samples", "200"});
  EXPECT_EQ(r.code, cli::kCheckFailed);
  EXPECT_NE(r.out.find("FAILED"), std::string::npos);
}

TEST(Cli, ChainOnNonUnitSetExitsTwo) {
  EXPECT_EQ(call({"limits", "--set", "x_minus", "--check", "chain", "--samples", "100"}).code, cli::kValidation);
}

TEST(Cli, LimitsReportsCarryProvenance) {
  const auto r = call({"limits", "--check", "slepian", "--check", "lifted-gordon", "--samples", "2000", "--seed", "11"});
  ASSERT_EQ(r.code, 0) << r.out;
  for (const char* key : {"\"check\": \"lifted-gordon\"", "\"margin\"", "\"combined_se\"", "\"seed\": 11", "\"lhs\"",
                          "\"rhs\"", "\"pass\": true"}) {
    EXPECT_NE(r.out.find(key), std::string::npos) << key;
  }
}

TEST(Cli, ExportFixtureRoundTrips) {
  for (bool raw : {false, true}) {
    std::vector<std::string> args{"export-fixture", "x_minus"};
    if (raw) args.push_back("--raw");
    const auto r = call(args);
    ASSERT_EQ(r.code, 0);
    std::istringstream in(r.out);
    const Matrix back = read_matrix(in);
    EXPECT_EQ(back, raw ? fixture_raw("x_minus") : fixture("x_minus").to_matrix());
  }
}

TEST(Cli, MatrixFileInputAndOutFile) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto matrix = dir / "gcomp_cli_set.txt";
  const auto csv = dir / "gcomp_cli_curve.csv";
  {
    std::ofstream f(matrix);
    f << "# two vectors in R^2\n1 0\n0 2\n";
  }
  const auto r = call({"curve", "--set", matrix.string(), "--normalize", "--samples", "500", "--t-grid", "0:0.2:0.1",
                       "--out", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(csv);
  std::stringstream text;
  text << f.rdbuf();
  const Csv parsed = parse_csv(text.str());
  EXPECT_EQ(parsed.rows.size(), 3u);
  std::filesystem::remove(matrix);
  std::filesystem::remove(csv);
}

TEST(Cli, VerifyIdentitiesUsesOneBasedIndices) {
  const auto r = call({"verify-identities", "--variant", "lifted", "--m", "5", "--samples", "20000"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("\"i\": 10"), std::string::npos);
  EXPECT_EQ(r.out.find("\"i\": 0"), std::string::npos);
  EXPECT_NE(r.out.find("u4-linear"), std::string::npos);
}

TEST(Cli, BinaryExitCodes) {
  const std::string bin = GCOMP_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int s = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status("estimate --t 1.5"), 2);
  EXPECT_EQ(status("estimate --t 0.5 --samples 200"), 0);
  EXPECT_EQ(status("reproduce nope"), 2);
}
