#include <gtest/gtest.h>

#include <clocale>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "resample/cli/cli.hpp"
#include "resample/cli/report.hpp"

using namespace resample;
using namespace resample::cli;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

class Workspace : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = std::filesystem::temp_directory_path()
            / ("resample_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text)
    {
        const auto p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::filesystem::path dir_;
};

nlohmann::json parse(const std::string& text) { return nlohmann::json::parse(text); }

const std::string regression_csv =
    "y,x1,x2\n3.1,1,0.5\n4.2,1,1.7\n5.9,1,2.2\n7.1,1,3.4\n8.3,1,3.9\n9.7,1,5.1\n11.2,1,5.8\n";

}  // namespace

TEST_F(Workspace, FitOnOnesColumnReturnsMean)
{
    const auto data = write("ones.csv", "y,x1\n1,1\n2,1\n3,1\n");
    const auto r = run_cli({"--format", "json", "regress", "fit", "--data", data});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = parse(r.out);
    EXPECT_DOUBLE_EQ(j["table"]["rows"][0][1].get<double>(), 2.0);
    EXPECT_EQ(j["config"]["argv"][0], "resample");
}

TEST_F(Workspace, ExitCodes)
{
    EXPECT_EQ(run_cli({"regress"}).code, 2);
    EXPECT_EQ(run_cli({"bogus"}).code, 2);
    EXPECT_EQ(run_cli({"regress", "fit", "--data", path("missing.csv")}).code, 3);
    const auto bad = write("bad.csv", "y,x1\n1,abc\n");
    EXPECT_EQ(run_cli({"regress", "fit", "--data", bad}).code, 3);
    const auto collinear = write("col.csv", "y,x1,x2\n1,1,2\n2,2,4\n3,3,6\n");
    const auto r = run_cli({"regress", "fit", "--data", collinear});
    EXPECT_EQ(r.code, 4);
    const auto err = parse(r.err);
    EXPECT_EQ(err["error"]["kind"], "singular-design");
    EXPECT_EQ(err["error"]["exit_code"], 4);
}

TEST_F(Workspace, RandomizedCommandsNeedSeed)
{
    const auto data = write("d.csv", regression_csv);
    const auto r = run_cli({"regress", "resample", "--data", data, "--k", "4", "--realizations", "5"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(run_cli({"--seed", "3", "regress", "resample", "--data", data, "--k", "4", "--realizations", "5"})
                  .code,
              0);
}

TEST_F(Workspace, SeededCommandsReplayExactly)
{
    const auto data = write("d.csv", regression_csv);
    const auto demand = write("demand.csv", "value\n2.1\n1.4\n3.3\n0.9\n2.6\n1.8\n");
    const auto supply = write("supply.csv", "value\n2.4\n2.7\n2.2\n2.9\n2.5\n2.3\n");
    const std::vector<std::vector<std::string>> commands{
        {"--seed", "7", "regress", "median", "--data", data, "--x", "1,2.5", "--k", "4", "--realizations", "21"},
        {"--seed", "7", "failure", "table", "--rate", "0.5", "--dist", "triangular:0,2,4", "--t", "5", "--k", "4",
         "--l", "4", "--realizations", "2000"},
        {"--seed", "7", "renewal", "variance", "--demand", demand, "--supply", supply, "--m", "3", "--k", "1",
         "--realizations", "10"},
    };
    for (const auto& cmd : commands) {
        ::setenv("RESAMPLE_THREADS", "1", 1);
        const auto a = run_cli(cmd);
        ::setenv("RESAMPLE_THREADS", "3", 1);
        const auto b = run_cli(cmd);
        ::unsetenv("RESAMPLE_THREADS");
        ASSERT_EQ(a.code, 0) << a.err;
        EXPECT_EQ(a.out, b.out);
    }
}

TEST_F(Workspace, OutWritesFile)
{
    const auto data = write("d.csv", regression_csv);
    const auto target = path("report.csv");
    const auto r = run_cli({"--out", target, "regress", "screen", "--data", data});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(target);
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first.rfind("# command:", 0), 0u);
}

TEST_F(Workspace, InventoryOptimizeFindsThree)
{
    const auto econ = write("econ.json", R"({"c_d": 2, "c_s": 5, "b0": 0, "b1": 0.2})");
    const auto r = run_cli({"--format", "json", "inventory", "optimize", "--economics", econ, "--m", "5", "--k-min",
                            "0", "--k-max", "6", "--source", "truth", "--demand-gen", "normal:2,1", "--supply-gen",
                            "normal:2.5,0.2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(parse(r.out)["results"]["k_star"], 3);
}

TEST_F(Workspace, FailureTableMatchesTruthAtLargeSample)
{
    const auto r = run_cli({"--seed", "1", "--format", "json", "failure", "table", "--rate", "0.5", "--dist",
                            "triangular:0,2,4", "--t", "5", "--k", "8", "--l", "8", "--realizations", "100000"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = parse(r.out);
    const auto& cols = j["table"]["columns"];
    std::size_t res = 0, real = 0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c] == "resampling") {
            res = c;
        }
        if (cols[c] == "real") {
            real = c;
        }
    }
    ASSERT_GT(res, 0u);
    ASSERT_GT(real, 0u);
    for (const auto& row : j["table"]["rows"]) {
        EXPECT_NEAR(row[res].get<double>(), row[real].get<double>(), 0.005) << row[0];
    }
}

TEST_F(Workspace, PlotFromReport)
{
    const auto econ = write("econ.json", R"({"c_d": 2, "c_s": 5, "b0": 0, "b1": 0.2})");
    const auto report = path("inv.json");
    ASSERT_EQ(run_cli({"--format", "json", "--out", report, "inventory", "optimize", "--economics", econ, "--m", "5",
                       "--source", "truth", "--demand-gen", "normal:2,1", "--supply-gen", "normal:2.5,0.2"})
                  .code,
              0);
    const auto r = run_cli({"plot", "--report", report, "--x", "k", "--series", "income"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "x,series,value");
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
        if (!line.empty()) {
            ++rows;
            EXPECT_NE(line.find(",income,"), std::string::npos);
        }
    }
    EXPECT_EQ(rows, 6u);
    EXPECT_EQ(run_cli({"plot", "--report", report, "--x", "k", "--series", "nope"}).code, 2);
}

TEST(PlotData, SinglePoint)
{
    const std::string csv = "# command: x\nk,v\n1,2.5\n";
    EXPECT_EQ(emit_plot_data(csv, "k", {"v"}), "x,series,value\n1,v,2.5\n");
}

TEST(Report, CsvIgnoresLocale)
{
    Report rep;
    rep.argv = {"resample"};
    rep.table.columns = {"a"};
    rep.table.rows = {{Json(0.5)}};
    const char* previous = std::setlocale(LC_NUMERIC, nullptr);
    const std::string saved = previous ? previous : "C";
    const bool switched = std::setlocale(LC_NUMERIC, "de_DE.UTF-8") != nullptr;
    const auto text = to_csv(rep);
    std::setlocale(LC_NUMERIC, saved.c_str());
    EXPECT_NE(text.find("0.5"), std::string::npos);
    EXPECT_EQ(text.find("0,5"), std::string::npos);
    if (!switched) {
        GTEST_LOG_(INFO) << "de_DE locale unavailable; checked under the default locale only";
    }
}

TEST(Parsing, GeneratorLiterals)
{
    EXPECT_NEAR(parse_generator("normal:2,1").mean(), 2.0, 1e-15);
    EXPECT_NEAR(parse_generator("exponential:0.5").mean(), 2.0, 1e-15);
    EXPECT_NEAR(parse_generator("triangular:0,2,4").mean(), 2.0, 1e-15);
    EXPECT_THROW(parse_generator("weibull:1"), Error);
    EXPECT_THROW(parse_generator("normal:2"), Error);
    const auto v = parse_vector("1, 2.5,-3");
    ASSERT_EQ(v.size(), 3u);
    EXPECT_EQ(v[2], -3.0);
}

TEST(ExitCodes, Mapping)
{
    EXPECT_EQ(exit_code(ErrorKind::usage), 2);
    EXPECT_EQ(exit_code(ErrorKind::data), 3);
    EXPECT_EQ(exit_code(ErrorKind::invalid_input), 4);
    EXPECT_EQ(exit_code(ErrorKind::singular_design), 4);
    EXPECT_EQ(exit_code(ErrorKind::invalid_plan), 4);
}
