#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "oracle_values.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(DELTANLS_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, {}};
    std::string out;
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("deltanls_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, SolveDoublyCriticalSidecar) {
    const auto r = run("solve --p 6 --q 4 --omega 1 --out " + path("gs.csv"));
    ASSERT_EQ(r.code, 0);
    const std::string csv = slurp(path("gs.csv"));
    EXPECT_EQ(csv.rfind("x,u\n", 0), 0u);
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    const json side = json::parse(slurp(path("gs.json")));
    EXPECT_EQ(side["schema"], 1);
    EXPECT_NEAR(side["mass"].get<double>(), oracle::kMuStar, 1e-12);
    EXPECT_NEAR(side["energy"].get<double>(), 0.0, 1e-12);
    EXPECT_NEAR(side["t_bar"].get<double>(), oracle::kTBar64, 1e-14);
    EXPECT_TRUE(side.contains("shift_a"));
    EXPECT_EQ(side["omega"], 1.0);
    EXPECT_EQ(side["meta"]["command"], "solve");
}

TEST_F(Cli, SolvePointwiseProfile) {
    ASSERT_EQ(run("solve --q 3 --mass 2 --grid-n 101 --half-width 10 --out " + path("d.csv")).code, 0);
    const json side = json::parse(slurp(path("d.json")));
    EXPECT_NEAR(side["omega"].get<double>(), 0.25, 1e-15);
    EXPECT_TRUE(side["t_bar"].is_null());
    std::istringstream csv(slurp(path("d.csv")));
    std::string line;
    std::getline(csv, line);
    int rows = 0;
    while (std::getline(csv, line)) {
        const auto comma = line.find(',');
        const double x = std::stod(line.substr(0, comma)), u = std::stod(line.substr(comma + 1));
        EXPECT_NEAR(u, std::exp(-std::abs(x) / 2), 1e-15) << line;
        ++rows;
    }
    EXPECT_EQ(rows, 101);
}

TEST_F(Cli, SolveSummaryToStdoutAndJsonFormat) {
    const auto r = run("solve --p 4 --q 3 --omega 1");
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(json::parse(r.out)["mass"].get<double>(), oracle::kMass43, 1e-13);
    ASSERT_EQ(run("solve --p 4 --q 3 --omega 1 --grid-n 11 --format json --out " + path("gs.json")).code, 0);
    const json doc = json::parse(slurp(path("gs.json")));
    EXPECT_EQ(doc["profile"]["u"].size(), 11u);
}

TEST_F(Cli, SolveRefusals) {
    const auto r = run("solve --p 6 --q 4 --mass 1");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("verdict: NoMinimizerZeroInfimum"), std::string::npos);
    EXPECT_EQ(run("solve --p 4 --q 3").code, 1);
    EXPECT_EQ(run("solve --p 4 --q 3 --mass 1 --omega 1").code, 1);
    EXPECT_EQ(run("solve --p 7 --q 3 --omega 1").code, 1);
    EXPECT_EQ(run("solve --p 4 --q 3 --omega 1 --grid-n 100").code, 1);
    EXPECT_EQ(run("solve --p 4 --q 3 --omega 1 --format xml").code, 1);
    EXPECT_EQ(run("bogus").code, 1);
}

TEST_F(Cli, MinimizeMatchesAnalytic) {
    const auto r = run("minimize --p 4 --q 3 --mass 1 --out " + path("m.csv"));
    ASSERT_EQ(r.code, 0);
    const json side = json::parse(slurp(path("m.json")));
    EXPECT_TRUE(side["converged"].get<bool>());
    const double e = side["energy"], a = side["analytic"]["energy"];
    EXPECT_LE(std::abs(e - a) / std::abs(a), 1e-4);
    EXPECT_LE(std::abs(a - oracle::kMinimizer[1].energy), 1e-12);
    for (const char* key : {"multiplier_estimate", "el_residual", "iterations", "interior_residual", "jump_residual"})
        EXPECT_TRUE(side.contains(key)) << key;
}

TEST_F(Cli, MinimizePointwiseOnGivenGrid) {
    const auto r = run("minimize --q 3 --mass 2 --grid-n 12001 --half-width 60");
    ASSERT_EQ(r.code, 0);
    const json doc = json::parse(r.out);
    EXPECT_NEAR(doc["energy"].get<double>(), -1.0 / 12.0, 1e-4);
    EXPECT_EQ(doc["grid"]["count"], 12001);
}

TEST_F(Cli, MinimizeExitCodes) {
    const auto refused = run("minimize --p 6 --q 3 --mass 2.8");
    EXPECT_EQ(refused.code, 2);
    EXPECT_NE(refused.out.find("verdict: UnboundedBelow"), std::string::npos);
    EXPECT_EQ(run("minimize --p 4 --q 3 --omega 1").code, 1);

    ASSERT_EQ(run("minimize --p 4 --q 3 --mass 1 --max-iter 2 --out " + path("nc.csv")).code, 3);
    const json side = json::parse(slurp(path("nc.json")));
    EXPECT_FALSE(side["converged"].get<bool>());
    EXPECT_TRUE(fs::exists(path("nc.csv")));
}

TEST_F(Cli, PhaseSweeps) {
    const auto r = run("phase --p 6 --q 4 --mass-min 0.1 --mass-max 3 --steps 30");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("mu,verdict,infimum,critical_mass\n", 0), 0u);
    EXPECT_NE(r.out.find(",ThresholdFamily,"), std::string::npos);

    const auto d4 = run("phase --q 4 --mass-min 1 --mass-max 3 --steps 5");
    EXPECT_NE(d4.out.find("2,ThresholdFamily,zero,2\n"), std::string::npos);

    ASSERT_EQ(run("phase --p 4 --q 3 --mass-min 0.5 --mass-max 5 --steps 10 --format json --out " + path("ph.json")).code,
              0);
    const json doc = json::parse(slurp(path("ph.json")));
    EXPECT_EQ(doc["rows"].size(), 10u);
    for (const auto& row : doc["rows"]) EXPECT_EQ(row["verdict"], "UniqueGroundState");

    EXPECT_EQ(run("phase --p 6 --q 4 --mass-min 3 --mass-max 1 --steps 10").code, 1);
    EXPECT_EQ(run("phase --p 6 --q 4 --mass-min 1 --mass-max 3 --steps 1").code, 1);
    EXPECT_EQ(run("phase --p 6 --q 4 --mass-min 1 --mass-max 3").code, 1);
}

TEST_F(Cli, VerifySubsetAndTightened) {
    const auto r = run("verify --only matching");
    ASSERT_EQ(r.code, 0);
    const json doc = json::parse(r.out);
    EXPECT_TRUE(doc["passed"].get<bool>());
    for (const auto& c : doc["checks"]) EXPECT_NE(c["name"].get<std::string>().find("matching"), std::string::npos);

    const auto tight = run("verify --only interior-ode --only jump --tolerance-scale 1e-3");
    EXPECT_EQ(tight.code, 4);
    EXPECT_EQ(json::parse(tight.out)["checks"].size(), 2u);
    EXPECT_EQ(run("verify --only nothing-matches").code, 1);
}

TEST_F(Cli, VerifyDefaultRunPasses) {
    ASSERT_EQ(run("verify --out " + path("report.json")).code, 0);
    const json doc = json::parse(slurp(path("report.json")));
    EXPECT_GE(doc["checks"].size(), 10u);
    for (const auto& c : doc["checks"]) EXPECT_TRUE(c["passed"].get<bool>()) << c["name"];
}

TEST_F(Cli, ConfigFile) {
    {
        std::ofstream cfg(path("cfg.json"));
        cfg << R"({"command": "solve", "p": 6, "q": 4, "omega": 1, "grid_n": 11, "half-width": 5})";
    }
    const auto r = run("--config " + path("cfg.json"));
    ASSERT_EQ(r.code, 0);
    const json doc = json::parse(r.out);
    EXPECT_EQ(doc["grid"]["count"], 11);
    EXPECT_EQ(doc["grid"]["half_width"], 5.0);

    // Command-line flags override the file.
    const json over = json::parse(run("solve --config " + path("cfg.json") + " --omega 2").out);
    EXPECT_EQ(over["omega"], 2.0);

    EXPECT_EQ(run("--config " + path("missing.json")).code, 1);
    {
        std::ofstream bad(path("bad.json"));
        bad << "{not json";
    }
    EXPECT_EQ(run("--config " + path("bad.json")).code, 1);
}

TEST_F(Cli, ArtifactsAreByteDeterministic) {
    ASSERT_EQ(run("minimize --p 3 --q 3 --mass 1 --grid-n 2001 --out " + path("a.csv")).code, 0);
    ASSERT_EQ(run("minimize --p 3 --q 3 --mass 1 --grid-n 2001 --out " + path("b.csv")).code, 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
    ASSERT_EQ(run("phase --p 6 --q 3 --mass-min 1 --mass-max 4 --steps 7 --out " + path("p1.csv")).code, 0);
    ASSERT_EQ(run("phase --p 6 --q 3 --mass-min 1 --mass-max 4 --steps 7 --out " + path("p2.csv")).code, 0);
    EXPECT_EQ(slurp(path("p1.csv")), slurp(path("p2.csv")));
}
