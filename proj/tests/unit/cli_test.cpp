#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <degenpde_cli/commands.hpp>
#include <degenpde_cli/config.hpp>
#include <degenpde_cli/csv.hpp>

#include "param_sets.hpp"

namespace fs = std::filesystem;
using namespace degenpde;
using namespace degenpde::cli;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("degenpde_") + info->name());
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    RunConfig config(const std::string& text, Command cmd, const std::string& sub = "out") const {
        RunConfig c = parse_config(text);
        c.command = cmd;
        c.output_dir = (dir_ / sub).string();
        return c;
    }

    fs::path dir_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string cfg_path(const char* name) { return std::string(DEGENPDE_CONFIG_DIR) + "/" + name; }

const char* kE1 = "k = 1\nm = 2\np = 2\nbeta = 3\n";
const char* kE2 = "k = 1\nm = 2\np = 2\nbeta = 5\na = 0.5\n";

}  // namespace

TEST(ParseConfig, DefaultsForMinimalConfig) {
    const RunConfig c = parse_config("k = 1\nm = 2\np = 2\n");
    EXPECT_EQ(c.problem.t0, 1.0);
    EXPECT_EQ(c.problem.a, 1.0);
    EXPECT_EQ(c.solver.M, 400);
    EXPECT_EQ(c.solver.dt, 1e-3);
    EXPECT_EQ(c.solver.t_end, 2.0);
    EXPECT_EQ(c.seed, 1u);
}

TEST(ParseConfig, ShippedTwoDimensionalConfig) {
    const RunConfig c = load_config(cfg_path("fig2a.cfg"));
    const ProblemParams f = fixtures::f2a();
    EXPECT_EQ(c.problem.k, f.k);
    EXPECT_EQ(c.problem.m, f.m);
    EXPECT_EQ(c.problem.p, f.p);
    EXPECT_EQ(c.problem.n, f.n);
    EXPECT_EQ(c.problem.n1, f.n1);
    EXPECT_EQ(c.problem.beta, f.beta);
    EXPECT_EQ(c.problem.N, f.N);
    EXPECT_FALSE(c.problem.source);
}

TEST(ParseConfig, AllShippedConfigsLoad) {
    for (const char* name : {"e1.cfg", "e2.cfg", "e3.cfg", "fig1a.cfg", "fig2a.cfg"})
        EXPECT_NO_THROW(load_config(cfg_path(name))) << name;
}

TEST(ParseConfig, BadNumberNamesTheLine) {
    try {
        parse_config("k = 1\nm = 2\n# comment\np = banana\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 4);
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
    }
}

TEST(ParseConfig, StructuralErrors) {
    auto line_of = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return e.line();
        }
        return -1;
    };
    EXPECT_EQ(line_of("k = 1\nm = 2\np = 2\nfoo = 3\n"), 4);   // unknown key
    EXPECT_EQ(line_of("k = 1\nk = 2\nm = 2\np = 2\n"), 2);     // duplicate
    EXPECT_EQ(line_of("k = 1\nm 2\np = 2\n"), 2);              // no '='
    EXPECT_EQ(line_of("k = 1\nm = 2\n"), 0);                   // p missing
    EXPECT_EQ(line_of("k = 1\nm = 2\np = 2\nn1 = 3\n"), 0);    // p > n + n1
    EXPECT_EQ(line_of("k = 1\nm = 2\np = 2\nM = 4\n"), 0);     // solver bound
}

TEST(ParseConfig, TrailingCommentsAndLists) {
    const RunConfig c = parse_config("k = 1 # one\nm = 2\np = 2\nsnapshot_times = 1.5, 2 ,3\nsource = off\n");
    EXPECT_EQ(c.solver.snapshot_times, (std::vector<double>{1.5, 2.0, 3.0}));
    EXPECT_FALSE(c.problem.source);
}

TEST(ParseConfig, RoundTripIsBitIdentical) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        ProblemParams pr;
        pr.p = 2.0 + 3.0 * u(rng);
        pr.q = 0.9 * u(rng);
        pr.k = 0.3 + 2.0 * u(rng);
        pr.m = 0.3 + 2.0 * u(rng);
        pr.N = 1 + static_cast<int>(rng() % 3);
        pr.n = 0.5 * u(rng);
        pr.n1 = (pr.p - pr.n - 0.1) * u(rng);
        pr.l = u(rng);
        pr.beta = 5.0 * u(rng);
        pr.a = 0.1 + u(rng);
        pr.t0 = 0.5 + u(rng);
        std::ostringstream text;
        text << "k = " << format_number(pr.k) << "\nm = " << format_number(pr.m) << "\np = " << format_number(pr.p)
             << "\nq = " << format_number(pr.q) << "\nn = " << format_number(pr.n)
             << "\nn1 = " << format_number(pr.n1) << "\nl = " << format_number(pr.l)
             << "\nbeta = " << format_number(pr.beta) << "\nN = " << pr.N << "\nt0 = " << format_number(pr.t0)
             << "\na = " << format_number(pr.a) << "\n";
        const DerivedConstants d1 = derive(pr);
        const DerivedConstants d2 = derive(parse_config(text.str()).problem);
        EXPECT_EQ(d1.m2, d2.m2);
        EXPECT_EQ(d1.beta2, d2.beta2);
        EXPECT_EQ(d1.gamma2, d2.gamma2);
        EXPECT_EQ(d1.b, d2.b);
        EXPECT_EQ(d1.l1, d2.l1);
        EXPECT_EQ(d1.l7, d2.l7);
        EXPECT_EQ(d1.xi_b, d2.xi_b);
        EXPECT_EQ(d1.beta2_crit, d2.beta2_crit);
    }
}

TEST(FormatNumber, SeventeenDigits) {
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(4.0), "4");
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(std::stod(format_number(M_PI)), M_PI);
}

TEST_F(CliTest, AnalyzeSubcritical) {
    std::ostringstream log;
    EXPECT_EQ(dispatch(config(kE1, Command::analyze), log), exit_ok);
    EXPECT_NE(log.str().find("verdict: subcritical"), std::string::npos) << log.str();
    const auto rows = read_csv(dir_ / "out" / "constants.csv");
    ASSERT_FALSE(rows.empty());
    EXPECT_EQ(rows[0], (std::vector<std::string>{"name", "value", "branch"}));
    bool found = false;
    for (const auto& r : rows)
        if (r[0] == "beta2_crit") {
            found = true;
            EXPECT_EQ(r[1], "4");
            EXPECT_EQ(r[2], "-");
        }
    EXPECT_TRUE(found);
}

TEST_F(CliTest, AnalyzeSupercriticalThreshold) {
    std::ostringstream log;
    EXPECT_EQ(dispatch(config(kE2, Command::analyze), log), exit_ok);
    EXPECT_NE(log.str().find("verdict: supercritical; globally solvable for a <= 0.84090"), std::string::npos)
        << log.str();
}

TEST_F(CliTest, AnalyzeCriticalBranchAndUndefined) {
    std::ostringstream log;
    EXPECT_EQ(dispatch(config("k = 1\nm = 1\np = 2\nbeta = 3\n", Command::analyze), log), exit_ok);
    const std::string text = slurp(dir_ / "out" / "constants.csv");
    EXPECT_NE(text.find("exponential profile branch"), std::string::npos);
    EXPECT_NE(text.find("gamma2,undefined,"), std::string::npos);
}

TEST_F(CliTest, ProfileSlow) {
    std::ostringstream log;
    EXPECT_EQ(dispatch(config(kE2, Command::profile), log), exit_ok);
    const auto rows = read_csv(dir_ / "out" / "profile.csv");
    ASSERT_EQ(rows.size(), 1002u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"xi", "f"}));
    EXPECT_EQ(std::stod(rows[1][1]), 0.5);
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (std::stod(rows[i][0]) >= std::sqrt(2.0)) EXPECT_EQ(std::stod(rows[i][1]), 0.0);
}

TEST_F(CliTest, ProfileFastHasPositiveTail) {
    std::ostringstream log;
    EXPECT_EQ(dispatch(config("k = 1\nm = 0.5\np = 2\nN = 3\nbeta = 2\n", Command::profile), log), exit_ok);
    const auto rows = read_csv(dir_ / "out" / "profile.csv");
    ASSERT_EQ(rows.size(), 1002u);
    EXPECT_EQ(std::stod(rows.back()[0]), 10.0);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(std::stod(rows[i][1]), 0.0);
}

TEST_F(CliTest, SolveE2Completes) {
    std::ostringstream log;
    const RunConfig c = config(std::string(kE2) + "t_end = 4\nsnapshot_times = 2, 3\n", Command::solve);
    EXPECT_EQ(dispatch(c, log), exit_ok);
    EXPECT_NE(slurp(dir_ / "out" / "summary.txt").find("termination = completed"), std::string::npos);
    const auto meta = read_csv(dir_ / "out" / "meta.csv");
    EXPECT_EQ(meta[0], (std::vector<std::string>{"step", "t", "picard_iters"}));
    ASSERT_EQ(meta.size(), 3001u);
    for (std::size_t i = 1; i < meta.size(); ++i) EXPECT_LE(std::stoi(meta[i][2]), 5);

    const auto snaps = read_csv(dir_ / "out" / "snapshots.csv");
    EXPECT_EQ(snaps[0], (std::vector<std::string>{"t", "r", "v", "u"}));
    EXPECT_EQ(snaps.size(), 1u + 4u * 401u);
    const auto front = read_csv(dir_ / "out" / "front.csv");
    EXPECT_EQ(front[0], (std::vector<std::string>{"t", "tau", "r_front"}));
    EXPECT_EQ(front.size(), 3002u);
}

TEST_F(CliTest, SolveUVariables) {
    std::ostringstream log;
    const RunConfig c = config("k = 1\nm = 1\np = 3\nq = 0.8\nsource = false\nt_end = 1.01\n", Command::solve);
    EXPECT_EQ(dispatch(c, log), exit_ok);
    const auto snaps = read_csv(dir_ / "out" / "snapshots.csv");
    for (std::size_t i = 1; i < snaps.size(); i += 37) {
        const double v = std::stod(snaps[i][2]);
        EXPECT_NEAR(std::stod(snaps[i][3]), std::pow(v, 5.0), 1e-15 + 1e-14 * std::pow(v, 5.0));
    }
}

TEST_F(CliTest, SolveE1BlowsUp) {
    std::ostringstream log;
    EXPECT_EQ(dispatch(config(std::string(kE1) + "t_end = 6\n", Command::solve), log), exit_ok);
    const std::string summary = slurp(dir_ / "out" / "summary.txt");
    EXPECT_NE(summary.find("termination = blowup"), std::string::npos) << summary;
    EXPECT_EQ(summary.find("termination_time = 6\n"), std::string::npos);
}

TEST_F(CliTest, SolveSingleTimeLevel) {
    std::ostringstream log;
    EXPECT_EQ(dispatch(config(std::string(kE2) + "t_end = 1\n", Command::solve), log), exit_ok);
    const auto snaps = read_csv(dir_ / "out" / "snapshots.csv");
    ASSERT_EQ(snaps.size(), 402u);
    for (std::size_t i = 1; i < snaps.size(); ++i) EXPECT_EQ(snaps[i][0], "1");
}

TEST_F(CliTest, PicardFailureExitCode) {
    std::ostringstream log;
    const RunConfig c = config(std::string(kE2) + "t_end = 1.01\npicard_max = 1\npicard_tol = 1e-300\n", Command::solve);
    EXPECT_EQ(dispatch(c, log), exit_solver_failure);
    EXPECT_NE(slurp(dir_ / "out" / "summary.txt").find("termination = picard_failure"), std::string::npos);
}

TEST_F(CliTest, VerifySubcriticalSkipsComparison) {
    std::ostringstream log;
    const RunConfig c = config(std::string(kE1) + "t_end = 6\nlemma_trials = 2\n", Command::verify, "nested/dir");
    const int code = dispatch(c, log);
    EXPECT_TRUE(code == exit_ok || code == exit_verification_failure);
    const auto rows = read_csv(dir_ / "nested" / "dir" / "verify.csv");
    EXPECT_EQ(rows[0], (std::vector<std::string>{"check", "passed", "worst_violation"}));
    std::map<std::string, std::string> status;
    for (std::size_t i = 1; i < rows.size(); ++i) status[rows[i][0]] = rows[i][1];
    EXPECT_EQ(status["supersolution_sign"], "skipped");
    EXPECT_EQ(status["comparison"], "skipped");
    EXPECT_EQ(status["bounded"], "skipped");
    EXPECT_EQ(status["blowup"], "true");
    EXPECT_EQ(status["convergence_classical"], "true");
    EXPECT_TRUE(fs::exists(dir_ / "nested" / "dir" / "verify_details.csv"));
}

TEST_F(CliTest, OutputsAreByteStable) {
    const std::string text = std::string(kE2) + "t_end = 1.2\nsnapshot_times = 1.1\n";
    std::ostringstream log;
    for (const char* sub : {"a", "b"}) {
        EXPECT_EQ(dispatch(config(text, Command::analyze, sub), log), exit_ok);
        EXPECT_EQ(dispatch(config(text, Command::profile, sub), log), exit_ok);
        EXPECT_EQ(dispatch(config(text, Command::solve, sub), log), exit_ok);
    }
    for (const char* f : {"constants.csv", "profile.csv", "snapshots.csv", "front.csv", "meta.csv", "summary.txt"}) {
        const std::string a = slurp(dir_ / "a" / f);
        EXPECT_FALSE(a.empty()) << f;
        EXPECT_EQ(a, slurp(dir_ / "b" / f)) << f;
        EXPECT_EQ(a.find('\r'), std::string::npos) << f;
    }
}
