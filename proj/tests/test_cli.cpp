/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "smckit/frames.hpp"
#include "smckit/report.hpp"
#include "smckit/sat.hpp"
#include "support.hpp"

using namespace smckit;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args)
{
    args.insert(args.begin(), "smckit");
    std::vector<const char *> argv;
    for (const auto & a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("smckit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string & name, const std::string & text) const
    {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    fs::path dir_;
};

const std::string kShift = test::model_path("shift3.smc");
const std::string kMutant = test::model_path("mutant.smc");
const std::string kFrames = test::model_path("shift3.frames.cert");

} // namespace

TEST_F(Cli, CheckEnginesOnShiftRegister)
{
    const std::vector<std::pair<std::string, std::string>> expected{
        {"forward", "SAFE k=4\n"}, {"backward", "SAFE k=1\n"}, {"sheeran1", "SAFE k=1\n"},
        {"kind", "SAFE k=0\n"},    {"oracle", "SAFE k=1\n"}};
    for (const auto & [engine, line] : expected) {
        const CliRun r = run({"check", kShift, "--engine", engine});
        EXPECT_EQ(r.code, cli::kSafe) << engine;
        EXPECT_EQ(r.out, line) << engine;
    }
}

TEST_F(Cli, PdrWritesItsCertificate)
{
    const CliRun r = run({"check", kShift, "--engine", "pdr", "--out-dir", dir_.string()});
    EXPECT_EQ(r.code, cli::kSafe);
    EXPECT_EQ(r.out.rfind("SAFE k=1\n", 0), 0U);
    const fs::path cert = dir_ / "shift3.cert";
    ASSERT_TRUE(fs::exists(cert));
    std::ifstream in(cert);
    std::ostringstream s;
    s << in.rdbuf();
    EXPECT_EQ(write_certificate(parse_certificate(s.str(), 3)), "frame 0\nframe 1\n1 2 3 0\nframe 2\n1 2 3 0\n");
    EXPECT_EQ(run({"certify", kShift, cert.string(), "--k", "1"}).code, cli::kSafe);
}

TEST_F(Cli, BmcVerdicts)
{
    const CliRun none = run({"check", kShift, "--engine", "bmc", "--k-max", "16"});
    EXPECT_EQ(none.code, cli::kUnknown);
    EXPECT_EQ(none.out, "UNKNOWN k=16: no counterexample up to k=16\n");

    const CliRun cex = run({"check", kMutant, "--engine", "bmc", "--k", "0"});
    EXPECT_EQ(cex.code, cli::kUnsafe);
    EXPECT_EQ(cex.out, "UNSAFE k=0\nstep 0: 000\n");
}

TEST_F(Cli, JsonOutputRoundTrips)
{
    const CliRun r = run({"check", kMutant, "--engine", "forward", "--format", "json"});
    EXPECT_EQ(r.code, cli::kUnsafe);
    const report::CheckReport c = report::parse_check(r.out);
    EXPECT_EQ(c.verdict, "UNSAFE");
    EXPECT_EQ(c.trace, (std::vector<std::string>{"000"}));
    EXPECT_EQ(c.system, "mutant");

    const CliRun cert = run({"certify", kShift, kFrames, "--k", "0", "--format", "json"});
    EXPECT_EQ(cert.code, cli::kUnsafe);
    const report::CertifyReport cr = report::parse_certify(cert.out);
    ASSERT_EQ(cr.items.size(), 5U);
    EXPECT_FALSE(cr.items[4].pass);
    EXPECT_EQ(cr.items[4].witness, (std::vector<std::string>{"001"}));
}

TEST_F(Cli, CertifyText)
{
    const CliRun ok = run({"certify", kShift, kFrames, "--k", "1"});
    EXPECT_EQ(ok.code, cli::kSafe);
    EXPECT_EQ(ok.out,
              "(a) PASS\n(b) PASS\n(c) PASS\n(d) PASS\n(e) PASS\nexists-form of (e): holds (reported only)\n");

    const CliRun bad = run({"certify", kShift, kFrames, "--k", "0"});
    EXPECT_EQ(bad.code, cli::kUnsafe);
    EXPECT_NE(bad.out.find("(e) FAIL at i=0, witness 001\n"), std::string::npos);

    // A certificate with no frames reads every R_i as I.
    const CliRun empty = run({"certify", kShift, write("empty.cert", "c nothing\n"), "--k", "0"});
    EXPECT_EQ(empty.code, cli::kUnsafe);
    EXPECT_NE(empty.out.find("(d) FAIL"), std::string::npos);
}

TEST_F(Cli, ExitCodesForBadInput)
{
    EXPECT_EQ(run({"check", (dir_ / "missing.smc").string()}).code, cli::kUsage);
    EXPECT_EQ(run({"check", kShift, "--engine", "nope"}).code, cli::kUsage);
    EXPECT_EQ(run({"check", kShift, "--k", "1", "--k-max", "3"}).code, cli::kUsage);
    EXPECT_EQ(run({}).code, cli::kUsage);

    const CliRun syntax = run({"check", write("bad.smc", "system x\nwidth 2\ninit (b0\ntrans true\nprop true\n")});
    EXPECT_EQ(syntax.code, cli::kParse);
    EXPECT_NE(syntax.err.find("3:"), std::string::npos) << syntax.err;

    EXPECT_EQ(run({"check", write("next.smc", "system x\nwidth 1\ninit b0'\ntrans true\nprop true\n")}).code,
              cli::kParse);
    EXPECT_EQ(run({"certify", kShift, write("bad.cert", "frame 0\nframe 1\n9 0\n"), "--k", "0"}).code, cli::kParse);

    // PDR needs a clausal property.
    const CliRun nc = run({"check", write("iff.smc", "system x\nwidth 2\ninit b0 & b1\ntrans b0' & b1'\nprop b0 <-> b1\n"),
                        "--engine", "pdr"});
    EXPECT_EQ(nc.code, cli::kUnknown);
}

TEST_F(Cli, ExportNamesEveryLeaf)
{
    const CliRun r = run({"export", kShift, "--engine", "bmc", "--k", "2", "--out-dir", dir_.string()});
    ASSERT_EQ(r.code, 0);
    std::vector<std::string> expected;
    for (int i = 0; i <= 2; ++i)
        for (const char * ext : {".cnf", ".smt2"})
            expected.push_back((dir_ / ("shift3.bmc.k2.q" + std::to_string(i) + ext)).string());
    std::vector<std::string> got;
    std::istringstream lines(r.out);
    for (std::string l; std::getline(lines, l);) got.push_back(l);
    EXPECT_EQ(got, expected);
    for (const auto & p : expected) EXPECT_TRUE(fs::exists(p)) << p;

    // Each exported CNF is unsatisfiable: the bounded queries are valid.
    for (int i = 0; i <= 2; ++i) {
        std::ifstream in(dir_ / ("shift3.bmc.k2.q" + std::to_string(i) + ".cnf"));
        std::ostringstream s;
        s << in.rdbuf();
        EXPECT_FALSE(solve(parse_dimacs(s.str())).sat()) << i;
    }
    EXPECT_EQ(run({"export", kShift, "--engine", "pdr", "--k", "1"}).code, cli::kUsage);
}

TEST_F(Cli, SatSubcommand)
{
    const CliRun sat = run({"sat", write("a.cnf", "p cnf 2 2\n1 2 0\n-1 0\n")});
    EXPECT_EQ(sat.code, 10);
    EXPECT_EQ(parse_solver_output(sat.out, 2).model, (std::vector<bool>{false, true}));
    EXPECT_EQ(run({"sat", write("b.cnf", "p cnf 1 2\n1 0\n-1 0\n")}).code, 20);
}

TEST_F(Cli, ExternalSolverFromEnvironment)
{
    const std::string cmd = std::string(SMCKIT_BIN) + " sat {input}";
    ASSERT_EQ(setenv("SMCKIT_SOLVER", cmd.c_str(), 1), 0);
    const CliRun r = run({"check", kShift, "--engine", "forward"});
    unsetenv("SMCKIT_SOLVER");
    EXPECT_EQ(r.code, cli::kSafe);
    EXPECT_EQ(r.out, "SAFE k=4\n");

    const CliRun broken = run({"check", kShift, "--engine", "forward", "--solver-cmd", "echo nonsense"});
    EXPECT_EQ(broken.code, cli::kUnknown);
}

TEST_F(Cli, FuzzSmallRun)
{
    const CliRun ok = run({"fuzz", "--count", "20", "--trials", "20", "--converse-trials", "2000", "--format", "json"});
    EXPECT_EQ(ok.code, 0) << ok.out;
    const report::FuzzReport r = report::parse_fuzz(ok.out);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.soundness.systems, 20U);

    EXPECT_EQ(run({"fuzz", "--count", "20", "--trials", "5", "--inject-liar"}).code, 1);
    EXPECT_EQ(run({"fuzz", "--count", "0", "--trials", "0"}).code, 0);
    EXPECT_EQ(run({"fuzz", "--min-width", "0"}).code, cli::kUsage);
    EXPECT_EQ(run({"fuzz", "--min-width", "5", "--max-width", "4"}).code, cli::kUsage);
}
