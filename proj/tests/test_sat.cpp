/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "smckit/encoders.hpp"
#include "smckit/error.hpp"
#include "smckit/sat.hpp"
#include "support.hpp"

using namespace smckit;

namespace {

CnfFormula random_3cnf(std::mt19937_64 & rng, int vars, int clauses)
{
    CnfFormula cnf;
    cnf.num_vars = vars;
    for (int c = 0; c < clauses; ++c) {
        std::vector<int> clause;
        for (int l = 0; l < 3; ++l) {
            const int v = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(vars));
            clause.push_back(rng() % 2 ? v : -v);
        }
        cnf.clauses.push_back(clause);
    }
    return cnf;
}

bool brute_force_sat(const CnfFormula & cnf)
{
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << cnf.num_vars); ++a) {
        bool all = true;
        for (const auto & c : cnf.clauses) {
            bool any = false;
            for (int lit : c) {
                const bool v = ((a >> (std::abs(lit) - 1)) & 1U) != 0;
                if ((lit > 0) == v) {
                    any = true;
                    break;
                }
            }
            if (!any) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

// n+1 pigeons into n holes.
CnfFormula pigeonhole(int n)
{
    CnfFormula cnf;
    auto var = [n](int p, int h) { return p * n + h + 1; };
    cnf.num_vars = (n + 1) * n;
    for (int p = 0; p <= n; ++p) {
        std::vector<int> c;
        for (int h = 0; h < n; ++h) c.push_back(var(p, h));
        cnf.clauses.push_back(c);
    }
    for (int h = 0; h < n; ++h)
        for (int p = 0; p <= n; ++p)
            for (int q = p + 1; q <= n; ++q) cnf.clauses.push_back({-var(p, h), -var(q, h)});
    return cnf;
}

std::string read_file(const std::string & path)
{
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST(Solve, Trivial)
{
    CnfFormula unit;
    unit.num_vars = 1;
    unit.clauses = {{1}, {-1}};
    EXPECT_FALSE(solve(unit).sat());

    const CnfFormula empty;
    const SatResult r = solve(empty);
    EXPECT_TRUE(r.sat());
    EXPECT_TRUE(r.model.empty());

    CnfFormula empty_clause;
    empty_clause.num_vars = 2;
    empty_clause.clauses = {{1, 2}, {}};
    EXPECT_FALSE(solve(empty_clause).sat());
}

TEST(Solve, RandomThreeCnfMatchesTruthTable)
{
    std::mt19937_64 rng(2000);
    int sat = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const int vars = 3 + static_cast<int>(rng() % 18);
        // Clause/variable ratio around the 4.26 threshold gives both outcomes.
        const int clauses = static_cast<int>(vars * (3.0 + static_cast<double>(rng() % 250) / 100.0));
        const CnfFormula cnf = random_3cnf(rng, vars, clauses);
        const SatResult r = solve(cnf);
        ASSERT_EQ(r.sat(), brute_force_sat(cnf)) << "trial " << trial;
        if (r.sat()) {
            ++sat;
            EXPECT_TRUE(satisfies(cnf, r.model));
        }
    }
    EXPECT_GT(sat, 200);
    EXPECT_LT(sat, 1800);
}

TEST(Solve, DeterministicForEqualSeeds)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const CnfFormula cnf = random_3cnf(rng, 40, 180);
        SolverOptions o;
        o.seed = static_cast<std::uint64_t>(trial);
        const SatResult a = solve(cnf, o);
        const SatResult b = solve(cnf, o);
        EXPECT_EQ(a.sat(), b.sat());
        EXPECT_EQ(a.stats.conflicts, b.stats.conflicts);
        EXPECT_EQ(a.model, b.model);
    }
}

TEST(Solve, ConflictBudgetIsNotUnsat)
{
    SolverOptions o;
    o.conflict_budget = 10;
    try {
        solve(pigeonhole(8), o);
        FAIL() << "pigeonhole(8) decided within 10 conflicts";
    } catch (const Error & e) {
        EXPECT_EQ(e.kind(), ErrorKind::ResourceLimit);
    }
    EXPECT_FALSE(solve(pigeonhole(5)).sat());
}

TEST(Dimacs, Format)
{
    CnfFormula cnf;
    cnf.num_vars = 2;
    cnf.clauses = {{1, -2}};
    EXPECT_EQ(export_dimacs(cnf), "p cnf 2 1\n1 -2 0\n");
    EXPECT_EQ(export_dimacs(CnfFormula{}), "p cnf 0 0\n");

    const CnfFormula back = parse_dimacs("c comment\np cnf 3 2\n1 -3 0\n2\n3 0\n");
    EXPECT_EQ(back.num_vars, 3);
    EXPECT_EQ(back.clauses, (std::vector<std::vector<int>>{{1, -3}, {2, 3}}));
}

TEST(SolverOutput, Parse)
{
    EXPECT_FALSE(parse_solver_output("s UNSATISFIABLE\n", 3).sat());
    EXPECT_FALSE(parse_solver_output("UNSAT\n", 3).sat());

    const SatResult a = parse_solver_output("c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 3);
    ASSERT_TRUE(a.sat());
    EXPECT_EQ(a.model, (std::vector<bool>{true, false, true}));

    const SatResult b = parse_solver_output("SAT\n-1 2 0\n", 2);
    ASSERT_TRUE(b.sat());
    EXPECT_EQ(b.model, (std::vector<bool>{false, true}));

    for (const char * bad : {"", "hello\n", "s SATISFIABLE\nv 9 0\n", "s SATISFIABLE\nv x 0\n"}) {
        try {
            parse_solver_output(bad, 3);
            ADD_FAILURE() << "accepted: " << bad;
        } catch (const Error & e) {
            EXPECT_EQ(e.kind(), ErrorKind::MalformedSolverOutput) << bad;
        }
    }
    try {
        parse_solver_output("s UNKNOWN\n", 3);
        FAIL();
    } catch (const Error & e) {
        EXPECT_EQ(e.kind(), ErrorKind::ResourceLimit);
    }
}

TEST(SolverOutput, RecordedTranscriptsRoundTrip)
{
    std::mt19937_64 rng(50);
    for (int seed = 0; seed < 50; ++seed) {
        const CnfFormula cnf = random_3cnf(rng, 12, 50);
        SolverOptions o;
        o.seed = static_cast<std::uint64_t>(seed);
        const SatResult direct = solve(cnf, o);
        const CnfFormula reread = parse_dimacs(export_dimacs(cnf));
        EXPECT_EQ(reread.clauses, cnf.clauses);
        const SatResult replay = parse_solver_output(format_solver_output(solve(reread, o)), cnf.num_vars);
        EXPECT_EQ(replay.sat(), direct.sat());
        if (replay.sat()) EXPECT_TRUE(satisfies(cnf, replay.model));
    }
}

TEST(ExternalSolver, BinaryAdapterAgrees)
{
    const ExternalSolver ext(std::string(SMCKIT_BIN) + " sat {input}");
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const CnfFormula cnf = random_3cnf(rng, 10, 43);
        EXPECT_EQ(ext.solve(cnf).sat(), solve(cnf).sat());
    }
}

TEST(ExternalSolver, OutputFileTemplateAndFailures)
{
    CnfFormula cnf;
    cnf.num_vars = 1;
    cnf.clauses = {{1}};
    const ExternalSolver with_output(std::string(SMCKIT_BIN) + " sat {input} > {output}");
    EXPECT_TRUE(with_output.solve(cnf).sat());

    try {
        ExternalSolver("echo garbage").solve(cnf);
        FAIL();
    } catch (const Error & e) {
        EXPECT_EQ(e.kind(), ErrorKind::MalformedSolverOutput);
    }
    // A model that violates the formula is caught.
    try {
        ExternalSolver("printf 's SATISFIABLE\\nv -1 0\\n'").solve(cnf);
        FAIL();
    } catch (const Error & e) {
        EXPECT_EQ(e.kind(), ErrorKind::MalformedSolverOutput);
    }
}

TEST(Validity, ShiftRegisterBoundedDepthZero)
{
    const TransitionSystem sys = test::shift3();
    EXPECT_TRUE(check_validity(bounded_query(sys, 0), 3).valid());
    EXPECT_TRUE(check_validity(ValidityQuery{0, TimedFormula::top(), "top"}, 3).valid());
}

TEST(Validity, MutantRefutedByStateZero)
{
    const QueryOutcome o = check_validity(bounded_query(test::mutant(), 0), 3);
    ASSERT_FALSE(o.valid());
    EXPECT_EQ(o.witness->values(), (std::vector<std::uint64_t>{0}));
}

TEST(Validity, WitnessFalsifiesBody)
{
    const TransitionSystem sys = test::shift3();
    const QueryOutcome o = check_validity(forward_query(sys, 3), 3);
    ASSERT_FALSE(o.valid());
    const StateSeq & w = *o.witness;
    EXPECT_FALSE(forward_query(sys, 3).body.evaluate(
        [&](const TimedVar & v) { return w.at(v.step).bit(v.bit); }));
}

TEST(Validity, ExternalSolverThroughConfig)
{
    SolverConfig config;
    config.external_command = std::string(SMCKIT_BIN) + " sat {input}";
    const TransitionSystem sys = test::shift3();
    for (unsigned k = 0; k <= 5; ++k)
        EXPECT_EQ(check_validity(forward_query(sys, k), 3, config).valid(), k >= 4) << k;
}

TEST(Smt2, GoldenBoundedQueries)
{
    const TransitionSystem sys = test::shift3();
    for (unsigned i = 0; i <= 2; ++i) {
        const std::string golden =
            read_file(std::string(SMCKIT_GOLDEN_DIR) + "/shift3.bounded.i" + std::to_string(i) + ".smt2");
        ASSERT_FALSE(golden.empty());
        EXPECT_EQ(export_smt2(bounded_query(sys, i), sys.width()), golden) << "depth " << i;
    }
}
