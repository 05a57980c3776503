/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "smckit/error.hpp"
#include "smckit/harness.hpp"
#include "smckit/oracle.hpp"
#include "smckit/pdr.hpp"
#include "support.hpp"

using namespace smckit;

namespace {

Clause clause(std::initializer_list<int> lits)
{
    Clause c;
    for (int l : lits) c.lits.push_back(BitLit{static_cast<unsigned>(std::abs(l) - 1), l > 0});
    normalize(c.lits);
    return c;
}

FrameSeq shift3_frames()
{
    std::ifstream in(test::model_path("shift3.frames.cert"));
    std::ostringstream s;
    s << in.rdbuf();
    return parse_certificate(s.str(), 3);
}

bool holds_everywhere(const Formula & f, unsigned width)
{
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << width); ++s)
        if (!eval(f, State{s}, std::nullopt, width)) return false;
    return true;
}

// C holds on I, and R_i & C & T -> C' over every state pair.
bool relatively_inductive_by_enumeration(const FrameSeq & frames, std::size_t i, const TransitionSystem & sys,
                                         const Clause & c)
{
    const Formula r = frames.denotation(i, sys.init());
    for (std::uint64_t s = 0; s < sys.num_states(); ++s) {
        if (sys.is_initial(State{s}) && !c.holds(State{s})) return false;
        if (!eval(r, State{s}, std::nullopt, sys.width()) || !c.holds(State{s})) continue;
        for (std::uint64_t t = 0; t < sys.num_states(); ++t)
            if (sys.has_transition(State{s}, State{t}) && !c.holds(State{t})) return false;
    }
    return true;
}

// Random frames: clause sets shrinking with the index, built from random clauses.
FrameSeq random_frames(std::mt19937_64 & rng, unsigned width, std::size_t top)
{
    std::vector<std::set<Clause>> sets(top);
    for (std::size_t i = top; i-- > 0;) {
        if (i + 1 < top) sets[i] = sets[i + 1];
        const unsigned n = static_cast<unsigned>(rng() % 3);
        for (unsigned j = 0; j < n; ++j) {
            Clause c;
            const unsigned len = 1 + static_cast<unsigned>(rng() % 2);
            for (unsigned l = 0; l < len; ++l)
                c.lits.push_back(BitLit{static_cast<unsigned>(rng() % width), rng() % 2 == 0});
            if (normalize(c.lits)) sets[i].insert(c);
        }
    }
    FrameSeq f;
    for (auto & s : sets) f.push(s);
    return f;
}

} // namespace

TEST(ClausalForm, Examples)
{
    EXPECT_EQ(clausal_form(parse_formula("b0 | b1 | b2", 3), 3), (std::vector<Clause>{clause({1, 2, 3})}));
    EXPECT_EQ(clausal_form(parse_formula("b0 & b1", 2), 2), (std::vector<Clause>{clause({1}), clause({2})}));
    EXPECT_EQ(clausal_form(parse_formula("!(b0 & b1)", 2), 2), (std::vector<Clause>{clause({-1, -2})}));
    EXPECT_EQ(clausal_form(parse_formula("b0 -> b1", 2), 2), (std::vector<Clause>{clause({-1, 2})}));
    EXPECT_TRUE(clausal_form(parse_formula("true & (b0 | !b0)", 1), 1).empty());
    for (const char * bad : {"b0 <-> b1", "b0 | (b1 & b2)"}) {
        try {
            clausal_form(parse_formula(bad, 3), 3);
            ADD_FAILURE() << bad;
        } catch (const Error & e) {
            EXPECT_EQ(e.kind(), ErrorKind::NonClausalProperty) << bad;
        }
    }
}

TEST(InitFrames, RZeroIsTheInitialPredicate)
{
    const TransitionSystem sys = test::shift3();
    const FrameSeq f = init_frames(sys);
    EXPECT_EQ(f.top(), 1U);
    EXPECT_EQ(f.clauses(1), (std::set<Clause>{clause({1, 2, 3})}));
    EXPECT_THROW(f.clauses(0), std::out_of_range);
    EXPECT_TRUE(f.denotation(0, sys.init()) == sys.init());

    const TransitionSystem both = test::make_system(2, "b0 & b1", "true", "b0 & b1");
    EXPECT_EQ(init_frames(both).clauses(1), (std::set<Clause>{clause({1}), clause({2})}));
    EXPECT_THROW(init_frames(test::make_system(2, "true", "true", "b0 <-> b1")), Error);
}

TEST(FindBadCube, Examples)
{
    const TransitionSystem sys = test::shift3();
    EXPECT_FALSE(find_bad_cube(init_frames(sys), 1, sys));

    const TransitionSystem mutant = test::mutant();
    // No state of the shift register steps into 0, so the mutant's only bad state is initial.
    EXPECT_FALSE(find_bad_cube(init_frames(mutant), 1, mutant));

    // 0 -> 1 -> 2 -> 3 counter with 3 bad.
    const TransitionSystem counter =
        test::make_system(2, "!b0 & !b1", "(b0' <-> !b0) & (b1' <-> !(b1 <-> b0))", "!(b0 & b1)");
    const auto bad = find_bad_cube(init_frames(counter), 1, counter);
    ASSERT_TRUE(bad);
    EXPECT_TRUE(bad->cube.contains(State{2}));
    EXPECT_EQ(bad->successor.value, 3U);
    EXPECT_EQ(bad->cube.lits.size(), 2U);
}

TEST(Generalize, InitiationGuardKeepsTheInitialState)
{
    // I = {1}; 1 -> 2, every other state loops. Dropping !b1 from !cube(3)
    // would be inductive relative to R_1 but exclude the initial state.
    const TransitionSystem sys = test::make_system(2, "b0 & !b1", "(b0' <-> (b0 & b1)) & (b1' <-> (b0 | b1))",
                                                   "!(b0 & b1)", "guard");
    const FrameSeq frames = init_frames(sys);
    const Clause c = generalize(frames, 1, Cube::of_state(State{3}, 2), sys);
    EXPECT_EQ(c, clause({-1, -2}));
    EXPECT_TRUE(relatively_inductive_by_enumeration(frames, 1, sys, c));
}

TEST(Generalize, ResultIsRelativelyInductiveOverAllPairs)
{
    harness::CorpusSpec spec;
    spec.max_width = 3;
    std::size_t checked = 0;
    for (std::size_t idx = 0; idx < 80; ++idx) {
        const TransitionSystem sys = harness::gen_system(spec, idx);
        FrameSeq frames;
        try {
            frames = init_frames(sys);
        } catch (const Error &) {
            continue;
        }
        for (std::uint64_t s = 0; s < sys.num_states(); ++s) {
            const Cube cube = Cube::of_state(State{s}, sys.width());
            if (!relatively_inductive_by_enumeration(frames, 1, sys, negate(cube))) continue;
            const Clause c = generalize(frames, 1, cube, sys);
            ++checked;
            EXPECT_FALSE(c.lits.empty());
            EXPECT_FALSE(c.holds(State{s}));
            for (const BitLit & l : c.lits)
                EXPECT_TRUE(std::find(negate(cube).lits.begin(), negate(cube).lits.end(), l) !=
                            negate(cube).lits.end());
            EXPECT_TRUE(relatively_inductive_by_enumeration(frames, 1, sys, c)) << idx << " " << s;
        }
    }
    EXPECT_GT(checked, 50U);
}

TEST(Refine, AddsToEveryFrameUpToIPlusOne)
{
    FrameSeq f;
    f.push({});
    f.push({});
    f.push({});
    const FrameSeq g = refine(f, 1, clause({1}));
    EXPECT_EQ(g.clauses(1).size(), 1U);
    EXPECT_EQ(g.clauses(2).size(), 1U);
    EXPECT_TRUE(g.clauses(3).empty());
    EXPECT_TRUE(f.clauses(1).empty());
    EXPECT_TRUE(g.syntactically_monotone());
    EXPECT_THROW(refine(f, 3, clause({1})), std::out_of_range);
}

TEST(Converged, SyntacticAndSemantic)
{
    const TransitionSystem sys = test::shift3();
    const FrameSeq f = shift3_frames();
    EXPECT_FALSE(converged_syntactic(f, 0));
    EXPECT_TRUE(converged_syntactic(f, 1));
    EXPECT_FALSE(converged(f, 0, sys));
    EXPECT_TRUE(converged(f, 1, sys));

    // Equal denotations with different clause sets: semantic only.
    FrameSeq g;
    g.push({clause({1}), clause({1, 2})});
    g.push({clause({1})});
    EXPECT_FALSE(converged_syntactic(g, 1));
    EXPECT_TRUE(converged(g, 1, sys));
}

TEST(TruePost, ShiftRegisterFrames)
{
    const TransitionSystem sys = test::shift3();
    const FrameSeq f = shift3_frames();
    for (CheckMethod m : {CheckMethod::Sat, CheckMethod::Enumerate}) {
        const TruePostReport at1 = check_true_postcondition(f, 1, sys, m);
        EXPECT_TRUE(at1.all_pass());
        EXPECT_TRUE(at1.exists_form);

        const TruePostReport at0 = check_true_postcondition(f, 0, sys, m);
        for (int n = 0; n < 4; ++n) EXPECT_TRUE(at0.items[n].pass) << at0.items[n].item;
        ASSERT_FALSE(at0.items[4].pass);
        EXPECT_EQ(at0.items[4].index, 0U);
        EXPECT_FALSE(at0.exists_form);
    }
    const TruePostReport e = check_true_postcondition(f, 0, sys, CheckMethod::Enumerate);
    EXPECT_EQ(e.items[4].witness->values(), (std::vector<std::uint64_t>{1}));
}

TEST(TruePost, EmptyCertificateFails)
{
    const TransitionSystem sys = test::shift3();
    const TruePostReport r = check_true_postcondition(FrameSeq{}, 0, sys, CheckMethod::Enumerate);
    EXPECT_FALSE(r.all_pass());
    // R_1 reads as R_0 = I; I -> R_1 and R_1 -> P hold, but I is not closed.
    EXPECT_FALSE(r.items[3].pass);
}

TEST(TruePost, SatAndEnumerationAgree)
{
    std::mt19937_64 rng(12);
    harness::CorpusSpec spec;
    for (std::size_t idx = 0; idx < 100; ++idx) {
        const TransitionSystem sys = harness::gen_system(spec, idx);
        const std::size_t top = 1 + rng() % 3;
        const FrameSeq f = random_frames(rng, sys.width(), top);
        const std::size_t k = rng() % (top + 1);
        const TruePostReport a = check_true_postcondition(f, k, sys, CheckMethod::Sat);
        const TruePostReport b = check_true_postcondition(f, k, sys, CheckMethod::Enumerate);
        for (int n = 0; n < 5; ++n) {
            EXPECT_EQ(a.items[n].pass, b.items[n].pass) << idx << " item " << a.items[n].item;
            EXPECT_EQ(a.items[n].index, b.items[n].index) << idx;
        }
        EXPECT_EQ(a.exists_form, b.exists_form);
    }
}

TEST(FalsePost, Items)
{
    const FalsePostReport m = check_false_postcondition(test::mutant(), 0);
    EXPECT_FALSE(m.items[0].pass);
    EXPECT_EQ(m.items[0].witness->values(), (std::vector<std::uint64_t>{0}));
    const FalsePostReport s = check_false_postcondition(test::shift3(), 3);
    EXPECT_TRUE(s.all_pass());
}

TEST(FalsePost, UniversalReadingEqualsTrueReading)
{
    harness::CorpusSpec spec;
    std::mt19937_64 rng(2012);
    for (std::size_t trial = 0; trial < 200; ++trial) {
        const TransitionSystem sys = harness::gen_system(spec, trial);
        const unsigned k = static_cast<unsigned>(rng() % 5);
        const FrameSeq f = random_frames(rng, sys.width(), 1 + rng() % 4);
        const bool universal = false_c_universal_reading(sys, k);
        EXPECT_EQ(universal, false_c_true_reading(sys, k)) << trial;
        // Fixing the frames only strengthens the premise.
        if (universal) EXPECT_TRUE(false_c_instance(sys, f, k)) << trial;
    }
}

TEST(FalsePost, UniversalReadingMatchesExplicitQuantification)
{
    harness::CorpusSpec spec;
    spec.max_width = 2;
    for (std::size_t idx = 0; idx < 40; ++idx) {
        const TransitionSystem sys = harness::gen_system(spec, idx);
        for (unsigned k = 0; k <= 3; ++k)
            EXPECT_EQ(false_c_universal_enumerated(sys, k), false_c_universal_reading(sys, k)) << idx << " " << k;
    }
}

TEST(RunPdr, ShiftRegisterCertificateIsTheTwoFrameSet)
{
    const TransitionSystem sys = test::shift3();
    const Verdict v = run_pdr(sys);
    ASSERT_EQ(v.outcome, Verdict::Outcome::Safe);
    EXPECT_EQ(v.k, 1U);
    ASSERT_TRUE(v.certificate);
    EXPECT_EQ(*v.certificate, shift3_frames());
    EXPECT_TRUE(check_true_postcondition(*v.certificate, v.k, sys, CheckMethod::Enumerate).all_pass());
}

TEST(RunPdr, AgreesWithReachability)
{
    harness::CorpusSpec spec;
    for (std::size_t idx = 0; idx < 150; ++idx) {
        const TransitionSystem sys = harness::gen_system(spec, idx);
        const bool safe = oracle::reach(sys).safe;
        const Verdict v = run_pdr(sys);
        ASSERT_NE(v.outcome, Verdict::Outcome::Unknown) << idx << " " << v.reason;
        EXPECT_EQ(v.outcome == Verdict::Outcome::Safe, safe) << idx;
        if (v.outcome == Verdict::Outcome::Safe) {
            EXPECT_TRUE(v.certificate->syntactically_monotone());
            EXPECT_TRUE(check_true_postcondition(*v.certificate, v.k, sys, CheckMethod::Enumerate).all_pass());
        } else {
            EXPECT_TRUE(oracle::validate_trace(sys, *v.trace)) << idx;
        }
    }
}

TEST(RunPdr, CounterexampleDepths)
{
    const TransitionSystem counter =
        test::make_system(2, "!b0 & !b1", "(b0' <-> !b0) & (b1' <-> !(b1 <-> b0))", "!(b0 & b1)");
    const Verdict v = run_pdr(counter);
    ASSERT_EQ(v.outcome, Verdict::Outcome::Unsafe);
    EXPECT_EQ(v.trace->values(), (std::vector<std::uint64_t>{0, 1, 2, 3}));

    const TransitionSystem one_step = test::make_system(1, "!b0", "b0'", "!b0");
    const Verdict w = run_pdr(one_step);
    ASSERT_EQ(w.outcome, Verdict::Outcome::Unsafe);
    EXPECT_EQ(w.trace->values(), (std::vector<std::uint64_t>{0, 1}));
}

TEST(RunPdr, BudgetGivesUnknown)
{
    PdrOptions o;
    o.k_max = 0;
    const Verdict v = run_pdr(test::shift3(), o);
    EXPECT_EQ(v.outcome, Verdict::Outcome::Unknown);
}

TEST(Certificate, RoundTripAndErrors)
{
    const FrameSeq f = shift3_frames();
    EXPECT_EQ(write_certificate(f), "frame 0\nframe 1\n1 2 3 0\nframe 2\n1 2 3 0\n");
    EXPECT_EQ(parse_certificate(write_certificate(f), 3), f);
    EXPECT_EQ(parse_certificate("c empty\n", 3), FrameSeq{});

    for (const char * bad : {"frame 1\n", "frame 0\n1 0\n", "frame 0\nframe 1\n4 0\n", "frame 0\nframe 1\n1 2\n",
                             "frame 0\nframe 1\n1 -1 0\n", "frame 0\nframe 2\n", "frame 0\nframe 1\nx 0\n"}) {
        try {
            parse_certificate(bad, 3);
            ADD_FAILURE() << bad;
        } catch (const ParseError & e) {
            EXPECT_EQ(e.kind(), ErrorKind::CertificateParseError) << bad;
        }
    }
}

TEST(Certificate, DenotationPastTheTop)
{
    const TransitionSystem sys = test::shift3();
    const FrameSeq f = shift3_frames();
    EXPECT_TRUE(holds_everywhere(iff(f.denotation(5, sys.init()), f.denotation(2, sys.init())), 3));
}
