/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#include <gtest/gtest.h>

#include "smckit/harness.hpp"
#include "smckit/oracle.hpp"
#include "smckit/report.hpp"
#include "smckit/system.hpp"

using namespace smckit;

TEST(Corpus, DeterministicInSeedAndIndex)
{
    const harness::CorpusSpec spec;
    for (std::size_t idx : {0U, 1U, 17U, 499U})
        EXPECT_EQ(format_system(harness::gen_system(spec, idx)), format_system(harness::gen_system(spec, idx)));
    harness::CorpusSpec other = spec;
    other.seed = 43;
    std::size_t differ = 0;
    for (std::size_t idx = 0; idx < 20; ++idx)
        differ += format_system(harness::gen_system(spec, idx)) != format_system(harness::gen_system(other, idx));
    EXPECT_GT(differ, 15U);
}

TEST(Corpus, WidthRangeAndVerdictMix)
{
    harness::CorpusSpec spec;
    spec.count = 500;
    std::size_t safe = 0;
    std::vector<std::size_t> per_width(spec.max_width + 1, 0);
    for (std::size_t idx = 0; idx < spec.count; ++idx) {
        const TransitionSystem sys = harness::gen_system(spec, idx);
        ASSERT_GE(sys.width(), spec.min_width);
        ASSERT_LE(sys.width(), spec.max_width);
        ++per_width[sys.width()];
        safe += oracle::reach(sys).safe;
        // Systems survive a round trip through the text format.
        EXPECT_EQ(format_system(parse_system(format_system(sys))), format_system(sys));
    }
    EXPECT_GE(safe, spec.count / 10);
    EXPECT_GE(spec.count - safe, spec.count / 10);
    for (unsigned w = spec.min_width; w <= spec.max_width; ++w) EXPECT_GT(per_width[w], 0U) << w;
}

TEST(Differential, SmallCorpusIsSound)
{
    harness::CorpusSpec spec;
    spec.count = 60;
    const harness::SoundnessReport r = harness::differential_soundness(spec);
    EXPECT_TRUE(r.violations.empty());
    EXPECT_EQ(r.systems, 60U);
    EXPECT_EQ(r.oracle_safe + r.oracle_unsafe, 60U);
    EXPECT_EQ(r.loopfree_mismatches, 0U);
    EXPECT_EQ(r.engines.size(), harness::default_engines().size());
    EXPECT_GT(r.unsafe_traces_validated, 0U);
    EXPECT_GT(r.certificates_checked, 0U);
    for (const auto & e : r.engines) EXPECT_EQ(e.safe + e.unsafe + e.unknown, 60U) << e.engine;
}

TEST(Differential, JobsDoNotChangeTheReport)
{
    harness::CorpusSpec spec;
    spec.count = 40;
    harness::DiffOptions one;
    harness::DiffOptions four;
    four.jobs = 4;
    EXPECT_EQ(harness::differential_soundness(spec, one), harness::differential_soundness(spec, four));
}

TEST(Differential, LiarIsCaught)
{
    harness::CorpusSpec spec;
    spec.count = 20;
    harness::DiffOptions o;
    o.inject_liar = true;
    const harness::SoundnessReport r = harness::differential_soundness(spec, o);
    ASSERT_FALSE(r.violations.empty());
    for (const auto & v : r.violations) EXPECT_EQ(v.engine, "liar");
    EXPECT_EQ(r.violations.size(), r.oracle_unsafe);
}

TEST(Ssp, LemmasHoldAndConverseIsFound)
{
    const harness::SspReport r = harness::ssp_suite(42, 300);
    EXPECT_EQ(r.failures(), 0U);
    ASSERT_EQ(r.lemmas.size(), 7U);
    EXPECT_EQ(r.lemmas.front().lemma, "ssp1");
    EXPECT_EQ(r.lemmas.back().lemma, "deletion");
    for (const auto & l : r.lemmas) {
        EXPECT_EQ(l.trials, 300U) << l.lemma;
        EXPECT_LT(l.vacuous, l.trials) << l.lemma;
    }
    ASSERT_TRUE(r.converse);
    EXPECT_LE(r.converse->trial, 10'000U);
    // The witness really is a counterexample to the converse.
    const harness::ConverseWitness & w = *r.converse;
    const Formula t = parse_formula(w.trans, w.width);
    std::vector<State> ss;
    for (auto v : w.states) ss.push_back(State{v});
    const StateSeq seq(w.width, ss);
    EXPECT_TRUE(loop_free(t, seq, 0, w.j));
    EXPECT_TRUE(loop_free(t, seq, w.j, w.k));
    EXPECT_FALSE(loop_free(t, seq, 0, w.j + w.k));
}

TEST(Ssp, Deterministic)
{
    EXPECT_EQ(harness::ssp_suite(7, 50, 100), harness::ssp_suite(7, 50, 100));
}

TEST(Report, FuzzRoundTrip)
{
    harness::CorpusSpec spec;
    spec.count = 15;
    report::FuzzReport r;
    r.soundness = harness::differential_soundness(spec);
    r.ssp = harness::ssp_suite(1, 20);
    r.passed = true;
    EXPECT_EQ(report::parse_fuzz(report::to_json(r)), r);
    EXPECT_NE(report::text_table(r).find("sheeran1"), std::string::npos);
    EXPECT_THROW(report::parse_fuzz("{\"schema\":\"2\"}"), std::invalid_argument);
    EXPECT_THROW(report::parse_fuzz("not json"), std::invalid_argument);
}

TEST(Report, CheckAndCertifyRoundTrip)
{
    report::CheckReport c{"shift3", "pdr", "SAFE", 1, {}, std::string("out/shift3.cert"), ""};
    EXPECT_EQ(report::parse_check(report::to_json(c)), c);
    report::CheckReport u{"mutant", "bmc", "UNSAFE", 0, {"000"}, std::nullopt, ""};
    EXPECT_EQ(report::parse_check(report::to_json(u)), u);
    report::CertifyReport z{"shift3", 0, {{'a', true, std::nullopt, {}}, {'e', false, 0, {"001"}}}, false};
    EXPECT_EQ(report::parse_certify(report::to_json(z)), z);
    EXPECT_THROW(report::parse_certify(report::to_json(c)), std::invalid_argument);
}
