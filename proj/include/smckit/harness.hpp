/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#ifndef SMCKIT_HARNESS_HPP
#define SMCKIT_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "smckit/encoders.hpp"
#include "smckit/system.hpp"

namespace smckit::harness {

struct CorpusSpec {
    std::uint64_t seed = 42;
    std::size_t count = 500;
    unsigned min_width = 1;
    unsigned max_width = 6;
    unsigned max_depth = 4;         // formula depth, at most 6
    unsigned prop_clauses = 2;      // P is a conjunction of up to this many clauses
    unsigned clause_literals = 3;   // literals per clause of P, at most
    unsigned functional_percent = 70; // chance that a next bit is a function of the current state
};

/// Deterministic in (spec.seed, index).
TransitionSystem gen_system(const CorpusSpec & spec, std::size_t index);

/// Random formula of bounded depth; Next variables only when `with_next`.
Formula gen_formula(std::mt19937_64 & rng, unsigned width, unsigned depth, bool with_next);

enum class Engine { Forward, Backward, Sheeran1, KInduction, Pdr, Bmc, Liar };

std::string_view to_string(Engine e);

/// The real engines; Liar (always Safe at k=0) is a harness self-test only.
std::vector<Engine> default_engines();

struct DiffOptions {
    std::vector<Engine> engines = default_engines();
    unsigned lasso_k_max = 12;     // forward, backward, sheeran1, kinduction
    unsigned bmc_k_max = 64;
    unsigned pdr_k_max = 64;
    std::uint64_t conflict_budget = 20'000;
    unsigned jobs = 1;
    bool inject_liar = false;
};

struct EngineStats {
    std::string engine;
    std::size_t safe = 0;
    std::size_t unsafe = 0;
    std::size_t unknown = 0;

    friend bool operator==(const EngineStats &, const EngineStats &) = default;
};

struct Violation {
    std::size_t index = 0;
    std::string engine;
    std::string detail;

    friend bool operator==(const Violation &, const Violation &) = default;
};

struct SoundnessReport {
    std::uint64_t seed = 0;
    std::size_t systems = 0;
    std::size_t oracle_safe = 0;
    std::size_t oracle_unsafe = 0;
    std::size_t loopfree_mismatches = 0; // loop-free safety vs. reachability safety
    std::size_t unsafe_traces_validated = 0;
    std::size_t certificates_checked = 0;
    std::vector<EngineStats> engines; // in DiffOptions order
    std::vector<Violation> violations; // sorted by index, then engine

    friend bool operator==(const SoundnessReport &, const SoundnessReport &) = default;
};

/// Runs every engine on every corpus system and compares with the
/// explicit-state oracle. Safe must mean oracle-safe, Unsafe must mean
/// oracle-unsafe with a trace accepted by validate_trace; bmc traces must
/// have the BFS counterexample length; PDR certificates are re-checked by
/// enumeration. Unknown is counted, never a violation.
SoundnessReport differential_soundness(const CorpusSpec & spec, const DiffOptions & options = {});

/// Verdict of one engine on one system with the harness budgets.
Verdict run_engine(Engine e, const TransitionSystem & sys, const DiffOptions & options);

// ---------------------------------------------------------------------------

struct LemmaStats {
    std::string lemma;
    std::size_t trials = 0;
    std::size_t failures = 0;
    std::size_t vacuous = 0; // trials whose premise was false

    friend bool operator==(const LemmaStats &, const LemmaStats &) = default;
};

/// A sequence with loopF(0, j) and loopF(j, k) but not loopF(0, j+k).
struct ConverseWitness {
    std::string trans; // DSL text
    unsigned width = 0;
    std::vector<std::uint64_t> states;
    std::size_t j = 0;
    std::size_t k = 0;
    std::size_t trial = 0; // 1-based trial on which it was found

    friend bool operator==(const ConverseWitness &, const ConverseWitness &) = default;
};

struct SspReport {
    std::uint64_t seed = 0;
    std::vector<LemmaStats> lemmas; // ssp1 .. ssp6, deletion
    std::size_t converse_trials = 0;
    std::optional<ConverseWitness> converse;

    std::size_t failures() const;
    friend bool operator==(const SspReport &, const SspReport &) = default;
};

/// `trials` random instances per lemma; the converse search of ss&p 5 runs
/// for at most `converse_trials`.
SspReport ssp_suite(std::uint64_t seed, std::size_t trials, std::size_t converse_trials = 10'000);

} // namespace smckit::harness

#endif // SMCKIT_HARNESS_HPP
