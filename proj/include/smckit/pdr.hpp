/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#ifndef SMCKIT_PDR_HPP
#define SMCKIT_PDR_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smckit/encoders.hpp"
#include "smckit/frames.hpp"
#include "smckit/sat.hpp"
#include "smckit/system.hpp"

namespace smckit {

/// Clauses of a state formula that is a conjunction of disjunctions of bit
/// literals once negations are pushed inward. Throws NonClausalProperty.
std::vector<Clause> clausal_form(const Formula & state_formula, unsigned width);

/// R_0 = I, R_1 = clauses of P.
FrameSeq init_frames(const TransitionSystem & sys);

struct BadCube {
    Cube cube;       // full assignment of the bad state
    State successor; // its successor violating P
};

/// Some state in R_k with a successor outside P.
std::optional<BadCube> find_bad_cube(const FrameSeq & frames, std::size_t k, const TransitionSystem & sys,
                                     const SolverConfig & solver = {});

/// Shrinks !cube by dropping literals in ascending bit order while the clause
/// stays nonempty, holds on every initial state, and satisfies
/// R_i & C & T -> C'. Requires !cube itself to pass both checks.
Clause generalize(const FrameSeq & frames, std::size_t i, const Cube & cube, const TransitionSystem & sys,
                  const SolverConfig & solver = {});

/// Copy of `frames` with C added to R_1 .. R_{i+1}.
FrameSeq refine(FrameSeq frames, std::size_t i, const Clause & c);

/// clauses(R_k) is a subset of clauses(R_{k+1}); never true for k == 0.
bool converged_syntactic(const FrameSeq & frames, std::size_t k);

/// R_k <-> R_{k+1} as two validity queries. Agreement with the syntactic
/// test is asserted whenever the syntactic test succeeds.
bool converged(const FrameSeq & frames, std::size_t k, const TransitionSystem & sys,
               const SolverConfig & solver = {});

// ---------------------------------------------------------------------------
// Post-condition checkers

enum class CheckMethod { Auto, Sat, Enumerate };

struct ItemReport {
    char item = 'a';
    bool pass = true;
    std::optional<std::size_t> index; // failing frame index
    std::optional<StateSeq> witness;  // one state, or (s, s') for item d
};

struct TruePostReport {
    std::array<ItemReport, 5> items; // a .. e
    bool exists_form = false;        // some i <= k has R_i <-> R_{i+1}
    bool all_pass() const;
};

/// Items (a)-(e) over frames 0 .. k+1, reading R_i as the top frame past the
/// end of the sequence. Auto enumerates states when width <= 10 and queries
/// the solver otherwise; enumeration yields the numerically smallest
/// witnesses.
TruePostReport check_true_postcondition(const FrameSeq & frames, std::size_t k, const TransitionSystem & sys,
                                        CheckMethod method = CheckMethod::Auto, const SolverConfig & solver = {});

struct FalsePostReport {
    std::array<ItemReport, 3> items; // a .. c
    bool all_pass() const;
};

FalsePostReport check_false_postcondition(const TransitionSystem & sys, unsigned k, const SolverConfig & solver = {});

// Readings of the bounded item (c) of the false case.

/// Every initial path of k transitions ends in P.
bool false_c_true_reading(const TransitionSystem & sys, unsigned k, const SolverConfig & solver = {});
/// The quantified R_0 .. R_{k-1} become free propositional atoms, one per
/// step, since each R_i is applied to a single state.
bool false_c_universal_reading(const TransitionSystem & sys, unsigned k, const SolverConfig & solver = {});
/// R_i fixed to the denotations of `frames`.
bool false_c_instance(const TransitionSystem & sys, const FrameSeq & frames, unsigned k,
                      const SolverConfig & solver = {});
/// Explicit quantification over every tuple of state sets; width <= 2, k <= 3.
bool false_c_universal_enumerated(const TransitionSystem & sys, unsigned k);

// ---------------------------------------------------------------------------

struct PdrOptions {
    unsigned k_max = 64;
    SolverConfig solver;
    std::uint64_t max_obligations = 1'000'000;
};

/// Safe(k) carries frames 0 .. k+1 as certificate, already checked against
/// items (a)-(e). Unsafe traces are validated against the explicit-state
/// checker. Solver limits give Unknown.
Verdict run_pdr(const TransitionSystem & sys, const PdrOptions & options = {});

} // namespace smckit

#endif // SMCKIT_PDR_HPP
