/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#ifndef SMCKIT_ENCODERS_HPP
#define SMCKIT_ENCODERS_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smckit/frames.hpp"
#include "smckit/sat.hpp"
#include "smckit/system.hpp"

namespace smckit {

/// Boolean combination of validity queries.
struct EncodedFormula {
    enum class Kind { Leaf, Not, And, Or };

    Kind kind = Kind::Leaf;
    ValidityQuery query;                  // Leaf only
    std::vector<EncodedFormula> children; // Not: one child

    static EncodedFormula leaf(ValidityQuery q);
    static EncodedFormula negation(EncodedFormula f);
    static EncodedFormula conjunction(std::vector<EncodedFormula> fs);
    static EncodedFormula disjunction(std::vector<EncodedFormula> fs);

    /// Leaves in left-to-right order; a leaf's position is its index.
    std::vector<const ValidityQuery *> leaves() const;
};

enum class Method { Bounded, Forward, Backward, Sheeran1, KInduction };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

// Symbolic building blocks over an unrolled window.

/// path over steps o .. o+len.
TimedFormula unrolled_path(const TransitionSystem & sys, unsigned o, unsigned len);
/// Some bit differs between the states at steps i and j.
TimedFormula states_differ(unsigned width, unsigned i, unsigned j);
/// path plus pairwise distinct states over steps o .. o+len.
TimedFormula unrolled_loop_free(const TransitionSystem & sys, unsigned o, unsigned len);

// Leaf queries, in negated-conjunction form.

/// forall s_[0..i]. !(I(s_0) & path(s_[0..i]) & !P(s_i))
ValidityQuery bounded_query(const TransitionSystem & sys, unsigned i);
/// forall s_[0..k]. !(I(s_0) & loopF(s_[0..k]))
ValidityQuery forward_query(const TransitionSystem & sys, unsigned k);
/// forall s_[0..k]. !(loopF(s_[0..k]) & !P(s_k))
ValidityQuery backward_query(const TransitionSystem & sys, unsigned k);
/// forall s_[0..k+1]. !(path(s_[0..k+1]) & P(s_0) & .. & P(s_k) & !P(s_{k+1}))
ValidityQuery induction_query(const TransitionSystem & sys, unsigned k);

EncodedFormula encode_bounded(const TransitionSystem & sys, unsigned k);
EncodedFormula encode_forward(const TransitionSystem & sys, unsigned k);
EncodedFormula encode_backward(const TransitionSystem & sys, unsigned k);
EncodedFormula encode_sheeran1(const TransitionSystem & sys, unsigned k);
EncodedFormula encode_kinduction(const TransitionSystem & sys, unsigned k);
EncodedFormula encode(Method m, const TransitionSystem & sys, unsigned k);

// ---------------------------------------------------------------------------
// Discharge

enum class Truth { False, True, Unknown };

std::string_view to_string(Truth t);

/// Decides one leaf; may throw Error(ResourceLimit).
using LeafChecker = std::function<QueryOutcome(const ValidityQuery &)>;

LeafChecker make_checker(unsigned width, const SolverConfig & config = {});

struct LeafReport {
    enum class Status { Valid, Refuted, ResourceLimit, Skipped };

    std::size_t index = 0;
    std::string label;
    Status status = Status::Skipped;
};

struct Discharge {
    Truth value = Truth::Unknown;
    std::map<std::size_t, StateSeq> witnesses; // leaf index -> refuting sequence
    std::vector<LeafReport> leaves;
};

/// Replaces each leaf by its validity verdict and evaluates the combination
/// in three-valued logic. With jobs == 1 leaves are checked left to right and
/// evaluation short-circuits; with more jobs every leaf is checked
/// concurrently first. The result does not depend on `jobs` except through
/// which leaves are reported as Skipped.
Discharge discharge(const EncodedFormula & f, const LeafChecker & checker, unsigned jobs = 1);

// ---------------------------------------------------------------------------
// Verdicts and the unbounded driver

struct Verdict {
    enum class Outcome { Safe, Unsafe, Unknown };

    Outcome outcome = Outcome::Unknown;
    unsigned k = 0;
    std::optional<StateSeq> trace;        // Unsafe
    std::optional<FrameSeq> certificate;  // Safe from PDR
    std::string reason;                   // Unknown

    static Verdict safe(unsigned k);
    static Verdict unsafe(unsigned k, StateSeq trace);
    static Verdict unknown(unsigned k, std::string reason);
};

std::string_view to_string(Verdict::Outcome o);

struct UnboundedOptions {
    unsigned k_max = 64;
    SolverConfig solver;
    unsigned jobs = 1;
};

/// Iterates k = 0 .. k_max: Safe(k) when the true-side encoding holds,
/// Unsafe when the depth-k bounded conjunct is refuted, otherwise continue.
/// Unsafe traces are validated against the explicit-state checker before
/// being returned.
Verdict run_unbounded(const TransitionSystem & sys, Method true_method, const UnboundedOptions & options = {});

/// Bounded search only: Unsafe with the shortest counterexample up to depth
/// k_max, otherwise Unknown ("no counterexample up to k").
Verdict run_bmc(const TransitionSystem & sys, const UnboundedOptions & options = {});

/// One round of the scheme at a fixed k.
Verdict check_at(const TransitionSystem & sys, Method true_method, unsigned k, const UnboundedOptions & options = {});

} // namespace smckit

#endif // SMCKIT_ENCODERS_HPP
